#include "gvc/indexing.hpp"

#include <unordered_set>

#include "gvc/errors.hpp"

namespace gvc {

namespace {

void require_unique(const std::vector<std::string>& codes, const char* what) {
  if (codes.empty()) throw DomainError(std::string(what) + " list is empty");
  std::unordered_set<std::string> seen;
  for (const auto& code : codes) {
    if (code.empty()) throw DomainError(std::string(what) + " code is empty");
    if (!seen.insert(code).second)
      throw DomainError(std::string("duplicate ") + what + " code: " + code);
  }
}

}  // namespace

Labels Labels::checked(std::vector<std::string> countries,
                       std::vector<std::string> sectors) {
  require_unique(countries, "country");
  require_unique(sectors, "sector");
  return Labels{std::move(countries), std::move(sectors)};
}

int flat_index(int country_ordinal, int sector_ordinal, int countries,
               int sectors) {
  if (country_ordinal < 1 || country_ordinal > countries)
    throw DomainError("country ordinal " + std::to_string(country_ordinal) +
                      " outside 1.." + std::to_string(countries));
  if (sector_ordinal < 1 || sector_ordinal > sectors)
    throw DomainError("sector ordinal " + std::to_string(sector_ordinal) +
                      " outside 1.." + std::to_string(sectors));
  return (country_ordinal - 1) * sectors + sector_ordinal;
}

std::pair<int, int> unflatten(int flat, int countries, int sectors) {
  const int n = countries * sectors;
  if (flat < 1 || flat > n)
    throw DomainError("flat index " + std::to_string(flat) + " outside 1.." +
                      std::to_string(n));
  const int country = (flat - 1) / sectors + 1;
  const int sector = (flat - 1) % sectors + 1;
  return {country, sector};
}

std::vector<NodeId> grid_nodes(int countries, int sectors) {
  std::vector<NodeId> nodes;
  nodes.reserve(static_cast<std::size_t>(countries) * sectors);
  for (int c = 0; c < countries; ++c)
    for (int s = 0; s < sectors; ++s) nodes.push_back(NodeId{c, s});
  return nodes;
}

}  // namespace gvc
