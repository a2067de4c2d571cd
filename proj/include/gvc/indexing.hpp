#pragma once

#include <string>
#include <utility>
#include <vector>

namespace gvc {

/// Ordered country and sector code lists shared by every table of one world
/// economy. Codes are unique within each list; order fixes the node indexing.
struct Labels {
  std::vector<std::string> countries;
  std::vector<std::string> sectors;

  int country_count() const { return static_cast<int>(countries.size()); }
  int sector_count() const { return static_cast<int>(sectors.size()); }
  int grid_size() const { return country_count() * sector_count(); }

  /// Validates non-emptiness and in-list uniqueness.
  static Labels checked(std::vector<std::string> countries,
                        std::vector<std::string> sectors);

  bool operator==(const Labels&) const = default;
};

/// A country-industry pair, stored as 0-based ordinals into Labels.
struct NodeId {
  int country = 0;
  int sector = 0;

  bool operator==(const NodeId&) const = default;
};

/// Canonical node numbering of the full country x sector grid:
/// flat = (country - 1) * sectors + sector, all 1-based.
/// Throws DomainError for out-of-range ordinals.
int flat_index(int country_ordinal, int sector_ordinal, int countries,
               int sectors);

/// Inverse of flat_index; returns 1-based (country, sector).
std::pair<int, int> unflatten(int flat, int countries, int sectors);

/// The full grid in canonical order, as 0-based NodeIds.
std::vector<NodeId> grid_nodes(int countries, int sectors);

}  // namespace gvc
