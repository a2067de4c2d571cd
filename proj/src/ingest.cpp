#include "gvc/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "gvc/errors.hpp"
#include "gvc/networks.hpp"
#include "gvc/reports.hpp"
#include "gvc/rng.hpp"
#include "gvc/spectral.hpp"

namespace gvc {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return fields;
}

double parse_value(const std::string& token, std::size_t line) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    throw ParseError("cannot parse value '" + token + "'", line);
  }
  if (used != token.size())
    throw ParseError("trailing junk in value '" + token + "'", line);
  if (!std::isfinite(value))
    throw ParseError("non-finite value '" + token + "'", line);
  return value;
}

int parse_int(const std::string& token, std::size_t line) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw ParseError("cannot parse integer '" + token + "'", line);
  }
}

class CodeIndex {
 public:
  explicit CodeIndex(const std::vector<std::string>& codes) {
    for (std::size_t i = 0; i < codes.size(); ++i)
      index_[codes[i]] = static_cast<int>(i);
  }
  CodeIndex() = default;

  int at(const std::string& code, const char* what, std::size_t line) const {
    const auto it = index_.find(code);
    if (it == index_.end())
      throw ParseError(std::string("unknown ") + what + " code '" + code +
                           "' (not declared)",
                       line);
    return it->second;
  }

  // Ordered discovery: returns the index, inserting on first sight.
  int discover(const std::string& code, std::vector<std::string>& order) {
    const auto it = index_.find(code);
    if (it != index_.end()) return it->second;
    const int id = static_cast<int>(order.size());
    order.push_back(code);
    index_[code] = id;
    return id;
  }

  bool contains(const std::string& code) const {
    return index_.count(code) > 0;
  }

 private:
  std::unordered_map<std::string, int> index_;
};

constexpr char kCanonicalHeader[] =
    "kind,origin_country,origin_sector,dest_country,dest_sector,value";

}  // namespace

Economy parse_canonical_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> countries, sectors;
  int year = 0;
  bool saw_header = false;

  // Directive preamble, then the fixed header.
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty()) continue;
    if (text.rfind("#countries ", 0) == 0) {
      countries = split(text.substr(11), ',');
    } else if (text.rfind("#sectors ", 0) == 0) {
      sectors = split(text.substr(9), ',');
    } else if (text.rfind("#year ", 0) == 0) {
      year = parse_int(trim(text.substr(6)), line_no);
    } else if (text.rfind('#', 0) == 0) {
      throw ParseError("unknown directive '" + text + "'", line_no);
    } else if (text == kCanonicalHeader) {
      saw_header = true;
      break;
    } else {
      throw ParseError(
          "expected directives or the canonical header before data", line_no);
    }
  }
  if (!saw_header) throw ParseError("empty file: no canonical header found");
  if (countries.empty())
    throw ParseError("missing #countries directive", line_no);
  if (sectors.empty()) throw ParseError("missing #sectors directive", line_no);

  const Labels labels = Labels::checked(countries, sectors);
  const CodeIndex country_index(labels.countries);
  const CodeIndex sector_index(labels.sectors);
  const int n = labels.grid_size();
  const int S = labels.sector_count();
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n, labels.country_count());

  std::size_t records = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty()) continue;
    const std::vector<std::string> fields = split(text, ',');
    if (fields.size() != 6)
      throw ParseError("expected 6 fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    const std::string& kind = fields[0];
    const int oc = country_index.at(fields[1], "country", line_no);
    const int os = sector_index.at(fields[2], "sector", line_no);
    const int dc = country_index.at(fields[3], "country", line_no);
    const double value = parse_value(fields[5], line_no);
    const int origin = oc * S + os;

    if (kind == "intermediate") {
      if (fields[4].empty())
        throw ParseError("intermediate record needs a dest_sector", line_no);
      const int ds = sector_index.at(fields[4], "sector", line_no);
      Z(origin, dc * S + ds) += value;
    } else if (kind == "final") {
      if (!fields[4].empty())
        throw ParseError("final record must leave dest_sector empty", line_no);
      F(origin, dc) += value;
    } else {
      throw ParseError("unknown kind '" + kind + "'", line_no);
    }
    ++records;
  }
  if (records == 0) throw ParseError("empty file: no records after header");

  SanitizedComponents parts = sanitize_components(labels, std::move(Z),
                                                  std::move(F));
  return Economy::from_sanitized(labels, std::move(parts), year);
}

void write_canonical_csv(const Economy& economy, std::ostream& out) {
  const Labels& labels = economy.labels();
  out << "#countries ";
  for (std::size_t i = 0; i < labels.countries.size(); ++i)
    out << (i > 0 ? "," : "") << labels.countries[i];
  out << "\n#sectors ";
  for (std::size_t i = 0; i < labels.sectors.size(); ++i)
    out << (i > 0 ? "," : "") << labels.sectors[i];
  out << "\n#year " << economy.year() << '\n';
  out << kCanonicalHeader << '\n';

  const auto code = [&](int node) {
    return labels.countries[economy.country_of(node)] + "," +
           labels.sectors[economy.sector_of(node)];
  };
  const Eigen::MatrixXd& Z = economy.intermediates();
  for (int i = 0; i < economy.node_count(); ++i) {
    for (int j = 0; j < economy.node_count(); ++j) {
      if (Z(i, j) != 0.0)
        out << "intermediate," << code(i) << ',' << code(j) << ','
            << reports::format_value(Z(i, j)) << '\n';
    }
  }
  const Eigen::MatrixXd& F = economy.final_use();
  for (int i = 0; i < economy.node_count(); ++i) {
    for (int c = 0; c < labels.country_count(); ++c) {
      if (F(i, c) != 0.0)
        out << "final," << code(i) << ',' << labels.countries[c] << ",,"
            << reports::format_value(F(i, c)) << '\n';
    }
  }
}

LongFormatColumns LongFormatColumns::from_config(std::istream& in) {
  LongFormatColumns columns;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected key=value", line_no);
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key == "origin_country") columns.origin_country = value;
    else if (key == "origin_sector") columns.origin_sector = value;
    else if (key == "dest_country") columns.dest_country = value;
    else if (key == "use_category") columns.use_category = value;
    else if (key == "value") columns.value = value;
    else if (key == "year") columns.year = value;
    else if (key == "fd_categories") columns.fd_categories = split(value, ',');
    else if (key == "value_added_code") columns.value_added_code = value;
    else if (key == "gross_output_code") columns.gross_output_code = value;
    else throw ParseError("unknown column-map key '" + key + "'", line_no);
  }
  return columns;
}

namespace {

struct LongRow {
  enum class Kind { kIntermediate, kFinal, kValueAdded, kGrossOutput };
  Kind kind;
  int origin_country = -1;
  int origin_sector = -1;
  int dest_country = -1;
  int dest_sector = -1;  // intermediate use sector
  double value = 0.0;
};

}  // namespace

LongFormatResult parse_wiot_long(std::istream& in,
                                 const LongFormatColumns& columns,
                                 double tau_acct) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty file: missing header");
  ++line_no;

  const std::vector<std::string> header = split(line, ',');
  const auto column_of = [&](const std::string& name,
                             bool required) -> int {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    if (required)
      throw ParseError("missing column '" + name + "' in header", 1);
    return -1;
  };
  const int col_oc = column_of(columns.origin_country, true);
  const int col_os = column_of(columns.origin_sector, true);
  const int col_dc = column_of(columns.dest_country, true);
  const int col_use = column_of(columns.use_category, true);
  const int col_value = column_of(columns.value, true);
  const int col_year = column_of(columns.year, false);

  const std::unordered_set<std::string> fd_set(columns.fd_categories.begin(),
                                               columns.fd_categories.end());

  std::vector<std::string> countries, sectors;
  CodeIndex country_index, sector_index;
  std::unordered_set<int> origin_countries, dest_countries;
  std::unordered_set<std::string> origin_sectors, use_sectors;
  std::vector<LongRow> rows;
  std::optional<int> year;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty()) continue;
    const std::vector<std::string> fields = split(text, ',');
    if (fields.size() != header.size())
      throw ParseError("expected " + std::to_string(header.size()) +
                           " fields, got " + std::to_string(fields.size()),
                       line_no);
    if (col_year >= 0) {
      const int row_year = parse_int(fields[col_year], line_no);
      if (!year) year = row_year;
      else if (*year != row_year)
        throw ParseError("multiple years in one file (" +
                             std::to_string(*year) + " and " +
                             std::to_string(row_year) + ")",
                         line_no);
    }

    LongRow row;
    row.value = parse_value(fields[col_value], line_no);
    const std::string& oc = fields[col_oc];
    const std::string& use = fields[col_use];
    row.dest_country = country_index.discover(fields[col_dc], countries);

    if (oc == columns.value_added_code || oc == columns.gross_output_code) {
      row.kind = oc == columns.value_added_code ? LongRow::Kind::kValueAdded
                                                : LongRow::Kind::kGrossOutput;
      row.dest_sector = sector_index.discover(use, sectors);
      use_sectors.insert(use);
      rows.push_back(row);
      continue;
    }

    row.origin_country = country_index.discover(oc, countries);
    row.origin_sector = sector_index.discover(fields[col_os], sectors);
    origin_countries.insert(row.origin_country);
    origin_sectors.insert(fields[col_os]);
    if (fd_set.count(use) > 0) {
      row.kind = LongRow::Kind::kFinal;
      dest_countries.insert(row.dest_country);
    } else {
      row.kind = LongRow::Kind::kIntermediate;
      row.dest_sector = sector_index.discover(use, sectors);
      use_sectors.insert(use);
      dest_countries.insert(row.dest_country);
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw ParseError("empty file: no data rows");

  // Every use category must be a known sector (or a configured FD category).
  for (const auto& code : use_sectors) {
    if (origin_sectors.count(code) == 0)
      throw ParseError("unknown use-category code '" + code +
                       "': never appears as an origin sector");
  }
  if (origin_countries != dest_countries) {
    throw ParseError(
        "country set inconsistent across blocks: origin and destination "
        "country sets differ");
  }

  const Labels labels = Labels::checked(countries, sectors);
  const int S = labels.sector_count();
  const int n = labels.grid_size();
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n, labels.country_count());
  Eigen::VectorXd x_observed = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w_observed = Eigen::VectorXd::Zero(n);
  bool has_x = false, has_w = false;

  for (const LongRow& row : rows) {
    switch (row.kind) {
      case LongRow::Kind::kIntermediate:
        Z(row.origin_country * S + row.origin_sector,
          row.dest_country * S + row.dest_sector) += row.value;
        break;
      case LongRow::Kind::kFinal:
        F(row.origin_country * S + row.origin_sector, row.dest_country) +=
            row.value;
        break;
      case LongRow::Kind::kValueAdded:
        w_observed[row.dest_country * S + row.dest_sector] += row.value;
        has_w = true;
        break;
      case LongRow::Kind::kGrossOutput:
        x_observed[row.dest_country * S + row.dest_sector] += row.value;
        has_x = true;
        break;
    }
  }

  // Nodes reported inactive by the file are cleared up front so the
  // sanitizer drops them.
  if (has_x) {
    for (int i = 0; i < n; ++i) {
      if (x_observed[i] <= 1e-9) {
        Z.row(i).setZero();
        Z.col(i).setZero();
        F.row(i).setZero();
      }
    }
  }

  SanitizedComponents parts =
      sanitize_components(labels, std::move(Z), std::move(F));
  if (!has_x) {
    x_observed = parts.intermediates.rowwise().sum() +
                 parts.final_use.rowwise().sum();
  } else {
    Eigen::VectorXd sub(parts.kept_rows.size());
    for (std::size_t i = 0; i < parts.kept_rows.size(); ++i)
      sub[i] = x_observed[parts.kept_rows[i]];
    x_observed = std::move(sub);
  }
  if (!has_w) {
    w_observed = x_observed - parts.intermediates.colwise().sum().transpose();
  } else {
    Eigen::VectorXd sub(parts.kept_rows.size());
    for (std::size_t i = 0; i < parts.kept_rows.size(); ++i)
      sub[i] = w_observed[parts.kept_rows[i]];
    w_observed = std::move(sub);
  }

  SanitizedComponents parts_copy = parts;
  const Economy observed =
      Economy::from_observed(labels, std::move(parts_copy),
                             std::move(x_observed), std::move(w_observed),
                             year.value_or(0));

  LongFormatResult result{
      Economy::from_sanitized(labels, std::move(parts), year.value_or(0)),
      validate(observed, tau_acct)};
  return result;
}

void write_wiot_long(const Economy& economy, std::ostream& out,
                     const LongFormatColumns& columns, int value_digits) {
  const Labels& labels = economy.labels();
  out << columns.year << ',' << columns.origin_country << ','
      << columns.origin_sector << ',' << columns.dest_country << ','
      << columns.use_category << ',' << columns.value << '\n';

  const auto emit = [&](const std::string& oc, const std::string& os,
                        const std::string& dc, const std::string& use,
                        double value) {
    std::ostringstream formatted;
    formatted.precision(value_digits);
    formatted << value;
    out << economy.year() << ',' << oc << ',' << os << ',' << dc << ',' << use
        << ',' << formatted.str() << '\n';
  };

  const Eigen::MatrixXd& Z = economy.intermediates();
  for (int i = 0; i < economy.node_count(); ++i) {
    const std::string oc = labels.countries[economy.country_of(i)];
    const std::string os = labels.sectors[economy.sector_of(i)];
    for (int j = 0; j < economy.node_count(); ++j) {
      if (Z(i, j) != 0.0)
        emit(oc, os, labels.countries[economy.country_of(j)],
             labels.sectors[economy.sector_of(j)], Z(i, j));
    }
    const Eigen::MatrixXd& F = economy.final_use();
    for (int c = 0; c < labels.country_count(); ++c) {
      if (F(i, c) != 0.0)
        emit(oc, os, labels.countries[c], columns.fd_categories.front(),
             F(i, c));
    }
  }
  for (int i = 0; i < economy.node_count(); ++i) {
    emit(columns.gross_output_code, columns.gross_output_code,
         labels.countries[economy.country_of(i)],
         labels.sectors[economy.sector_of(i)], economy.gross_output()[i]);
    emit(columns.value_added_code, columns.value_added_code,
         labels.countries[economy.country_of(i)],
         labels.sectors[economy.sector_of(i)], economy.value_added()[i]);
  }
}

Economy chain_example(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0) || !(p + q < 1.0))
    throw DomainError("need p > 0, q > 0 and p + q < 1 so the middle node "
                      "keeps positive final demand");
  const Labels labels =
      Labels::checked({"C1", "C2", "C3"}, {"I"});
  Eigen::MatrixXd Z(3, 3);
  Z << 0, p, 0,
       q, 0, p,
       0, q, 0;
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(3, 3);
  F(0, 0) = 1.0 - p;
  F(1, 1) = 1.0 - p - q;
  F(2, 2) = 1.0 - q;
  return Economy::from_components(labels, std::move(Z), std::move(F));
}

SyntheticSpec SyntheticSpec::from_tokens(
    const std::vector<std::string>& tokens) {
  SyntheticSpec spec;
  for (const std::string& token : tokens) {
    const auto eq = token.find('=');
    if (eq == std::string::npos)
      throw DomainError("synthetic spec token '" + token +
                        "' is not key=value");
    const std::string key = trim(token.substr(0, eq));
    const std::string value = trim(token.substr(eq + 1));
    try {
      if (key == "J") spec.countries = std::stoi(value);
      else if (key == "S") spec.sectors = std::stoi(value);
      else if (key == "density") spec.density = std::stod(value);
      else if (key == "lambda") spec.spectral_target = std::stod(value);
      else if (key == "seed") spec.seed = std::stoull(value);
      else throw DomainError("unknown synthetic spec key '" + key + "'");
    } catch (const DomainError&) {
      throw;
    } catch (const std::exception&) {
      throw DomainError("cannot parse synthetic spec token '" + token + "'");
    }
  }
  return spec;
}

namespace {

Labels synthetic_labels(int countries, int sectors) {
  std::vector<std::string> country_codes, sector_codes;
  country_codes.reserve(countries);
  sector_codes.reserve(sectors);
  for (int c = 0; c < countries; ++c)
    country_codes.push_back("C" + std::to_string(c + 1));
  for (int s = 0; s < sectors; ++s)
    sector_codes.push_back("S" + std::to_string(s + 1));
  return Labels::checked(std::move(country_codes), std::move(sector_codes));
}

double output_lambda(const Eigen::MatrixXd& Z, const Eigen::VectorXd& f,
                     double scale) {
  const Eigen::VectorXd x = scale * Z.rowwise().sum() + f;
  const Eigen::MatrixXd B = x.cwiseInverse().asDiagonal() * (scale * Z);
  PowerOptions loose;
  loose.tolerance = 1e-8;
  return dominant_eigenpair(B, loose).lambda;
}

}  // namespace

Economy random_economy(const SyntheticSpec& spec) {
  if (spec.countries < 1 || spec.sectors < 1)
    throw DomainError("need at least one country and one sector");
  if (!(spec.density > 0.0) || spec.density > 1.0)
    throw DomainError("density must lie in (0, 1]");
  if (spec.spectral_target &&
      !(*spec.spectral_target > 0.0 && *spec.spectral_target < 1.0))
    throw DomainError("spectral target must lie in (0, 1)");

  const Labels labels = synthetic_labels(spec.countries, spec.sectors);
  const int n = labels.grid_size();
  Xoshiro256 rng(spec.seed);
  const double cell_scale = 2.0 / (n * spec.density);

  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n, n);
  if (spec.spectral_target) {
    // Symmetric base plus a uniform-weight directed ring: row and column
    // sums stay equal, so value added equals final demand and remains
    // positive under every rescaling the bisection tries.
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        if (rng.uniform() < spec.density) {
          const double v = rng.uniform(0.2, 1.0) * cell_scale;
          Z(i, j) += v;
          if (j != i) Z(j, i) += v;
        }
      }
    }
    const double ring = rng.uniform(0.2, 1.0) * (2.0 / n);
    std::vector<int> cycle(n);
    std::iota(cycle.begin(), cycle.end(), 0);
    for (int i = n - 1; i > 0; --i)
      std::swap(cycle[i], cycle[rng.below(static_cast<std::uint64_t>(i + 1))]);
    for (int k = 0; k < n; ++k) Z(cycle[k], cycle[(k + 1) % n]) += ring;
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (rng.uniform() < spec.density)
          Z(i, j) = rng.uniform(0.2, 1.0) * cell_scale;
      }
    }
    // Weak trade ring so the transient class is irreducible.
    for (int i = 0; i < n; ++i)
      Z(i, (i + 1) % n) += rng.uniform(0.1, 0.3) * (2.0 / n);
  }

  Eigen::MatrixXd F(n, spec.countries);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < spec.countries; ++c)
      F(i, c) = rng.uniform(0.5, 1.5) / spec.countries;

  if (spec.spectral_target) {
    const Eigen::VectorXd f = F.rowwise().sum();
    const double target = *spec.spectral_target;
    double hi = 1.0;
    double lambda_hi = output_lambda(Z, f, hi);
    int doublings = 0;
    while (lambda_hi < target) {
      hi *= 2.0;
      lambda_hi = output_lambda(Z, f, hi);
      if (++doublings > 60)
        throw DomainError("spectral target " + std::to_string(target) +
                          " is infeasible for this draw");
    }
    double lo = 0.0;
    double scale = hi;
    double lambda_mid = lambda_hi;
    for (int iter = 0; iter < 60 && std::abs(lambda_mid - target) > 1e-3;
         ++iter) {
      scale = 0.5 * (lo + hi);
      lambda_mid = output_lambda(Z, f, scale);
      (lambda_mid < target ? lo : hi) = scale;
    }
    if (std::abs(lambda_mid - target) > 1e-3)
      throw ConvergenceError("spectral-target bisection did not converge");
    Z *= scale;
  } else {
    // Cap the intermediate scale so every column's value added stays
    // positive.
    const Eigen::VectorXd rz = Z.rowwise().sum();
    const Eigen::VectorXd cz = Z.colwise().sum().transpose();
    const Eigen::VectorXd f = F.rowwise().sum();
    double theta = 1.0;
    for (int j = 0; j < n; ++j) {
      if (cz[j] > rz[j]) theta = std::min(theta, 0.9 * f[j] / (cz[j] - rz[j]));
    }
    Z *= theta;
  }

  return Economy::from_components(labels, std::move(Z), std::move(F));
}

}  // namespace gvc
