#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "gvc/economy.hpp"

namespace gvc {

/// One row of the canonical interchange format.
struct CanonicalRecord {
  enum class Kind { kIntermediate, kFinal };
  Kind kind = Kind::kIntermediate;
  std::string origin_country;
  std::string origin_sector;
  std::string dest_country;
  std::string dest_sector;  // empty iff kind == kFinal
  double value = 0.0;
};

/// Canonical CSV: `#countries` / `#sectors` / optional `#year` directives,
/// then the header `kind,origin_country,origin_sector,dest_country,
/// dest_sector,value` and one record per line. Duplicate keys accumulate;
/// final-use rows for the same destination country sum into one cell.
/// See docs/formats.md.
Economy parse_canonical_csv(std::istream& in);
void write_canonical_csv(const Economy& economy, std::ostream& out);

/// Column-name overrides for the long-format reader, parsed from a
/// `key=value` file (keys: origin_country, origin_sector, dest_country,
/// use_category, value, year, fd_categories, value_added_code,
/// gross_output_code).
struct LongFormatColumns {
  std::string origin_country = "origin_country";
  std::string origin_sector = "origin_sector";
  std::string dest_country = "dest_country";
  std::string use_category = "use_category";
  std::string value = "value";
  std::string year = "year";  // optional column
  std::vector<std::string> fd_categories = {"c57", "c58", "c59", "c60", "c61"};
  std::string value_added_code = "VA";
  std::string gross_output_code = "GO";

  static LongFormatColumns from_config(std::istream& in);
};

struct LongFormatResult {
  Economy economy;          // x, w re-derived from the cleaned flows
  ValidationReport report;  // file's own x/w columns checked at tau_acct
};

/// WIOD-style long export: one row per (origin country, origin sector,
/// destination country, use category). Use categories are either sector
/// codes (intermediate flows), one of the configured final-demand categories
/// (summed into F per destination country), or the value-added/gross-output
/// codes carrying the file's own x and w.
LongFormatResult parse_wiot_long(std::istream& in,
                                 const LongFormatColumns& columns = {},
                                 double tau_acct = 1e-4);
void write_wiot_long(const Economy& economy, std::ostream& out,
                     const LongFormatColumns& columns = {},
                     int value_digits = 12);

/// The three-country ring fixture: country 1 ships a share p of its output
/// to country 2, country 2 ships q back and p onward to country 3, country 3
/// ships q back to country 2; everything else is consumed domestically.
/// All gross outputs are one. Requires p > 0, q > 0, p + q < 1 so the middle
/// node keeps positive final demand. The output network has dominant
/// eigenvalue sqrt(2 p q).
Economy chain_example(double p, double q);

/// Synthetic economy recipe. density is the approximate fraction of nonzero
/// intermediate cells (a weak trade ring is always added so the network is
/// irreducible). When spectral_target is set, intermediate flows are drawn
/// with balanced row/column sums and rescaled by bisection until the output
/// network's dominant eigenvalue is within 1e-3 of the target.
struct SyntheticSpec {
  int countries = 3;
  int sectors = 4;
  double density = 0.5;
  std::optional<double> spectral_target;  // in (0, 1)
  std::uint64_t seed = 1;

  /// Parse `key=value` tokens (J, S, density, lambda, seed).
  static SyntheticSpec from_tokens(const std::vector<std::string>& tokens);
};

Economy random_economy(const SyntheticSpec& spec);

}  // namespace gvc
