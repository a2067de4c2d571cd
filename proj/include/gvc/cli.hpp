#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gvc/analysis.hpp"
#include "gvc/ingest.hpp"

namespace gvc::cli {

enum class Format { kCanonical, kWiod };

/// Exit codes shared by every subcommand.
constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
  std::vector<std::string> inputs;
  Format format = Format::kCanonical;
  std::string out_dir = ".";
  std::string column_map_path;  // optional long-format column overrides

  double tau_acct = -1.0;  // <= 0: per-format default (1e-6 canonical, 1e-4 wiod)
  double tol_eig = 1e-12;

  std::uint64_t seed = 1;
  std::int64_t paths = 1000000;

  KappaGrid kappa_grid;
  std::vector<int> sectors = {1};
  int jobs = 1;
  bool dump_networks = false;  // also write A and B as GVCM binaries

  std::vector<std::string> synthetic;  // key=value tokens; replaces inputs
};

int cmd_validate(const RunConfig& config);
int cmd_analyze(const RunConfig& config);
int cmd_verify(const RunConfig& config);
int cmd_report(const RunConfig& config);

/// "a:b:steps" -> KappaGrid; throws DomainError on malformed specs.
KappaGrid parse_kappa_grid(const std::string& spec);

}  // namespace gvc::cli
