#include <CLI11.hpp>
#include <string>
#include <vector>

#include "gvc/cli.hpp"
#include "gvc/errors.hpp"
#include "gvc/log.hpp"

namespace {

void add_common_options(CLI::App* cmd, gvc::cli::RunConfig& config,
                        std::string& format, std::string& kappa_spec) {
  cmd->add_option("inputs", config.inputs, "input table files, one per year");
  cmd->add_option("--format", format, "input format: canonical or wiod")
      ->check(CLI::IsMember({"canonical", "wiod"}));
  cmd->add_option("--out", config.out_dir, "output directory");
  cmd->add_option("--tau-acct", config.tau_acct,
                  "accounting-identity tolerance (default per format)");
  cmd->add_option("--tol-eig", config.tol_eig, "eigen-residual tolerance");
  cmd->add_option("--seed", config.seed, "simulation / synthetic seed");
  cmd->add_option("--paths", config.paths, "Monte Carlo path count");
  cmd->add_option("--kappa-grid", kappa_spec, "sweep grid as lo:hi:steps");
  cmd->add_option("--sectors", config.sectors,
                  "1-based sector ordinals for industry slices")
      ->delimiter(',');
  cmd->add_option("--jobs", config.jobs, "parallel jobs");
  cmd->add_option("--column-map", config.column_map_path,
                  "key=value column-name map for the wiod reader");
  cmd->add_flag("--dump-networks", config.dump_networks,
                "also write the input/output coefficient matrices as GVCM "
                "binaries");
  cmd->add_option("--synthetic", config.synthetic,
                  "synthetic economy spec tokens (J=, S=, density=, lambda=, "
                  "seed=) instead of input files");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"absorbing-chain analysis of world input-output tables"};
  app.require_subcommand(1);

  gvc::cli::RunConfig config;
  std::string format = "canonical";
  std::string kappa_spec;

  CLI::App* validate = app.add_subcommand(
      "validate", "check accounting identities and write reports");
  CLI::App* analyze = app.add_subcommand(
      "analyze", "full per-year analysis: chain statistics, spectra, "
                 "distributions, indicators, sweep tables");
  CLI::App* verify = app.add_subcommand(
      "verify", "run the numerical invariant suite and report pass/fail");
  CLI::App* report = app.add_subcommand(
      "report", "assemble the multi-year panel table");
  for (CLI::App* cmd : {validate, analyze, verify, report})
    add_common_options(cmd, config, format, kappa_spec);

  CLI11_PARSE(app, argc, argv);

  try {
    config.format = format == "wiod" ? gvc::cli::Format::kWiod
                                     : gvc::cli::Format::kCanonical;
    if (!kappa_spec.empty())
      config.kappa_grid = gvc::cli::parse_kappa_grid(kappa_spec);

    if (validate->parsed()) return gvc::cli::cmd_validate(config);
    if (analyze->parsed()) return gvc::cli::cmd_analyze(config);
    if (verify->parsed()) return gvc::cli::cmd_verify(config);
    if (report->parsed()) return gvc::cli::cmd_report(config);
  } catch (const gvc::DomainError& e) {
    gvc::log::error(e.what());
    return gvc::cli::kExitUsage;
  } catch (const std::exception& e) {
    gvc::log::error(e.what());
    return gvc::cli::kExitCheckFailed;
  }
  return gvc::cli::kExitUsage;
}
