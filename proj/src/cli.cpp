#include "gvc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "gvc/errors.hpp"
#include "gvc/log.hpp"
#include "gvc/markov.hpp"
#include "gvc/matrix_io.hpp"
#include "gvc/metrics.hpp"
#include "gvc/reports.hpp"
#include "gvc/rng.hpp"
#include "gvc/spectral.hpp"

namespace gvc::cli {

namespace {

namespace fs = std::filesystem;

double default_tau(const RunConfig& config) {
  if (config.tau_acct > 0.0) return config.tau_acct;
  return config.format == Format::kWiod ? 1e-4 : 1e-6;
}

LongFormatColumns load_columns(const RunConfig& config) {
  if (config.column_map_path.empty()) return LongFormatColumns{};
  std::ifstream in(config.column_map_path);
  if (!in) throw IoError("cannot open column map " + config.column_map_path);
  return LongFormatColumns::from_config(in);
}

struct LoadedYear {
  Economy economy;
  ValidationReport report;
};

std::vector<LoadedYear> load_inputs(const RunConfig& config) {
  std::vector<LoadedYear> years;
  if (!config.synthetic.empty()) {
    const SyntheticSpec spec = SyntheticSpec::from_tokens(config.synthetic);
    Economy economy = random_economy(spec);
    ValidationReport report = validate(economy, default_tau(config));
    years.push_back(LoadedYear{std::move(economy), std::move(report)});
    return years;
  }
  if (config.inputs.empty())
    throw DomainError("no inputs: pass files or --synthetic");

  const LongFormatColumns columns = load_columns(config);
  for (const std::string& path : config.inputs) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    if (config.format == Format::kCanonical) {
      Economy economy = parse_canonical_csv(in);
      ValidationReport report = validate(economy, default_tau(config));
      years.push_back(LoadedYear{std::move(economy), std::move(report)});
    } else {
      LongFormatResult result = parse_wiot_long(in, columns,
                                                default_tau(config));
      years.push_back(
          LoadedYear{std::move(result.economy), std::move(result.report)});
    }
  }
  return years;
}

std::string year_path(const RunConfig& config, const std::string& stem,
                      int year, const std::string& ext) {
  return (fs::path(config.out_dir) /
          (stem + "_" + std::to_string(year) + ext))
      .string();
}

int run_guarded(const char* command, int (*body)(const RunConfig&),
                const RunConfig& config) {
  try {
    return body(config);
  } catch (const IoError& e) {
    log::error(std::string(command) + ": " + e.what());
    return kExitUsage;
  } catch (const ParseError& e) {
    log::error(std::string(command) + ": " + e.what());
    return kExitUsage;
  } catch (const Error& e) {
    log::error(std::string(command) + ": " + e.what());
    return kExitCheckFailed;
  }
}

int validate_body(const RunConfig& config) {
  const std::vector<LoadedYear> years = load_inputs(config);
  bool all_passed = true;
  for (const LoadedYear& year : years) {
    all_passed = all_passed && year.report.passed;
    reports::write_file(
        year_path(config, "validation", year.economy.year(), ".json"),
        reports::validation_json(year.economy, year.report));
  }
  return all_passed ? kExitOk : kExitCheckFailed;
}

void write_analysis(const RunConfig& config, const Economy& economy,
                    const YearAnalysis& a) {
  const int year = a.year;
  reports::write_file(year_path(config, "node_stats", year, ".csv"),
                      reports::node_stats_csv(economy, a));
  reports::write_file(year_path(config, "node_stats", year, ".json"),
                      reports::node_stats_json(economy, a));
  reports::write_file(year_path(config, "spectral", year, ".json"),
                      reports::spectral_json(a));
  if (config.dump_networks) {
    write_matrix_binary_file(build_input_network(economy).coefficients,
                             year_path(config, "input_network", year,
                                       ".gvcm"));
    write_matrix_binary_file(build_output_network(economy).coefficients,
                             year_path(config, "output_network", year,
                                       ".gvcm"));
  }
  reports::write_file(
      year_path(config, "final_use_distribution", year, ".csv"),
      reports::country_distribution_csv(economy, a.final_use_dist));
  reports::write_file(
      year_path(config, "value_added_distribution", year, ".csv"),
      reports::country_distribution_csv(economy, a.value_added_dist));
  for (const auto& [sector, slice] : a.industry_final_use)
    reports::write_file(
        year_path(config, "industry_final_use_s" + std::to_string(sector),
                  year, ".csv"),
        reports::industry_matrix_csv(economy.labels(), slice));
  for (const auto& [sector, slice] : a.industry_value_added)
    reports::write_file(
        year_path(config, "industry_value_added_s" + std::to_string(sector),
                  year, ".csv"),
        reports::industry_matrix_csv(economy.labels(), slice));
  reports::write_file(year_path(config, "indicators", year, ".json"),
                      reports::indicators_json(a));
  reports::write_file(year_path(config, "hist_product", year, ".csv"),
                      reports::histogram_csv(a.product_hist));
  reports::write_file(year_path(config, "hist_upstreamness", year, ".csv"),
                      reports::histogram_csv(a.upstream_hist));
  reports::write_file(year_path(config, "hist_downstreamness", year, ".csv"),
                      reports::histogram_csv(a.downstream_hist));
  reports::write_file(year_path(config, "kappa_sweep", year, ".csv"),
                      reports::kappa_sweep_csv(a.kappa_sweep));
}

AnalyzeOptions analyze_options(const RunConfig& config) {
  AnalyzeOptions options;
  options.power.tolerance = config.tol_eig;
  options.kappa_grid = config.kappa_grid;
  options.sectors = config.sectors;
  options.jobs = config.jobs;
  return options;
}

int analyze_body(const RunConfig& config) {
  const std::vector<LoadedYear> years = load_inputs(config);
  AnalyzeOptions options = analyze_options(config);

  const auto run_year = [&](const LoadedYear& year) {
    try {
      const YearAnalysis a = analyze_economy(year.economy, options);
      write_analysis(config, year.economy, a);
    } catch (const NonAbsorbingChainError& e) {
      throw NonAbsorbingChainError("year " +
                                   std::to_string(year.economy.year()) + ": " +
                                   e.what());
    }
  };

  if (config.jobs > 1 && years.size() > 1) {
    // Parallelize across years; per-year pipelines stay single-threaded.
    options.jobs = 1;
    std::size_t next = 0;
    while (next < years.size()) {
      const std::size_t batch = std::min<std::size_t>(
          static_cast<std::size_t>(config.jobs), years.size() - next);
      std::vector<std::future<void>> futures;
      futures.reserve(batch);
      for (std::size_t b = 0; b < batch; ++b)
        futures.push_back(std::async(std::launch::async,
                                     [&run_year, &year = years[next + b]] {
                                       run_year(year);
                                     }));
      for (auto& f : futures) f.get();
      next += batch;
    }
  } else {
    for (const LoadedYear& year : years) run_year(year);
  }
  return kExitOk;
}

int report_body(const RunConfig& config) {
  std::vector<LoadedYear> years = load_inputs(config);
  std::vector<Economy> economies;
  economies.reserve(years.size());
  for (LoadedYear& year : years) economies.push_back(std::move(year.economy));
  const std::vector<PanelRow> rows = panel_report(economies, config.jobs);
  reports::write_file((fs::path(config.out_dir) / "panel.csv").string(),
                      reports::panel_csv(rows));
  reports::write_file((fs::path(config.out_dir) / "panel.json").string(),
                      reports::panel_json(rows));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Verification suite
// ---------------------------------------------------------------------------

using reports::Check;

Check bounded(const std::string& name, double measured, double threshold,
              const std::string& detail = "") {
  return Check{name, measured <= threshold, measured, threshold, detail};
}

Check at_least(const std::string& name, double measured, double threshold,
               const std::string& detail = "") {
  return Check{name, measured >= threshold, measured, threshold, detail};
}

void verify_economy(const RunConfig& config, const Economy& economy,
                    std::vector<Check>& checks) {
  const std::string tag = "year " + std::to_string(economy.year()) + ": ";

  const ValidationReport validation = validate(economy, 1e-12);
  checks.push_back(bounded(
      tag + "accounting-identities",
      std::max(validation.max_output_rel, validation.max_value_added_rel),
      economy.derived() ? 1e-12 : default_tau(config)));

  const InputNetwork input = build_input_network(economy);
  const OutputNetwork output = build_output_network(economy);
  const int n = economy.node_count();
  const std::vector<int> country_of = economy.country_map();
  const int countries = economy.labels().country_count();

  const double column_gap =
      (input.coefficients.colwise().sum().transpose() +
       input.value_added_share - Eigen::VectorXd::Ones(n))
          .cwiseAbs()
          .maxCoeff();
  const double row_gap = (output.coefficients.rowwise().sum() +
                          output.final_demand_share - Eigen::VectorXd::Ones(n))
                             .cwiseAbs()
                             .maxCoeff();
  checks.push_back(
      bounded(tag + "column-exhaustion", column_gap, 1e-10));
  checks.push_back(bounded(tag + "row-exhaustion", row_gap, 1e-10));

  const double sim_bound =
      1e-10 * std::max(1.0, economy.intermediates().maxCoeff() /
                                economy.gross_output().minCoeff());
  checks.push_back(bounded(
      tag + "diagonal-similarity",
      similarity_residual(input, output, economy.gross_output()), sim_bound));

  PowerOptions power;
  power.tolerance = config.tol_eig;
  const SpectralSummary input_spectral =
      dominant_eigenpair(input.coefficients, power);
  const SpectralSummary output_spectral =
      dominant_eigenpair(output.coefficients, power);
  checks.push_back(
      bounded(tag + "shared-eigenvalue",
              std::abs(input_spectral.lambda - output_spectral.lambda), 1e-9));

  const ProductInvarianceReport invariance = verify_product_invariance(
      input, output, economy.gross_output(), power);
  checks.push_back(bounded(tag + "product-distribution-invariance",
                           invariance.product_gap, 1e-9));
  checks.push_back(bounded(tag + "right-eigenvector-transform",
                           invariance.right_transform_gap, 1e-9));
  checks.push_back(bounded(tag + "left-eigenvector-transform",
                           invariance.left_transform_gap, 1e-9));

  const AbsorbingChain output_chain =
      AbsorbingChain::output_chain_by_country(output);
  const AbsorbingChain input_chain =
      AbsorbingChain::input_chain_by_country(input, country_of, countries);
  const ChainSolver output_solver(output_chain);
  const ChainSolver input_solver(input_chain);
  const Eigen::MatrixXd final_use = output_solver.absorption_matrix();
  const Eigen::MatrixXd value_added = input_solver.absorption_matrix();
  checks.push_back(bounded(
      tag + "final-use-row-sums",
      (final_use.rowwise().sum() - Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff(),
      1e-8));
  checks.push_back(bounded(tag + "value-added-row-sums",
                           (value_added.rowwise().sum() -
                            Eigen::VectorXd::Ones(n))
                               .cwiseAbs()
                               .maxCoeff(),
                           1e-8));
  const Eigen::VectorXd unit = input_solver.solve(
      Eigen::MatrixXd(input.value_added_share));
  checks.push_back(bounded(
      tag + "value-added-absorption-identity",
      (unit - Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff(), 1e-8));

  // Ranking limits at the two ends of the kappa range.
  const double lambda = output_spectral.lambda;
  const Eigen::MatrixXd input_transient = input.coefficients.transpose();
  const LimitRankVectors output_limits =
      limit_rank_vectors(output.coefficients, output_spectral);
  const Eigen::VectorXd down_degree =
      Eigen::VectorXd::Ones(n) + input_transient.rowwise().sum();
  checks.push_back(at_least(
      tag + "upstream-degree-limit",
      spearman(parametrized_rank_vector(output.coefficients, 1e-3, lambda),
               output_limits.degree_limit),
      0.999));
  checks.push_back(at_least(
      tag + "upstream-eigenvector-limit",
      spearman(
          parametrized_rank_vector(output.coefficients, 0.999 / lambda, lambda),
          output_spectral.rho_right),
      0.999));
  checks.push_back(at_least(
      tag + "downstream-degree-limit",
      spearman(parametrized_rank_vector(input_transient, 1e-3,
                                        input_spectral.lambda),
               down_degree),
      0.999));
  checks.push_back(at_least(
      tag + "downstream-eigenvector-limit",
      spearman(parametrized_rank_vector(input_transient,
                                        0.999 / input_spectral.lambda,
                                        input_spectral.lambda),
               input_spectral.rho_left),
      0.999));
}

void verify_constant_row_sums(std::uint64_t seed, std::vector<Check>& checks) {
  Xoshiro256 rng(seed ^ 0x5bd1e995u);
  const int n = 6;
  const double c = 0.7;
  const double expected = 1.0 / (1.0 - c);
  const Eigen::VectorXd absorb = Eigen::VectorXd::Constant(n, 1.0 - c);

  // One independent draw per chain orientation; each has every transient row
  // summing to c, so the absorption time must be 1/(1-c) everywhere.
  const auto constant_row_matrix = [&]() {
    Eigen::MatrixXd transient(n, n);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd row(n);
      for (int j = 0; j < n; ++j) row[j] = rng.uniform(0.05, 1.0);
      transient.row(i) = row.transpose() * (c / row.sum());
    }
    return transient;
  };
  const auto deviation = [&](const Eigen::MatrixXd& q) {
    const ChainStatistics stats =
        fundamental(AbsorbingChain(q, Eigen::MatrixXd(absorb)));
    return (stats.time_mean.array() - expected).abs().maxCoeff();
  };
  checks.push_back(bounded("constant-row-sum-time (output orientation)",
                           deviation(constant_row_matrix()), 1e-10));
  checks.push_back(bounded("constant-row-sum-time (input orientation)",
                           deviation(constant_row_matrix()), 1e-10));
}

void verify_monte_carlo(const RunConfig& config, std::vector<Check>& checks) {
  // A small fixed-shape economy keeps the closed forms cheap while the
  // sampler exercises every estimator.
  SyntheticSpec spec;
  spec.countries = 2;
  spec.sectors = 3;
  spec.density = 0.7;
  spec.seed = config.seed;
  const Economy economy = random_economy(spec);
  const OutputNetwork output = build_output_network(economy);
  const AbsorbingChain chain = AbsorbingChain::output_chain_by_country(output);
  const ChainSolver solver(chain);
  const ChainStatistics stats = solver.statistics();
  const Eigen::MatrixXd absorb_dist = solver.absorption_matrix();
  const int n = chain.state_count();

  SimulationOptions options;
  options.seed = config.seed;
  options.paths = std::max<std::int64_t>(1000, config.paths / 10);

  std::int64_t cells = 0;
  std::int64_t hits = 0;
  double worst = 0.0;
  const auto tally = [&](double estimate, double stderr_of_mean,
                         double expected) {
    ++cells;
    const double slack = 3.0 * stderr_of_mean + 1e-9;
    if (std::abs(estimate - expected) <= slack) ++hits;
    if (stderr_of_mean > 0.0)
      worst = std::max(worst, std::abs(estimate - expected) / stderr_of_mean);
  };

  for (int start = 0; start < n; ++start) {
    const SimulationSummary sim = simulate(chain, start, options);
    for (int j = 0; j < n; ++j)
      tally(sim.visits[j].mean, sim.visits[j].stderr_of_mean,
            stats.visit_mean(start, j));
    tally(sim.time.mean, sim.time.stderr_of_mean, stats.time_mean[start]);
    tally(sim.time_variance.mean, sim.time_variance.stderr_of_mean,
          stats.time_variance[start]);
    for (int k = 0; k < chain.absorbing_count(); ++k)
      tally(sim.absorb[k].mean, sim.absorb[k].stderr_of_mean,
            absorb_dist(start, k));
  }
  const double hit_rate =
      static_cast<double>(hits) / static_cast<double>(cells);
  checks.push_back(at_least("monte-carlo-oracle", hit_rate, 0.99,
                            "worst z-score " + reports::format_value(worst) +
                                " over " + std::to_string(cells) + " cells"));
}

int verify_body(const RunConfig& config) {
  const std::vector<LoadedYear> years = load_inputs(config);
  std::vector<Check> checks;
  for (const LoadedYear& year : years)
    verify_economy(config, year.economy, checks);
  verify_constant_row_sums(config.seed, checks);
  verify_monte_carlo(config, checks);

  bool all = true;
  for (const Check& check : checks) {
    all = all && check.passed;
    log::info(std::string(check.passed ? "pass" : "FAIL") + "  " + check.name +
              " (measured " + reports::format_value(check.measured) +
              ", threshold " + reports::format_value(check.threshold) + ")");
  }
  reports::write_file(
      (fs::path(config.out_dir) / "verification.json").string(),
      reports::verification_json(checks));
  return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

int cmd_validate(const RunConfig& config) {
  return run_guarded("validate", validate_body, config);
}

int cmd_analyze(const RunConfig& config) {
  return run_guarded("analyze", analyze_body, config);
}

int cmd_verify(const RunConfig& config) {
  return run_guarded("verify", verify_body, config);
}

int cmd_report(const RunConfig& config) {
  return run_guarded("report", report_body, config);
}

KappaGrid parse_kappa_grid(const std::string& spec) {
  KappaGrid grid;
  std::istringstream in(spec);
  char sep1 = 0, sep2 = 0;
  if (!(in >> grid.lo >> sep1 >> grid.hi >> sep2 >> grid.steps) ||
      sep1 != ':' || sep2 != ':' || !in.eof())
    throw DomainError("kappa grid must look like lo:hi:steps, got '" + spec +
                      "'");
  return grid;
}

}  // namespace gvc::cli
