#include "gvc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "gvc/errors.hpp"
#include "gvc/log.hpp"

namespace gvc {

std::vector<double> KappaGrid::values() const {
  if (steps < 1) throw DomainError("kappa grid needs at least one step");
  if (!(lo > 0.0) || hi < lo) throw DomainError("kappa grid must satisfy 0 < lo <= hi");
  std::vector<double> grid;
  grid.reserve(steps);
  if (steps == 1) {
    grid.push_back(lo);
    return grid;
  }
  const double step = (hi - lo) / (steps - 1);
  for (int i = 0; i < steps; ++i) grid.push_back(lo + step * i);
  return grid;
}

Histogram Histogram::of(const Eigen::VectorXd& values, int bins) {
  if (bins < 1) throw DomainError("histogram needs at least one bin");
  if (values.size() == 0) throw DomainError("histogram needs data");
  Histogram hist;
  hist.lo = values.minCoeff();
  hist.hi = values.maxCoeff();
  hist.counts.assign(bins, 0);
  const double width = hist.hi - hist.lo;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    int bin = 0;
    if (width > 0.0) {
      bin = static_cast<int>((values[i] - hist.lo) / width * bins);
      bin = std::clamp(bin, 0, bins - 1);
    }
    hist.counts[bin] += 1;
  }
  return hist;
}

namespace {

struct ChainOutputs {
  ChainStatistics stats;
  Eigen::MatrixXd country_distribution;
};

ChainOutputs solve_chain(const AbsorbingChain& chain) {
  const ChainSolver solver(chain);
  return ChainOutputs{solver.statistics(), solver.absorption_matrix()};
}

KappaSweepRow sweep_row(double kappa, const Eigen::MatrixXd& output_transient,
                        const Eigen::MatrixXd& input_transient,
                        const SpectralSummary& output_spectral,
                        const SpectralSummary& input_spectral,
                        const LimitRankVectors& output_limits,
                        const LimitRankVectors& input_limits, double lambda) {
  KappaSweepRow row;
  row.kappa = kappa;
  if (lambda > 0.0 && kappa >= 1.0 / lambda) {
    row.skipped = true;
    log::warn("kappa " + std::to_string(kappa) +
              " at or beyond 1/lambda = " + std::to_string(1.0 / lambda) +
              "; skipped");
    return row;
  }
  const Eigen::VectorXd up =
      parametrized_rank_vector(output_transient, kappa, lambda);
  const Eigen::VectorXd down =
      parametrized_rank_vector(input_transient, kappa, lambda);
  row.upstream_vs_degree = spearman(up, output_limits.degree_limit);
  row.upstream_vs_eigenvector = spearman(up, output_spectral.rho_right);
  row.downstream_vs_degree = spearman(down, input_limits.degree_limit);
  // The eigen-limit of the input chain A^T is the left dominant vector of A.
  row.downstream_vs_eigenvector = spearman(down, input_spectral.rho_left);
  return row;
}

}  // namespace

YearAnalysis analyze_economy(const Economy& economy,
                             const AnalyzeOptions& options) {
  YearAnalysis a;
  a.year = economy.year();
  a.node_count = economy.node_count();

  const InputNetwork input = build_input_network(economy);
  const OutputNetwork output = build_output_network(economy);
  const std::vector<int> country_of = economy.country_map();
  const int countries = economy.labels().country_count();

  a.input_spectral = dominant_eigenpair(input.coefficients, options.power);
  a.output_spectral = dominant_eigenpair(output.coefficients, options.power);
  a.product_dist = product_distribution(a.output_spectral);

  const AbsorbingChain output_chain =
      AbsorbingChain::output_chain_by_country(output);
  const AbsorbingChain input_chain =
      AbsorbingChain::input_chain_by_country(input, country_of, countries);

  ChainOutputs out_side, in_side;
  if (options.jobs > 1) {
    auto out_future = std::async(std::launch::async,
                                 [&] { return solve_chain(output_chain); });
    in_side = solve_chain(input_chain);
    out_side = out_future.get();
  } else {
    out_side = solve_chain(output_chain);
    in_side = solve_chain(input_chain);
  }

  a.upstream = out_side.stats.time_mean;
  a.downstream = in_side.stats.time_mean;
  a.risk_output = out_side.stats.time_variance;
  a.risk_input = in_side.stats.time_variance;
  a.self_visits_output = out_side.stats.visit_mean.diagonal();
  a.self_visits_input = in_side.stats.visit_mean.diagonal();
  a.final_use_dist = std::move(out_side.country_distribution);
  a.value_added_dist = std::move(in_side.country_distribution);

  for (int sector : options.sectors) {
    const int ordinal = sector - 1;  // options carry 1-based sector ordinals
    a.industry_final_use.emplace_back(
        sector, industry_matrix(a.final_use_dist, economy, ordinal));
    a.industry_value_added.emplace_back(
        sector, industry_matrix(a.value_added_dist, economy, ordinal));
  }

  a.indicators = global_indicators(a.final_use_dist, a.value_added_dist,
                                   country_of);
  a.input_blocks = block_means(input.coefficients, country_of);
  a.output_blocks = block_means(output.coefficients, country_of);

  // Kappa sweep over the configured grid plus the two limit anchors.
  const double lambda = a.output_spectral.lambda;
  const LimitRankVectors output_limits =
      limit_rank_vectors(output.coefficients, a.output_spectral);
  const LimitRankVectors input_limits = limit_rank_vectors(
      input.coefficients.transpose(),
      SpectralSummary{a.input_spectral.lambda, a.input_spectral.rho_right,
                      a.input_spectral.rho_left, a.input_spectral.iterations,
                      a.input_spectral.residual});
  std::vector<double> kappas = options.kappa_grid.values();
  kappas.push_back(1e-3);
  if (lambda > 0.0) kappas.push_back(0.999 / lambda);
  std::sort(kappas.begin(), kappas.end());
  kappas.erase(std::unique(kappas.begin(), kappas.end()), kappas.end());

  a.kappa_sweep.resize(kappas.size());
  const Eigen::MatrixXd input_transient = input.coefficients.transpose();
  const auto run_row = [&](std::size_t i) {
    a.kappa_sweep[i] = sweep_row(kappas[i], output.coefficients,
                                 input_transient, a.output_spectral,
                                 a.input_spectral, output_limits, input_limits,
                                 lambda);
  };
  if (options.jobs > 1) {
    std::size_t next = 0;
    while (next < kappas.size()) {
      const std::size_t batch = std::min<std::size_t>(
          static_cast<std::size_t>(options.jobs), kappas.size() - next);
      std::vector<std::future<void>> futures;
      futures.reserve(batch);
      for (std::size_t b = 0; b < batch; ++b)
        futures.push_back(
            std::async(std::launch::async, [&run_row, i = next + b] { run_row(i); }));
      for (auto& f : futures) f.get();
      next += batch;
    }
  } else {
    for (std::size_t i = 0; i < kappas.size(); ++i) run_row(i);
  }

  a.product_hist = Histogram::of(a.product_dist, options.histogram_bins);
  a.upstream_hist = Histogram::of(a.upstream, options.histogram_bins);
  a.downstream_hist = Histogram::of(a.downstream, options.histogram_bins);

  // Diagnostic only: on observed tables the output-chain risk tends to run
  // above the input-chain risk; this is a data property, not an invariant.
  const auto median = [](Eigen::VectorXd v) {
    std::sort(v.data(), v.data() + v.size());
    return v[v.size() / 2];
  };
  log::info("year " + std::to_string(a.year) +
            ": median risk output=" + std::to_string(median(a.risk_output)) +
            " input=" + std::to_string(median(a.risk_input)));
  return a;
}

}  // namespace gvc
