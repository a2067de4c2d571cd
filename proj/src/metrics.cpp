#include "gvc/metrics.hpp"

#include <algorithm>
#include <future>

#include "gvc/errors.hpp"
#include "gvc/spectral.hpp"

namespace gvc {

Eigen::VectorXd upstreamness(const OutputNetwork& network) {
  return fundamental(AbsorbingChain::output_chain(network)).time_mean;
}

Eigen::VectorXd downstreamness(const InputNetwork& network) {
  return fundamental(AbsorbingChain::input_chain(network)).time_mean;
}

Eigen::VectorXd chain_risk(const OutputNetwork& network) {
  return fundamental(AbsorbingChain::output_chain(network)).time_variance;
}

Eigen::VectorXd chain_risk(const InputNetwork& network) {
  return fundamental(AbsorbingChain::input_chain(network)).time_variance;
}

double GlobalIndicators::domestic_value_added_fraction() const {
  return domestic_value_added / node_count;
}
double GlobalIndicators::cross_border_value_added_fraction() const {
  return cross_border_value_added / node_count;
}
double GlobalIndicators::domestic_final_use_fraction() const {
  return domestic_final_use / node_count;
}
double GlobalIndicators::cross_border_final_use_fraction() const {
  return cross_border_final_use / node_count;
}

GlobalIndicators global_indicators(const Eigen::MatrixXd& final_use_dist,
                                   const Eigen::MatrixXd& value_added_dist,
                                   const std::vector<int>& country_of) {
  const Eigen::Index n = final_use_dist.rows();
  if (value_added_dist.rows() != n ||
      static_cast<Eigen::Index>(country_of.size()) != n)
    throw DimensionError("distribution row counts disagree");
  if (final_use_dist.cols() != value_added_dist.cols())
    throw DimensionError("distribution column counts disagree");

  GlobalIndicators ind;
  ind.node_count = static_cast<int>(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int home = country_of[i];
    if (home < 0 || home >= final_use_dist.cols())
      throw DimensionError("country ordinal out of range");
    for (Eigen::Index c = 0; c < final_use_dist.cols(); ++c) {
      if (c == home) {
        ind.domestic_final_use += final_use_dist(i, c);
        ind.domestic_value_added += value_added_dist(i, c);
      } else {
        ind.cross_border_final_use += final_use_dist(i, c);
        ind.cross_border_value_added += value_added_dist(i, c);
      }
    }
  }
  return ind;
}

namespace {

PanelRow panel_row(const Economy& economy) {
  const InputNetwork input = build_input_network(economy);
  const OutputNetwork output = build_output_network(economy);
  const std::vector<int> country_of = economy.country_map();
  const int countries = economy.labels().country_count();

  PanelRow row;
  row.year = economy.year();
  row.node_count = economy.node_count();
  row.lambda = dominant_eigenpair(output.coefficients).lambda;
  row.input_blocks = block_means(input.coefficients, country_of);
  row.output_blocks = block_means(output.coefficients, country_of);

  const Eigen::MatrixXd final_use =
      absorption_matrix(AbsorbingChain::output_chain_by_country(output));
  const Eigen::MatrixXd value_added =
      value_added_distribution(input, country_of, countries);
  row.indicators = global_indicators(final_use, value_added, country_of);
  return row;
}

}  // namespace

std::vector<PanelRow> panel_report(const std::vector<Economy>& economies,
                                   int jobs) {
  if (economies.empty()) throw DomainError("panel needs at least one year");

  std::vector<PanelRow> rows(economies.size());
  if (jobs <= 1 || economies.size() == 1) {
    for (std::size_t i = 0; i < economies.size(); ++i)
      rows[i] = panel_row(economies[i]);
  } else {
    std::size_t next = 0;
    while (next < economies.size()) {
      const std::size_t batch = std::min<std::size_t>(
          static_cast<std::size_t>(jobs), economies.size() - next);
      std::vector<std::future<PanelRow>> futures;
      futures.reserve(batch);
      for (std::size_t b = 0; b < batch; ++b) {
        const Economy& economy = economies[next + b];
        futures.push_back(std::async(std::launch::async,
                                     [&economy] { return panel_row(economy); }));
      }
      for (std::size_t b = 0; b < batch; ++b) rows[next + b] = futures[b].get();
      next += batch;
    }
  }
  std::sort(rows.begin(), rows.end(),
            [](const PanelRow& a, const PanelRow& b) { return a.year < b.year; });
  return rows;
}

}  // namespace gvc
