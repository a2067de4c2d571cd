#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "gvc/economy.hpp"
#include "gvc/markov.hpp"
#include "gvc/metrics.hpp"
#include "gvc/networks.hpp"
#include "gvc/spectral.hpp"

namespace gvc {

struct KappaGrid {
  double lo = 0.05;
  double hi = 0.95;
  int steps = 10;

  std::vector<double> values() const;
};

struct AnalyzeOptions {
  PowerOptions power;
  KappaGrid kappa_grid;
  std::vector<int> sectors = {1};  // 1-based sector ordinals for PP/WP slices
  int histogram_bins = 30;
  int jobs = 1;
};

struct KappaSweepRow {
  double kappa = 0.0;
  bool skipped = false;  // kappa >= 1/lambda for this year
  double upstream_vs_degree = 0.0;
  double upstream_vs_eigenvector = 0.0;
  double downstream_vs_degree = 0.0;
  double downstream_vs_eigenvector = 0.0;
};

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::int64_t> counts;

  static Histogram of(const Eigen::VectorXd& values, int bins);
};

/// Everything the analyze pipeline derives from one year.
struct YearAnalysis {
  int year = 0;
  int node_count = 0;

  SpectralSummary input_spectral;   // of A
  SpectralSummary output_spectral;  // of B
  Eigen::VectorXd product_dist;     // from the output network

  Eigen::VectorXd upstream;         // u = g of the output chain
  Eigen::VectorXd downstream;       // d = g of the input chain
  Eigen::VectorXd risk_output;      // h of the output chain
  Eigen::VectorXd risk_input;       // h of the input chain
  Eigen::VectorXd self_visits_output;  // diag L of the output chain
  Eigen::VectorXd self_visits_input;   // diag L of the input chain

  Eigen::MatrixXd final_use_dist;     // M, n x J
  Eigen::MatrixXd value_added_dist;   // zeta, n x J
  std::vector<std::pair<int, Eigen::MatrixXd>> industry_final_use;    // PP
  std::vector<std::pair<int, Eigen::MatrixXd>> industry_value_added;  // WP

  GlobalIndicators indicators;
  BlockStats input_blocks;
  BlockStats output_blocks;

  std::vector<KappaSweepRow> kappa_sweep;
  Histogram product_hist;
  Histogram upstream_hist;
  Histogram downstream_hist;
};

YearAnalysis analyze_economy(const Economy& economy,
                             const AnalyzeOptions& options = {});

}  // namespace gvc
