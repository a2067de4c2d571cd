#pragma once

#include <string>
#include <vector>

#include "gvc/analysis.hpp"
#include "gvc/economy.hpp"
#include "gvc/metrics.hpp"

namespace gvc::reports {

/// Round to 12 significant digits; all emitted floating-point values go
/// through this so repeated runs serialize byte-identically.
double snap(double value);
std::string format_value(double value);

std::string validation_json(const Economy& economy,
                            const ValidationReport& report);

/// Per-node CSV: label, country, sector, u, d, h_out, h_in, diag L of both
/// chains, product distribution.
std::string node_stats_csv(const Economy& economy, const YearAnalysis& a);

/// Same content as JSON, with the per-country final-use and value-added
/// distributions attached per node.
std::string node_stats_json(const Economy& economy, const YearAnalysis& a);

std::string spectral_json(const YearAnalysis& a);
std::string indicators_json(const YearAnalysis& a);

/// n x J distribution (M or zeta) with node labels and country columns.
std::string country_distribution_csv(const Economy& economy,
                                     const Eigen::MatrixXd& dist);

/// J x J industry slice with country labels on both axes.
std::string industry_matrix_csv(const Labels& labels,
                                const Eigen::MatrixXd& slice);

std::string histogram_csv(const Histogram& hist);
std::string kappa_sweep_csv(const std::vector<KappaSweepRow>& rows);

std::string panel_csv(const std::vector<PanelRow>& rows);
std::string panel_json(const std::vector<PanelRow>& rows);

/// Outcome of one verification check.
struct Check {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

std::string verification_json(const std::vector<Check>& checks);

void write_file(const std::string& path, const std::string& content);

}  // namespace gvc::reports
