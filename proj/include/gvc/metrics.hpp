#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gvc/markov.hpp"
#include "gvc/networks.hpp"

namespace gvc {

/// Expected number of production stages until a node's output reaches final
/// use: the absorption time of the output chain. Entries are >= 1.
Eigen::VectorXd upstreamness(const OutputNetwork& network);

/// Expected number of stages separating a node from primary inputs: the
/// absorption time of the input chain.
Eigen::VectorXd downstreamness(const InputNetwork& network);

/// Variance of the stage count (chain-length risk) for either chain.
Eigen::VectorXd chain_risk(const OutputNetwork& network);
Eigen::VectorXd chain_risk(const InputNetwork& network);

/// Global fragmentation indicators: total domestic vs cross-border mass of
/// the value-added distribution (zeta) and the final-use distribution (M).
/// Each family sums to the node count n, so domestic + cross-border = n
/// within rounding; fractions divide by n.
struct GlobalIndicators {
  double domestic_value_added = 0.0;       // GDVA
  double cross_border_value_added = 0.0;   // GIEVA
  double domestic_final_use = 0.0;         // GDFU
  double cross_border_final_use = 0.0;     // GIEFU
  int node_count = 0;

  double domestic_value_added_fraction() const;
  double cross_border_value_added_fraction() const;
  double domestic_final_use_fraction() const;
  double cross_border_final_use_fraction() const;
};

GlobalIndicators global_indicators(const Eigen::MatrixXd& final_use_dist,
                                   const Eigen::MatrixXd& value_added_dist,
                                   const std::vector<int>& country_of);

/// One year of the panel table assembled by the report command.
struct PanelRow {
  int year = 0;
  int node_count = 0;
  double lambda = 0.0;
  BlockStats input_blocks;
  BlockStats output_blocks;
  GlobalIndicators indicators;
};

/// Rows sorted by year; independent years, so assembly may run in parallel.
std::vector<PanelRow> panel_report(const std::vector<Economy>& economies,
                                   int jobs = 1);

}  // namespace gvc
