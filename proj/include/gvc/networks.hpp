#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "gvc/economy.hpp"

namespace gvc {

/// World-input network: column-normalized intermediate flows
/// a_ij = z_ij / x_j together with the value-added shares delta_i = w_i / x_i.
/// Every column of A plus the matching delta entry sums to one.
struct InputNetwork {
  Eigen::MatrixXd coefficients;  // A, n x n
  Eigen::VectorXd value_added_share;  // delta
};

/// World-output network: row-normalized intermediate flows
/// b_ij = z_ij / x_i, the final-demand shares gamma_i = f_i / x_i, and the
/// per-destination-country split eta_ic = F_ic / x_i (rows of the split sum
/// to gamma).
struct OutputNetwork {
  Eigen::MatrixXd coefficients;  // B, n x n
  Eigen::VectorXd final_demand_share;  // gamma
  Eigen::MatrixXd country_absorption;  // D_eta, n x J
};

InputNetwork build_input_network(const Economy& economy);
OutputNetwork build_output_network(const Economy& economy);

/// Entrywise sup-norm of B - X^{-1} A X, which vanishes when both networks
/// come from the same economy (A and B are similar through diag(x)).
double similarity_residual(const InputNetwork& input,
                           const OutputNetwork& output,
                           const Eigen::VectorXd& gross_output);

/// Means of the country-diagonal and country-off-diagonal blocks of an
/// n x n matrix. The cell counts make the weighted recombination of the two
/// means reproduce the full-matrix mean.
struct BlockStats {
  double diag_mean = 0.0;
  double offdiag_mean = 0.0;
  std::int64_t diag_cells = 0;
  std::int64_t offdiag_cells = 0;
};

/// Strict grid form: matrix must be (countries*sectors)^2 with nodes in
/// canonical order.
BlockStats block_means(const Eigen::MatrixXd& matrix, int countries,
                       int sectors);

/// General form: country_of[i] assigns each row/column to a country block.
BlockStats block_means(const Eigen::MatrixXd& matrix,
                       const std::vector<int>& country_of);

}  // namespace gvc
