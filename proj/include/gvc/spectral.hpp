#pragma once

#include <Eigen/Dense>

#include "gvc/networks.hpp"

namespace gvc {

struct PowerOptions {
  double tolerance = 1e-12;  // sup-norm eigen-residual at convergence
  int max_iterations = 100000;
};

/// Dominant eigenpair of a nonnegative matrix. The left vector is scaled to
/// sum to one and the right vector so that rho_left . rho_right = 1; with
/// that pairing the product distribution sums to one by construction.
struct SpectralSummary {
  double lambda = 0.0;
  Eigen::VectorXd rho_left;
  Eigen::VectorXd rho_right;
  int iterations = 0;
  double residual = 0.0;
};

/// Power iteration (with a unit diagonal shift, so periodic chains such as
/// pure trading rings still converge) run on M for the right vector and on
/// M^T for the left one. lambda is the two-sided Rayleigh quotient.
/// Throws ConvergenceError past max_iterations and IrreducibilityError if a
/// converged vector has an entry indistinguishable from zero (reducible
/// support).
SpectralSummary dominant_eigenpair(const Eigen::MatrixXd& matrix,
                                   const PowerOptions& options = {});

/// Certified Collatz-Wielandt upper bound on the spectral radius of a
/// nonnegative matrix. Iterates until the bound drops to `target` or the
/// iteration cap is hit, whichever is first, and returns the final bound.
double spectral_radius_bound(const Eigen::MatrixXd& matrix, double target,
                             int max_iterations = 50000);

/// Elementwise product of the dominant left and right eigenvectors; a
/// probability vector describing the long-run conditional occupancy of the
/// chain, identical for the input and output networks of one economy.
Eigen::VectorXd product_distribution(const SpectralSummary& summary);

struct ProductInvarianceReport {
  double product_gap = 0.0;         // sup |rho_prod(A) - rho_prod(B)|
  double right_transform_gap = 0.0; // rho_r(B) vs X^{-1} rho_r(A), renormalized
  double left_transform_gap = 0.0;  // rho_l(B) vs X rho_l(A), renormalized
};

/// Computes both product distributions independently and checks the diagonal
/// similarity transforms that map the eigenvectors of A onto those of B.
ProductInvarianceReport verify_product_invariance(
    const InputNetwork& input, const OutputNetwork& output,
    const Eigen::VectorXd& gross_output, const PowerOptions& options = {});

/// Resolvent centrality (I - kappa Q)^{-1} 1 for a row-convention transient
/// matrix Q (B for upstreamness, A^T for downstreamness); kappa = 1 gives the
/// plain chain-length metric. Requires 0 < kappa < 1/lambda, else
/// DivergenceError.
Eigen::VectorXd parametrized_rank_vector(const Eigen::MatrixXd& transient,
                                         double kappa, double lambda);

/// The two closed-form ranking limits of the resolvent centrality:
/// degree_limit = 1 + Q 1 (kappa -> 0) and
/// eigen_limit  = sum(rho_left) / (1 - lambda) * rho_right (kappa -> 1/lambda).
struct LimitRankVectors {
  Eigen::VectorXd degree_limit;
  Eigen::VectorXd eigen_limit;
};

LimitRankVectors limit_rank_vectors(const Eigen::MatrixXd& transient,
                                    const SpectralSummary& summary);

/// Spearman rank correlation with average ranks for ties.
/// Throws UndefinedCorrelationError when either input has zero rank variance.
double spearman(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace gvc
