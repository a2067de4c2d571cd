#include "gvc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "gvc/errors.hpp"

namespace gvc {

namespace {

void require_square_nonnegative(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols())
    throw DimensionError("matrix is not square");
  if (matrix.size() == 0) throw DimensionError("matrix is empty");
  if (matrix.minCoeff() < 0.0)
    throw DomainError("matrix has negative entries");
}

Eigen::VectorXd average_ranks(const Eigen::VectorXd& values) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return values[a] < values[b]; });

  Eigen::VectorXd ranks(n);
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Eigen::Index k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

SpectralSummary dominant_eigenpair(const Eigen::MatrixXd& matrix,
                                   const PowerOptions& options) {
  require_square_nonnegative(matrix);
  const Eigen::Index n = matrix.rows();
  const Eigen::MatrixXd transposed = matrix.transpose();

  Eigen::VectorXd right = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
  Eigen::VectorXd left = right;

  double lambda = 0.0;
  int iterations = 0;
  bool converged = false;
  for (; iterations < options.max_iterations; ++iterations) {
    const Eigen::VectorXd right_image = matrix * right;
    const Eigen::VectorXd left_image = transposed * left;

    const double pairing = left.dot(right);
    const double left_sum = left.sum();
    if (pairing <= 0.0 || left_sum <= 0.0)
      throw IrreducibilityError(
          "left/right iterates lost overlap; matrix is reducible");
    lambda = left.dot(right_image) / pairing;

    // Residuals for the finally-normalized vectors: the right vector gets
    // rescaled by left_sum / pairing and the left one by 1 / left_sum.
    const double res_right =
        (right_image - lambda * right).cwiseAbs().maxCoeff() *
        (left_sum / pairing);
    const double res_left =
        (left_image - lambda * left).cwiseAbs().maxCoeff() / left_sum;
    if (std::max(res_right, res_left) <= options.tolerance) {
      converged = true;
      break;
    }

    // Unit diagonal shift keeps the iteration convergent on periodic
    // nonnegative matrices without changing the eigenvectors.
    right = (right_image + right).normalized();
    left = (left_image + left).normalized();
  }

  SpectralSummary summary;
  summary.rho_left = left / left.sum();
  const double pairing = summary.rho_left.dot(right);
  if (pairing <= 0.0)
    throw IrreducibilityError("left/right eigenvectors do not pair");
  summary.rho_right = right / pairing;

  const Eigen::VectorXd right_image = matrix * summary.rho_right;
  const Eigen::VectorXd left_image = transposed * summary.rho_left;
  summary.lambda = summary.rho_left.dot(right_image);
  summary.residual = std::max(
      (right_image - summary.lambda * summary.rho_right).cwiseAbs().maxCoeff(),
      (left_image - summary.lambda * summary.rho_left).cwiseAbs().maxCoeff());
  summary.iterations = iterations;

  if (!converged && summary.residual > options.tolerance)
    throw ConvergenceError("power iteration reached residual " +
                           std::to_string(summary.residual) + " > " +
                           std::to_string(options.tolerance) + " after " +
                           std::to_string(options.max_iterations) +
                           " iterations");
  // A Perron vector entry indistinguishable from zero means the support is
  // effectively reducible; the shifted iteration keeps genuinely coupled
  // components well above this floor.
  if (summary.rho_left.minCoeff() <= 1e-8 * summary.rho_left.maxCoeff() ||
      summary.rho_right.minCoeff() <= 1e-8 * summary.rho_right.maxCoeff())
    throw IrreducibilityError(
        "converged dominant eigenvector has an entry indistinguishable from "
        "zero");
  return summary;
}

double spectral_radius_bound(const Eigen::MatrixXd& matrix, double target,
                             int max_iterations) {
  require_square_nonnegative(matrix);
  const Eigen::Index n = matrix.rows();
  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / double(n));
  double best = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (int k = 0; k < max_iterations; ++k) {
    const Eigen::VectorXd image = matrix * v;
    const double bound = (image.array() / v.array()).maxCoeff();
    if (bound < best - 1e-15) {
      best = std::min(best, bound);
      stalled = 0;
    } else if (++stalled > 200) {
      break;  // bound has plateaued; further iterations cannot help
    }
    best = std::min(best, bound);
    if (best <= target) return best;
    v = image + v;
    v /= v.sum();
  }
  return best;
}

Eigen::VectorXd product_distribution(const SpectralSummary& summary) {
  return summary.rho_left.cwiseProduct(summary.rho_right);
}

ProductInvarianceReport verify_product_invariance(
    const InputNetwork& input, const OutputNetwork& output,
    const Eigen::VectorXd& gross_output, const PowerOptions& options) {
  const SpectralSummary in_summary =
      dominant_eigenpair(input.coefficients, options);
  const SpectralSummary out_summary =
      dominant_eigenpair(output.coefficients, options);

  ProductInvarianceReport report;
  report.product_gap = (product_distribution(in_summary) -
                        product_distribution(out_summary))
                           .cwiseAbs()
                           .maxCoeff();

  const auto normalized = [](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return v / v.sum();
  };
  report.right_transform_gap =
      (normalized(gross_output.cwiseInverse().cwiseProduct(
           in_summary.rho_right)) -
       normalized(out_summary.rho_right))
          .cwiseAbs()
          .maxCoeff();
  report.left_transform_gap =
      (normalized(gross_output.cwiseProduct(in_summary.rho_left)) -
       normalized(out_summary.rho_left))
          .cwiseAbs()
          .maxCoeff();
  return report;
}

Eigen::VectorXd parametrized_rank_vector(const Eigen::MatrixXd& transient,
                                         double kappa, double lambda) {
  require_square_nonnegative(transient);
  if (kappa <= 0.0) throw DomainError("kappa must be positive");
  if (lambda > 0.0 && kappa >= 1.0 / lambda)
    throw DivergenceError("kappa " + std::to_string(kappa) +
                          " is at or beyond 1/lambda = " +
                          std::to_string(1.0 / lambda));
  const Eigen::Index n = transient.rows();
  const Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(n, n) - kappa * transient;
  return Eigen::PartialPivLU<Eigen::MatrixXd>(system).solve(
      Eigen::VectorXd::Ones(n));
}

LimitRankVectors limit_rank_vectors(const Eigen::MatrixXd& transient,
                                    const SpectralSummary& summary) {
  require_square_nonnegative(transient);
  if (summary.lambda >= 1.0)
    throw DomainError("dominant eigenvalue is not below one");
  LimitRankVectors limits;
  limits.degree_limit =
      Eigen::VectorXd::Ones(transient.rows()) + transient.rowwise().sum();
  limits.eigen_limit =
      (summary.rho_left.sum() / (1.0 - summary.lambda)) * summary.rho_right;
  return limits;
}

double spearman(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size())
    throw DimensionError("rank correlation needs equal-length vectors");
  if (a.size() < 2) throw DomainError("rank correlation needs at least 2 points");

  const Eigen::VectorXd ra = average_ranks(a);
  const Eigen::VectorXd rb = average_ranks(b);
  const Eigen::VectorXd da = ra.array() - ra.mean();
  const Eigen::VectorXd db = rb.array() - rb.mean();
  const double var_a = da.squaredNorm();
  const double var_b = db.squaredNorm();
  if (var_a == 0.0 || var_b == 0.0)
    throw UndefinedCorrelationError("zero rank variance");
  return da.dot(db) / std::sqrt(var_a * var_b);
}

}  // namespace gvc
