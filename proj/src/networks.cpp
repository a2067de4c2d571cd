#include "gvc/networks.hpp"

#include <cmath>

#include "gvc/errors.hpp"

namespace gvc {

InputNetwork build_input_network(const Economy& economy) {
  const Eigen::VectorXd& x = economy.gross_output();
  InputNetwork net;
  net.coefficients = economy.intermediates() * x.cwiseInverse().asDiagonal();
  net.value_added_share = economy.value_added().cwiseQuotient(x);
  if (net.value_added_share.minCoeff() < 0.0)
    throw DomainError(
        "negative value-added share; the economy's columns are not "
        "exhausted by intermediate purchases plus value added");
  return net;
}

OutputNetwork build_output_network(const Economy& economy) {
  const Eigen::VectorXd& x = economy.gross_output();
  OutputNetwork net;
  net.coefficients = x.cwiseInverse().asDiagonal() * economy.intermediates();
  net.final_demand_share = economy.final_demand().cwiseQuotient(x);
  net.country_absorption = x.cwiseInverse().asDiagonal() * economy.final_use();
  if (net.final_demand_share.minCoeff() < 0.0)
    throw DomainError("negative final-demand share");
  return net;
}

double similarity_residual(const InputNetwork& input,
                           const OutputNetwork& output,
                           const Eigen::VectorXd& gross_output) {
  const Eigen::MatrixXd transformed = gross_output.cwiseInverse().asDiagonal() *
                                      input.coefficients *
                                      gross_output.asDiagonal();
  return (output.coefficients - transformed).cwiseAbs().maxCoeff();
}

BlockStats block_means(const Eigen::MatrixXd& matrix, int countries,
                       int sectors) {
  const Eigen::Index n = static_cast<Eigen::Index>(countries) * sectors;
  if (matrix.rows() != n || matrix.cols() != n)
    throw DimensionError("matrix is " + std::to_string(matrix.rows()) + "x" +
                         std::to_string(matrix.cols()) + ", expected " +
                         std::to_string(n) + "x" + std::to_string(n));
  std::vector<int> country_of(n);
  for (Eigen::Index i = 0; i < n; ++i)
    country_of[i] = static_cast<int>(i) / sectors;
  return block_means(matrix, country_of);
}

BlockStats block_means(const Eigen::MatrixXd& matrix,
                       const std::vector<int>& country_of) {
  if (matrix.rows() != matrix.cols() ||
      matrix.rows() != static_cast<Eigen::Index>(country_of.size()))
    throw DimensionError("country assignment does not match matrix shape");

  double diag_sum = 0.0;
  double offdiag_sum = 0.0;
  BlockStats stats;
  for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
      if (country_of[i] == country_of[j]) {
        diag_sum += matrix(i, j);
        stats.diag_cells += 1;
      } else {
        offdiag_sum += matrix(i, j);
        stats.offdiag_cells += 1;
      }
    }
  }
  stats.diag_mean = stats.diag_cells > 0 ? diag_sum / stats.diag_cells : 0.0;
  stats.offdiag_mean =
      stats.offdiag_cells > 0 ? offdiag_sum / stats.offdiag_cells : 0.0;
  return stats;
}

}  // namespace gvc
