#include "gvc/markov.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "gvc/errors.hpp"
#include "gvc/spectral.hpp"

namespace gvc {

namespace {

constexpr double kRowSumTolerance = 1e-10;
constexpr double kAbsorbingMargin = 1e-8;  // require lambda(Q) <= 1 - margin

}  // namespace

AbsorbingChain::AbsorbingChain(Eigen::MatrixXd transient,
                               Eigen::MatrixXd absorption)
    : transient_(std::move(transient)), absorption_(std::move(absorption)) {
  const Eigen::Index n = transient_.rows();
  if (transient_.cols() != n)
    throw DimensionError("transient matrix is not square");
  if (absorption_.rows() != n)
    throw DimensionError("absorption rows do not match transient states");
  if (absorption_.cols() < 1)
    throw DimensionError("chain needs at least one absorbing state");
  if (transient_.size() > 0 && transient_.minCoeff() < 0.0)
    throw DomainError("negative transition probability");
  if (absorption_.size() > 0 && absorption_.minCoeff() < 0.0)
    throw DomainError("negative absorption probability");

  const Eigen::VectorXd row_sums =
      transient_.rowwise().sum() + absorption_.rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(row_sums[i] - 1.0) > kRowSumTolerance)
      throw DomainError("row " + std::to_string(i) +
                        " of the embedded chain sums to " +
                        std::to_string(row_sums[i]) + ", expected 1");
  }
}

AbsorbingChain AbsorbingChain::input_chain(const InputNetwork& network) {
  return AbsorbingChain(network.coefficients.transpose(),
                        Eigen::MatrixXd(network.value_added_share));
}

AbsorbingChain AbsorbingChain::output_chain(const OutputNetwork& network) {
  return AbsorbingChain(network.coefficients,
                        Eigen::MatrixXd(network.final_demand_share));
}

AbsorbingChain AbsorbingChain::output_chain_by_country(
    const OutputNetwork& network) {
  return AbsorbingChain(network.coefficients, network.country_absorption);
}

AbsorbingChain AbsorbingChain::input_chain_by_country(
    const InputNetwork& network, const std::vector<int>& country_of,
    int countries) {
  return AbsorbingChain(
      network.coefficients.transpose(),
      split_absorption_by_country(network.value_added_share, country_of,
                                  countries));
}

Eigen::MatrixXd split_absorption_by_country(const Eigen::VectorXd& alpha,
                                            const std::vector<int>& country_of,
                                            int countries) {
  if (alpha.size() != static_cast<Eigen::Index>(country_of.size()))
    throw DimensionError("country assignment does not match vector length");
  Eigen::MatrixXd split = Eigen::MatrixXd::Zero(alpha.size(), countries);
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    const int c = country_of[i];
    if (c < 0 || c >= countries) throw DomainError("country ordinal out of range");
    split(i, c) = alpha[i];
  }
  return split;
}

ChainSolver::ChainSolver(const AbsorbingChain& chain) : chain_(chain) {
  const double bound =
      spectral_radius_bound(chain.transient(), 1.0 - kAbsorbingMargin);
  if (bound > 1.0 - kAbsorbingMargin) {
    char text[128];
    std::snprintf(text, sizeof text,
                  "spectral radius bound %.9g exceeds %.9g; the chain does "
                  "not absorb",
                  bound, 1.0 - kAbsorbingMargin);
    throw NonAbsorbingChainError(text);
  }
  const Eigen::Index n = chain.state_count();
  lu_.compute(Eigen::MatrixXd::Identity(n, n) - chain.transient());
}

ChainStatistics ChainSolver::statistics() const {
  const Eigen::Index n = chain_.state_count();
  ChainStatistics stats;
  stats.visit_mean = lu_.solve(Eigen::MatrixXd::Identity(n, n));

  const Eigen::MatrixXd& L = stats.visit_mean;
  // L2 = L (2 L_dg - I) - L_sq: column j of L scales by 2 l_jj - 1, minus
  // the elementwise square.
  const Eigen::VectorXd column_scale = 2.0 * L.diagonal().array() - 1.0;
  stats.visit_variance = L * column_scale.asDiagonal() - L.cwiseProduct(L);

  stats.time_mean = L * Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd& g = stats.time_mean;
  stats.time_variance = (2.0 * (L * g) - g) - g.cwiseProduct(g);
  return stats;
}

Eigen::MatrixXd ChainSolver::absorption_matrix() const {
  return lu_.solve(chain_.absorption());
}

Eigen::MatrixXd ChainSolver::solve(const Eigen::MatrixXd& rhs) const {
  return lu_.solve(rhs);
}

ChainStatistics fundamental(const AbsorbingChain& chain) {
  return ChainSolver(chain).statistics();
}

Eigen::MatrixXd absorption_matrix(const AbsorbingChain& chain) {
  return ChainSolver(chain).absorption_matrix();
}

Eigen::MatrixXd value_added_distribution(const InputNetwork& network,
                                         const std::vector<int>& country_of,
                                         int countries) {
  return absorption_matrix(
      AbsorbingChain::input_chain_by_country(network, country_of, countries));
}

Eigen::MatrixXd industry_matrix(const Eigen::MatrixXd& distribution,
                                const Economy& economy, int sector) {
  if (distribution.rows() != economy.node_count())
    throw DimensionError("distribution rows do not match the economy");
  if (sector < 0 || sector >= economy.labels().sector_count())
    throw DomainError("sector ordinal " + std::to_string(sector) +
                      " out of range");
  const int countries = economy.labels().country_count();
  Eigen::MatrixXd slice(countries, distribution.cols());
  for (int c = 0; c < countries; ++c) {
    const auto node = economy.node_at(c, sector);
    if (!node)
      throw DomainError("country " + economy.labels().countries[c] +
                        " has no active node for sector " +
                        economy.labels().sectors[sector]);
    slice.row(c) = distribution.row(*node);
  }
  return slice;
}

namespace {

Eigen::VectorXd propagate(const AbsorbingChain& chain, Eigen::VectorXd mass,
                          std::int64_t steps, bool survival) {
  // Occupancy evolves as a row vector (mass <- Q^T mass); the survival
  // profile evolves as a column vector (mass <- Q mass). Renormalized every
  // step, so only the direction reaches the callers.
  for (std::int64_t s = 0; s < steps; ++s) {
    if (survival)
      mass = chain.transient() * mass;
    else
      mass = chain.transient().transpose() * mass;
    const double total = mass.sum();
    if (total <= 0.0)
      throw ExtinctionError(
          "survival mass vanished at step " + std::to_string(s + 1) +
              "; the largest supported time here is " + std::to_string(s),
          s);
    mass /= total;
  }
  return mass;
}

void check_start_distribution(const AbsorbingChain& chain,
                              const Eigen::VectorXd& start) {
  if (start.size() != chain.state_count())
    throw DimensionError("start distribution length does not match the chain");
  if (start.minCoeff() < 0.0 || start.sum() <= 0.0)
    throw DomainError("start distribution must be nonnegative with positive mass");
}

}  // namespace

Eigen::VectorXd conditional_state_distribution(const AbsorbingChain& chain,
                                               const Eigen::VectorXd& start,
                                               std::int64_t t) {
  check_start_distribution(chain, start);
  if (t < 0) throw DomainError("time must be nonnegative");
  Eigen::VectorXd mass = propagate(chain, start / start.sum(), t, false);
  return mass;  // already normalized to unit survival mass
}

Eigen::VectorXd doubly_conditional_distribution(const AbsorbingChain& chain,
                                                const Eigen::VectorXd& start,
                                                std::int64_t tau,
                                                std::int64_t t) {
  check_start_distribution(chain, start);
  if (tau < 0 || tau > t) throw DomainError("need 0 <= tau <= t");
  const Eigen::VectorXd forward =
      propagate(chain, start / start.sum(), tau, false);
  const Eigen::VectorXd survival = propagate(
      chain, Eigen::VectorXd::Ones(chain.state_count()), t - tau, true);
  Eigen::VectorXd joint = forward.cwiseProduct(survival);
  const double total = joint.sum();
  if (total <= 0.0)
    throw ExtinctionError("no trajectory occupies time " + std::to_string(tau) +
                              " while surviving to " + std::to_string(t),
                          t);
  return joint / total;
}

}  // namespace gvc
