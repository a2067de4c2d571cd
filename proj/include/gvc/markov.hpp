#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "gvc/networks.hpp"

namespace gvc {

/// An absorbing Markov chain over n transient states, row convention:
/// transient(i, j) is the one-step probability of moving from i to j and
/// absorption(i, k) the probability of absorbing from i into terminal class
/// k. Rows of [transient | absorption] must sum to one.
///
/// The input chain of an economy stores A^T with the value-added share as its
/// single absorption column; the output chain stores B with the final-demand
/// share, or the per-country split when country-level destinations matter.
class AbsorbingChain {
 public:
  AbsorbingChain(Eigen::MatrixXd transient, Eigen::MatrixXd absorption);

  static AbsorbingChain input_chain(const InputNetwork& network);
  static AbsorbingChain output_chain(const OutputNetwork& network);
  /// Output chain with one absorbing state per destination country.
  static AbsorbingChain output_chain_by_country(const OutputNetwork& network);
  /// Input chain with one absorbing state per value-added source country.
  static AbsorbingChain input_chain_by_country(
      const InputNetwork& network, const std::vector<int>& country_of,
      int countries);

  const Eigen::MatrixXd& transient() const { return transient_; }
  const Eigen::MatrixXd& absorption() const { return absorption_; }
  int state_count() const { return static_cast<int>(transient_.rows()); }
  int absorbing_count() const { return static_cast<int>(absorption_.cols()); }

 private:
  Eigen::MatrixXd transient_;
  Eigen::MatrixXd absorption_;
};

/// Splits a one-column absorption vector into per-country columns:
/// column c holds alpha_i for the nodes of country c and zero elsewhere.
Eigen::MatrixXd split_absorption_by_country(const Eigen::VectorXd& alpha,
                                            const std::vector<int>& country_of,
                                            int countries);

/// Visit-count and absorption-time moments of an absorbing chain.
///   visit_mean      L   = (I - Q)^{-1}, expected visits to j from i
///   visit_variance  L2  = L (2 L_dg - I) - L_sq
///   time_mean       g   = L 1
///   time_variance   h   = (2 L - I) g - g_sq
struct ChainStatistics {
  Eigen::MatrixXd visit_mean;
  Eigen::MatrixXd visit_variance;
  Eigen::VectorXd time_mean;
  Eigen::VectorXd time_variance;
};

/// Shares one LU factorization of (I - Q) across the fundamental matrix, the
/// absorption matrix and ad-hoc right-hand sides. Construction verifies the
/// chain is genuinely absorbing (spectral radius of Q at most 1 - 1e-8) and
/// throws NonAbsorbingChainError otherwise.
class ChainSolver {
 public:
  explicit ChainSolver(const AbsorbingChain& chain);

  ChainStatistics statistics() const;
  /// (I - Q)^{-1} absorption: row i is the distribution of i's terminal
  /// class. Row-stochastic whenever the chain's rows are.
  Eigen::MatrixXd absorption_matrix() const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;

 private:
  const AbsorbingChain& chain_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

ChainStatistics fundamental(const AbsorbingChain& chain);
Eigen::MatrixXd absorption_matrix(const AbsorbingChain& chain);

/// Distribution of a node's value added across source countries:
/// (I - A^T)^{-1} D_delta with D_delta the per-country split of the
/// value-added share. Each row sums to one.
Eigen::MatrixXd value_added_distribution(const InputNetwork& network,
                                         const std::vector<int>& country_of,
                                         int countries);

/// J x J slice of an n x J node-level distribution at one industry: row c is
/// the row of `distribution` belonging to node (country c, sector). The
/// sector ordinal is 0-based. Throws DomainError when the sector is out of
/// range or a country lacks that sector node.
Eigen::MatrixXd industry_matrix(const Eigen::MatrixXd& distribution,
                                const Economy& economy, int sector);

/// Exact conditional state distribution pi^T Q^t / (pi^T Q^t 1): where the
/// chain is at time t given that it has not yet been absorbed. Computed by t
/// renormalized vector-matrix products; throws ExtinctionError if the
/// survival mass hits zero.
Eigen::VectorXd conditional_state_distribution(const AbsorbingChain& chain,
                                               const Eigen::VectorXd& start,
                                               std::int64_t t);

/// Exact doubly conditional distribution: where the chain is at time tau
/// given survival to time t >= tau. Componentwise
/// (pi^T Q^tau)_j (Q^{t-tau} 1)_j / pi^T Q^t 1; converges to the product
/// distribution as tau and t - tau both grow.
Eigen::VectorXd doubly_conditional_distribution(const AbsorbingChain& chain,
                                                const Eigen::VectorXd& start,
                                                std::int64_t tau,
                                                std::int64_t t);

/// Monte Carlo estimate with its standard error.
struct Estimate {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  std::int64_t count = 0;
};

struct SimulationOptions {
  std::uint64_t seed = 1;
  std::int64_t paths = 1000000;
  std::int64_t max_steps = 10000000;  // per-path cap; exceeding it throws
  /// When positive, also collect the two occupancy-ratio estimators at this
  /// time horizon (see SimulationSummary).
  std::int64_t ratio_time = 0;
  int threads = 1;
};

/// Aggregated path statistics from one start state.
///   visits[j]        mean visits to j before absorption   (oracle for L)
///   time             mean absorption time                  (oracle for g)
///   time_variance    unbiased variance of absorption time  (oracle for h),
///                    stderr from the fourth central moment
///   absorb[k]        absorption frequency into class k     (oracle for M)
///   occupancy_share  E[X_j / X | X >= ratio_time]
///   running_share    E[(visits to j during steps 0..ratio_time) / ratio_time
///                      | X > ratio_time]
/// Both ratio estimators converge to the product distribution with O(1/t)
/// bias in the horizon.
struct SimulationSummary {
  std::int64_t paths = 0;
  std::uint64_t seed = 0;
  int start = 0;
  std::vector<Estimate> visits;
  Estimate time;
  Estimate time_variance;
  std::vector<Estimate> absorb;
  std::vector<Estimate> occupancy_share;
  std::vector<Estimate> running_share;
  std::int64_t occupancy_paths = 0;
  std::int64_t running_paths = 0;
};

/// Simulate `paths` independent trajectories from `start`. Deterministic for
/// a fixed seed: path p uses its own generator stream derived from
/// (seed, p), so thread count does not change any per-path outcome.
SimulationSummary simulate(const AbsorbingChain& chain, int start,
                           const SimulationOptions& options);

}  // namespace gvc
