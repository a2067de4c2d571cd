#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gvc/errors.hpp"
#include "gvc/markov.hpp"
#include "gvc/rng.hpp"

namespace gvc {

namespace {

struct Accumulator {
  explicit Accumulator(int states, int classes)
      : visit_sum(states, 0.0),
        visit_sq(states, 0.0),
        occupancy_sum(states, 0.0),
        occupancy_sq(states, 0.0),
        running_sum(states, 0.0),
        running_sq(states, 0.0),
        absorb_count(classes, 0) {}

  std::vector<double> visit_sum, visit_sq;
  std::vector<double> occupancy_sum, occupancy_sq;
  std::vector<double> running_sum, running_sq;
  std::vector<std::int64_t> absorb_count;
  double time_sum = 0.0, time_sq = 0.0, time_cu = 0.0, time_q4 = 0.0;
  std::int64_t paths = 0;
  std::int64_t occupancy_paths = 0;
  std::int64_t running_paths = 0;

  void merge(const Accumulator& other) {
    for (std::size_t i = 0; i < visit_sum.size(); ++i) {
      visit_sum[i] += other.visit_sum[i];
      visit_sq[i] += other.visit_sq[i];
      occupancy_sum[i] += other.occupancy_sum[i];
      occupancy_sq[i] += other.occupancy_sq[i];
      running_sum[i] += other.running_sum[i];
      running_sq[i] += other.running_sq[i];
    }
    for (std::size_t k = 0; k < absorb_count.size(); ++k)
      absorb_count[k] += other.absorb_count[k];
    time_sum += other.time_sum;
    time_sq += other.time_sq;
    time_cu += other.time_cu;
    time_q4 += other.time_q4;
    paths += other.paths;
    occupancy_paths += other.occupancy_paths;
    running_paths += other.running_paths;
  }
};

// Per-state cumulative transition rows: n transient entries then K absorbing.
std::vector<std::vector<double>> cumulative_rows(const AbsorbingChain& chain) {
  const int n = chain.state_count();
  const int k = chain.absorbing_count();
  std::vector<std::vector<double>> rows(n);
  for (int i = 0; i < n; ++i) {
    rows[i].resize(n + k);
    double acc = 0.0;
    for (int j = 0; j < n; ++j) rows[i][j] = (acc += chain.transient()(i, j));
    for (int c = 0; c < k; ++c)
      rows[i][n + c] = (acc += chain.absorption()(i, c));
  }
  return rows;
}

void run_paths(const std::vector<std::vector<double>>& rows, int states,
               int classes, int start, const SimulationOptions& options,
               std::int64_t first_path, std::int64_t last_path,
               Accumulator& acc) {
  std::vector<double> visits(states);
  std::vector<double> early_visits(states);
  const bool want_ratios = options.ratio_time > 0;

  for (std::int64_t p = first_path; p < last_path; ++p) {
    Xoshiro256 rng = Xoshiro256::stream(options.seed,
                                        static_cast<std::uint64_t>(p));
    std::fill(visits.begin(), visits.end(), 0.0);
    if (want_ratios) std::fill(early_visits.begin(), early_visits.end(), 0.0);

    int state = start;
    std::int64_t steps = 0;
    int absorbed = -1;
    while (true) {
      visits[state] += 1.0;
      if (want_ratios && steps <= options.ratio_time)
        early_visits[state] += 1.0;
      ++steps;
      if (steps > options.max_steps)
        throw NonAbsorbingChainError(
            "path " + std::to_string(p) + " exceeded " +
            std::to_string(options.max_steps) +
            " steps; spectral radius is likely at one");

      const double u = rng.uniform();
      const std::vector<double>& row = rows[state];
      int next = static_cast<int>(row.size()) - 1;
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (u < row[j]) {
          next = static_cast<int>(j);
          break;
        }
      }
      if (next < states) {
        state = next;
      } else {
        absorbed = next - states;
        break;
      }
    }

    acc.paths += 1;
    acc.absorb_count[absorbed] += 1;
    const double t = static_cast<double>(steps);
    acc.time_sum += t;
    acc.time_sq += t * t;
    acc.time_cu += t * t * t;
    acc.time_q4 += t * t * t * t;
    for (int j = 0; j < states; ++j) {
      acc.visit_sum[j] += visits[j];
      acc.visit_sq[j] += visits[j] * visits[j];
    }
    if (want_ratios) {
      if (steps >= options.ratio_time) {
        acc.occupancy_paths += 1;
        for (int j = 0; j < states; ++j) {
          const double share = visits[j] / t;
          acc.occupancy_sum[j] += share;
          acc.occupancy_sq[j] += share * share;
        }
      }
      if (steps > options.ratio_time) {
        acc.running_paths += 1;
        for (int j = 0; j < states; ++j) {
          const double share =
              early_visits[j] / static_cast<double>(options.ratio_time);
          acc.running_sum[j] += share;
          acc.running_sq[j] += share * share;
        }
      }
    }
  }
}

Estimate mean_estimate(double sum, double sum_sq, std::int64_t count) {
  Estimate e;
  e.count = count;
  if (count == 0) return e;
  e.mean = sum / static_cast<double>(count);
  if (count > 1) {
    const double var =
        std::max(0.0, (sum_sq - static_cast<double>(count) * e.mean * e.mean) /
                          static_cast<double>(count - 1));
    e.stderr_of_mean = std::sqrt(var / static_cast<double>(count));
  }
  return e;
}

}  // namespace

SimulationSummary simulate(const AbsorbingChain& chain, int start,
                           const SimulationOptions& options) {
  if (start < 0 || start >= chain.state_count())
    throw DomainError("start state out of range");
  if (options.paths < 1) throw DomainError("need at least one path");

  const int states = chain.state_count();
  const int classes = chain.absorbing_count();
  const auto rows = cumulative_rows(chain);

  const int threads =
      std::max(1, std::min<int>(options.threads,
                                static_cast<int>(options.paths)));
  std::vector<Accumulator> parts(threads, Accumulator(states, classes));
  if (threads == 1) {
    run_paths(rows, states, classes, start, options, 0, options.paths,
              parts[0]);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const std::int64_t chunk = (options.paths + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          const std::int64_t lo = w * chunk;
          const std::int64_t hi = std::min<std::int64_t>(lo + chunk,
                                                         options.paths);
          run_paths(rows, states, classes, start, options, lo, hi, parts[w]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& err : errors)
      if (err) std::rethrow_exception(err);
    for (int w = 1; w < threads; ++w) parts[0].merge(parts[w]);
  }
  const Accumulator& acc = parts[0];

  SimulationSummary summary;
  summary.paths = acc.paths;
  summary.seed = options.seed;
  summary.start = start;

  summary.visits.resize(states);
  for (int j = 0; j < states; ++j)
    summary.visits[j] = mean_estimate(acc.visit_sum[j], acc.visit_sq[j],
                                      acc.paths);
  summary.time = mean_estimate(acc.time_sum, acc.time_sq, acc.paths);

  // Variance of the absorption time, with the standard error of a sample
  // variance from the fourth central moment.
  {
    const double n = static_cast<double>(acc.paths);
    Estimate var_est;
    var_est.count = acc.paths;
    if (acc.paths > 1) {
      const double mean = acc.time_sum / n;
      const double m2 = acc.time_sq / n - mean * mean;
      const double sample_var = m2 * n / (n - 1.0);
      const double m4 = (acc.time_q4 - 4.0 * mean * acc.time_cu +
                         6.0 * mean * mean * acc.time_sq -
                         4.0 * mean * mean * mean * acc.time_sum +
                         n * mean * mean * mean * mean) /
                        n;
      const double var_of_var = std::max(
          0.0,
          (m4 - sample_var * sample_var * (n - 3.0) / (n - 1.0)) / n);
      var_est.mean = sample_var;
      var_est.stderr_of_mean = std::sqrt(var_of_var);
    }
    summary.time_variance = var_est;
  }

  summary.absorb.resize(classes);
  for (int c = 0; c < classes; ++c) {
    Estimate e;
    e.count = acc.paths;
    e.mean = static_cast<double>(acc.absorb_count[c]) /
             static_cast<double>(acc.paths);
    e.stderr_of_mean = std::sqrt(
        std::max(0.0, e.mean * (1.0 - e.mean) / static_cast<double>(acc.paths)));
    summary.absorb[c] = e;
  }

  if (options.ratio_time > 0) {
    summary.occupancy_share.resize(states);
    summary.running_share.resize(states);
    for (int j = 0; j < states; ++j) {
      summary.occupancy_share[j] = mean_estimate(
          acc.occupancy_sum[j], acc.occupancy_sq[j], acc.occupancy_paths);
      summary.running_share[j] = mean_estimate(
          acc.running_sum[j], acc.running_sq[j], acc.running_paths);
    }
    summary.occupancy_paths = acc.occupancy_paths;
    summary.running_paths = acc.running_paths;
  }
  return summary;
}

}  // namespace gvc
