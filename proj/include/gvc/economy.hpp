#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gvc/indexing.hpp"

namespace gvc {

/// Bookkeeping produced while cleaning raw table data: negative cells are
/// clamped to zero and inactive nodes (gross output <= eps_active) removed.
struct SanitizeStats {
  std::int64_t clamped_cells = 0;
  double clamped_mass = 0.0;  // total absolute value removed by clamping
  std::vector<int> dropped_flat;  // canonical 1-based flat indices of removed nodes

  bool clean() const { return clamped_cells == 0 && dropped_flat.empty(); }
};

struct SanitizedComponents {
  Eigen::MatrixXd intermediates;          // n x n, nonnegative
  Eigen::MatrixXd final_use;              // n x J, nonnegative
  std::vector<NodeId> nodes;              // retained nodes, canonical order
  std::vector<int> kept_rows;             // original grid positions of retained nodes
  SanitizeStats stats;
};

/// Clamp negative cells of Z and F to zero and drop nodes whose implied gross
/// output does not exceed eps_active. Dropping a node removes its row and
/// column from Z and its row from F, so outputs are recomputed until the
/// retained set is stable.
SanitizedComponents sanitize_components(const Labels& labels,
                                        Eigen::MatrixXd intermediates,
                                        Eigen::MatrixXd final_use,
                                        double eps_active = 1e-9);

/// One year of a world input-output table over n = retained country-industry
/// nodes: intermediate flows Z (n x n), final use by destination country
/// F (n x J), gross output x, value added w. Immutable after construction and
/// safe to share across threads.
///
/// Accounting identities:
///   x_i = sum_j Z_ij + sum_c F_ic        (output exhausts uses)
///   w_j = x_j - sum_i Z_ij               (value added closes each column)
/// Economies built by from_components satisfy both exactly; economies built
/// by from_observed carry the x and w read from the data source and are meant
/// to be screened with validate().
class Economy {
 public:
  /// Derive x and w from (Z, F). All entries of Z and F must be nonnegative
  /// and every derived x_i must be positive; raw external data should go
  /// through sanitize_components first.
  static Economy from_components(Labels labels, Eigen::MatrixXd intermediates,
                                 Eigen::MatrixXd final_use, int year = 0);

  /// Same, over an explicit retained-node subset (as produced by
  /// sanitize_components).
  static Economy from_sanitized(Labels labels, SanitizedComponents parts,
                                int year = 0);

  /// Keep x and w as observed in the data source instead of deriving them.
  /// Observed x must be strictly positive.
  static Economy from_observed(Labels labels, Eigen::MatrixXd intermediates,
                               Eigen::MatrixXd final_use, Eigen::VectorXd x,
                               Eigen::VectorXd w, int year = 0);

  /// Observed variant over a retained-node subset; x and w must already be
  /// restricted to parts.kept_rows.
  static Economy from_observed(Labels labels, SanitizedComponents parts,
                               Eigen::VectorXd x, Eigen::VectorXd w,
                               int year = 0);

  const Labels& labels() const { return labels_; }
  int year() const { return year_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const std::vector<NodeId>& nodes() const { return nodes_; }

  const Eigen::MatrixXd& intermediates() const { return intermediates_; }
  const Eigen::MatrixXd& final_use() const { return final_use_; }
  const Eigen::VectorXd& gross_output() const { return gross_output_; }
  const Eigen::VectorXd& value_added() const { return value_added_; }
  const Eigen::VectorXd& final_demand() const { return final_demand_; }

  int country_of(int node) const { return nodes_[node].country; }
  int sector_of(int node) const { return nodes_[node].sector; }
  std::vector<int> country_map() const;
  std::string node_label(int node) const;

  /// Retained index of (country, sector) 0-based ordinals, if present.
  std::optional<int> node_at(int country, int sector) const;

  /// True when the retained set is the full country x sector grid.
  bool full_grid() const;

  const SanitizeStats& sanitize_stats() const { return sanitize_; }
  bool derived() const { return derived_; }

 private:
  Economy() = default;

  Labels labels_;
  std::vector<NodeId> nodes_;
  Eigen::MatrixXd intermediates_;
  Eigen::MatrixXd final_use_;
  Eigen::VectorXd gross_output_;
  Eigen::VectorXd value_added_;
  Eigen::VectorXd final_demand_;
  int year_ = 0;
  bool derived_ = true;
  SanitizeStats sanitize_;
};

/// Residuals of the two accounting identities for one node, absolute and
/// relative to gross output.
struct NodeResidual {
  double output_abs = 0.0;
  double output_rel = 0.0;
  double value_added_abs = 0.0;
  double value_added_rel = 0.0;
};

struct ValidationReport {
  double tolerance = 0.0;
  bool passed = false;
  double max_output_rel = 0.0;
  double max_value_added_rel = 0.0;
  std::vector<NodeResidual> residuals;  // one per retained node
  SanitizeStats sanitize;

  std::vector<int> flagged_nodes(double tol) const;
};

/// Check both accounting identities at relative tolerance tau_acct.
/// Always returns a report; never throws.
ValidationReport validate(const Economy& economy, double tau_acct);

}  // namespace gvc
