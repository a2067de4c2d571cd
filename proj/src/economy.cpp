#include "gvc/economy.hpp"

#include <algorithm>
#include <cmath>

#include "gvc/errors.hpp"

namespace gvc {

namespace {

void check_shapes(const Labels& labels, const Eigen::MatrixXd& Z,
                  const Eigen::MatrixXd& F, int n) {
  if (Z.rows() != n || Z.cols() != n)
    throw DimensionError("intermediate matrix is " + std::to_string(Z.rows()) +
                         "x" + std::to_string(Z.cols()) + ", expected " +
                         std::to_string(n) + "x" + std::to_string(n));
  if (F.rows() != n || F.cols() != labels.country_count())
    throw DimensionError("final-use matrix is " + std::to_string(F.rows()) +
                         "x" + std::to_string(F.cols()) + ", expected " +
                         std::to_string(n) + "x" +
                         std::to_string(labels.country_count()));
}

void require_nonnegative(const Eigen::MatrixXd& M, const char* what) {
  if (M.size() > 0 && M.minCoeff() < 0.0)
    throw DomainError(std::string(what) +
                      " has negative entries; sanitize_components first");
}

}  // namespace

SanitizedComponents sanitize_components(const Labels& labels,
                                        Eigen::MatrixXd intermediates,
                                        Eigen::MatrixXd final_use,
                                        double eps_active) {
  const int grid = labels.grid_size();
  check_shapes(labels, intermediates, final_use, grid);

  SanitizedComponents out;
  for (Eigen::MatrixXd* m : {&intermediates, &final_use}) {
    for (Eigen::Index j = 0; j < m->cols(); ++j) {
      for (Eigen::Index i = 0; i < m->rows(); ++i) {
        double& cell = (*m)(i, j);
        if (cell < 0.0) {
          out.stats.clamped_cells += 1;
          out.stats.clamped_mass += -cell;
          cell = 0.0;
        }
      }
    }
  }

  std::vector<NodeId> nodes = grid_nodes(labels.country_count(),
                                         labels.sector_count());
  std::vector<int> kept(nodes.size());
  for (std::size_t i = 0; i < kept.size(); ++i) kept[i] = static_cast<int>(i);

  // Dropping a node removes flows into it, which can deactivate upstream
  // nodes, so iterate until the retained set is stable.
  while (true) {
    const Eigen::VectorXd x =
        intermediates.rowwise().sum() + final_use.rowwise().sum();
    std::vector<int> active;
    for (int i = 0; i < x.size(); ++i)
      if (x[i] > eps_active) active.push_back(i);
    if (static_cast<int>(active.size()) == x.size()) break;

    for (int i = 0; i < x.size(); ++i) {
      if (x[i] <= eps_active) {
        const NodeId node = nodes[i];
        out.stats.dropped_flat.push_back(flat_index(
            node.country + 1, node.sector + 1, labels.country_count(),
            labels.sector_count()));
      }
    }
    Eigen::MatrixXd z2(active.size(), active.size());
    Eigen::MatrixXd f2(active.size(), final_use.cols());
    std::vector<NodeId> nodes2;
    std::vector<int> kept2;
    nodes2.reserve(active.size());
    kept2.reserve(active.size());
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = 0; b < active.size(); ++b)
        z2(a, b) = intermediates(active[a], active[b]);
      f2.row(a) = final_use.row(active[a]);
      nodes2.push_back(nodes[active[a]]);
      kept2.push_back(kept[active[a]]);
    }
    intermediates = std::move(z2);
    final_use = std::move(f2);
    nodes = std::move(nodes2);
    kept = std::move(kept2);
    if (nodes.empty()) break;
  }
  std::sort(out.stats.dropped_flat.begin(), out.stats.dropped_flat.end());

  out.intermediates = std::move(intermediates);
  out.final_use = std::move(final_use);
  out.nodes = std::move(nodes);
  out.kept_rows = std::move(kept);
  return out;
}

Economy Economy::from_components(Labels labels, Eigen::MatrixXd intermediates,
                                 Eigen::MatrixXd final_use, int year) {
  const int n = labels.grid_size();
  check_shapes(labels, intermediates, final_use, n);
  require_nonnegative(intermediates, "intermediate matrix");
  require_nonnegative(final_use, "final-use matrix");

  Economy e;
  e.labels_ = std::move(labels);
  e.nodes_ = grid_nodes(e.labels_.country_count(), e.labels_.sector_count());
  e.intermediates_ = std::move(intermediates);
  e.final_use_ = std::move(final_use);
  e.final_demand_ = e.final_use_.rowwise().sum();
  e.gross_output_ = e.intermediates_.rowwise().sum() + e.final_demand_;
  e.value_added_ =
      e.gross_output_ - e.intermediates_.colwise().sum().transpose();
  e.year_ = year;
  for (int i = 0; i < n; ++i) {
    if (e.gross_output_[i] <= 0.0)
      throw DomainError("node " + e.node_label(i) +
                        " has nonpositive gross output; drop inactive nodes "
                        "with sanitize_components");
  }
  return e;
}

Economy Economy::from_sanitized(Labels labels, SanitizedComponents parts,
                                int year) {
  Economy e;
  e.labels_ = std::move(labels);
  e.nodes_ = std::move(parts.nodes);
  e.intermediates_ = std::move(parts.intermediates);
  e.final_use_ = std::move(parts.final_use);
  e.final_demand_ = e.final_use_.rowwise().sum();
  e.gross_output_ = e.intermediates_.rowwise().sum() + e.final_demand_;
  e.value_added_ =
      e.gross_output_ - e.intermediates_.colwise().sum().transpose();
  e.year_ = year;
  e.sanitize_ = std::move(parts.stats);
  if (e.nodes_.empty()) throw DomainError("no active nodes after sanitizing");
  for (int i = 0; i < e.node_count(); ++i) {
    if (e.gross_output_[i] <= 0.0)
      throw DomainError("node " + e.node_label(i) +
                        " inactive after sanitizing");
  }
  return e;
}

Economy Economy::from_observed(Labels labels, Eigen::MatrixXd intermediates,
                               Eigen::MatrixXd final_use, Eigen::VectorXd x,
                               Eigen::VectorXd w, int year) {
  const int n = labels.grid_size();
  check_shapes(labels, intermediates, final_use, n);
  SanitizedComponents parts;
  parts.intermediates = std::move(intermediates);
  parts.final_use = std::move(final_use);
  parts.nodes = grid_nodes(labels.country_count(), labels.sector_count());
  return from_observed(std::move(labels), std::move(parts), std::move(x),
                       std::move(w), year);
}

Economy Economy::from_observed(Labels labels, SanitizedComponents parts,
                               Eigen::VectorXd x, Eigen::VectorXd w,
                               int year) {
  const int n = static_cast<int>(parts.nodes.size());
  if (parts.intermediates.rows() != n || parts.intermediates.cols() != n ||
      parts.final_use.rows() != n)
    throw DimensionError("sanitized component shapes do not match node set");
  if (x.size() != n || w.size() != n)
    throw DimensionError("observed x/w length does not match the node set");
  require_nonnegative(parts.intermediates, "intermediate matrix");
  require_nonnegative(parts.final_use, "final-use matrix");

  Economy e;
  e.labels_ = std::move(labels);
  e.nodes_ = std::move(parts.nodes);
  e.intermediates_ = std::move(parts.intermediates);
  e.final_use_ = std::move(parts.final_use);
  e.final_demand_ = e.final_use_.rowwise().sum();
  e.gross_output_ = std::move(x);
  e.value_added_ = std::move(w);
  e.year_ = year;
  e.derived_ = false;
  e.sanitize_ = std::move(parts.stats);
  for (int i = 0; i < n; ++i) {
    if (e.gross_output_[i] <= 0.0)
      throw DomainError("observed gross output of node " + e.node_label(i) +
                        " is nonpositive");
  }
  return e;
}

std::vector<int> Economy::country_map() const {
  std::vector<int> map(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) map[i] = nodes_[i].country;
  return map;
}

std::string Economy::node_label(int node) const {
  return labels_.countries[nodes_[node].country] + ":" +
         labels_.sectors[nodes_[node].sector];
}

std::optional<int> Economy::node_at(int country, int sector) const {
  if (full_grid())
    return country * labels_.sector_count() + sector;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].country == country && nodes_[i].sector == sector)
      return static_cast<int>(i);
  return std::nullopt;
}

bool Economy::full_grid() const {
  return static_cast<int>(nodes_.size()) == labels_.grid_size();
}

std::vector<int> ValidationReport::flagged_nodes(double tol) const {
  std::vector<int> flagged;
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    if (residuals[i].output_rel > tol || residuals[i].value_added_rel > tol)
      flagged.push_back(static_cast<int>(i));
  }
  return flagged;
}

ValidationReport validate(const Economy& economy, double tau_acct) {
  const int n = economy.node_count();
  const Eigen::VectorXd derived_x = economy.intermediates().rowwise().sum() +
                                    economy.final_demand();
  const Eigen::VectorXd derived_w =
      economy.gross_output() -
      economy.intermediates().colwise().sum().transpose();

  ValidationReport report;
  report.tolerance = tau_acct;
  report.sanitize = economy.sanitize_stats();
  report.residuals.resize(n);
  for (int i = 0; i < n; ++i) {
    NodeResidual& r = report.residuals[i];
    const double scale = std::max(std::abs(economy.gross_output()[i]), 1e-300);
    r.output_abs = std::abs(economy.gross_output()[i] - derived_x[i]);
    r.output_rel = r.output_abs / scale;
    r.value_added_abs = std::abs(economy.value_added()[i] - derived_w[i]);
    r.value_added_rel = r.value_added_abs / scale;
    report.max_output_rel = std::max(report.max_output_rel, r.output_rel);
    report.max_value_added_rel =
        std::max(report.max_value_added_rel, r.value_added_rel);
  }
  report.passed = report.max_output_rel <= tau_acct &&
                  report.max_value_added_rel <= tau_acct;
  return report;
}

}  // namespace gvc
