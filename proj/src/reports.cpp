#include "gvc/reports.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gvc/errors.hpp"

namespace gvc::reports {

using nlohmann::json;

double snap(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return std::strtod(buffer, nullptr);
}

std::string format_value(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

namespace {

json vector_json(const Eigen::VectorXd& v) {
  json array = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) array.push_back(snap(v[i]));
  return array;
}

json spectral_summary_json(const SpectralSummary& s) {
  return json{{"lambda", snap(s.lambda)},
              {"iterations", s.iterations},
              {"residual", snap(s.residual)},
              {"rho_left", vector_json(s.rho_left)},
              {"rho_right", vector_json(s.rho_right)}};
}

json indicators_payload(const GlobalIndicators& ind) {
  return json{
      {"node_count", ind.node_count},
      {"domestic_value_added", snap(ind.domestic_value_added)},
      {"cross_border_value_added", snap(ind.cross_border_value_added)},
      {"domestic_final_use", snap(ind.domestic_final_use)},
      {"cross_border_final_use", snap(ind.cross_border_final_use)},
      {"fractions",
       json{{"domestic_value_added", snap(ind.domestic_value_added_fraction())},
            {"cross_border_value_added",
             snap(ind.cross_border_value_added_fraction())},
            {"domestic_final_use", snap(ind.domestic_final_use_fraction())},
            {"cross_border_final_use",
             snap(ind.cross_border_final_use_fraction())}}}};
}

}  // namespace

std::string validation_json(const Economy& economy,
                            const ValidationReport& report) {
  json residuals = json::array();
  for (std::size_t i = 0; i < report.residuals.size(); ++i) {
    const NodeResidual& r = report.residuals[i];
    residuals.push_back(json{{"node", economy.node_label(static_cast<int>(i))},
                             {"output_abs", snap(r.output_abs)},
                             {"output_rel", snap(r.output_rel)},
                             {"value_added_abs", snap(r.value_added_abs)},
                             {"value_added_rel", snap(r.value_added_rel)}});
  }
  const json doc{{"year", economy.year()},
                 {"tolerance", snap(report.tolerance)},
                 {"passed", report.passed},
                 {"max_output_rel", snap(report.max_output_rel)},
                 {"max_value_added_rel", snap(report.max_value_added_rel)},
                 {"clamped_cells", report.sanitize.clamped_cells},
                 {"clamped_mass", snap(report.sanitize.clamped_mass)},
                 {"dropped_nodes", report.sanitize.dropped_flat},
                 {"residuals", residuals}};
  return doc.dump(2) + "\n";
}

std::string node_stats_csv(const Economy& economy, const YearAnalysis& a) {
  std::ostringstream out;
  out << "node,country,sector,upstreamness,downstreamness,risk_output,"
         "risk_input,self_visits_output,self_visits_input,"
         "product_distribution\n";
  for (int i = 0; i < economy.node_count(); ++i) {
    out << economy.node_label(i) << ','
        << economy.labels().countries[economy.country_of(i)] << ','
        << economy.labels().sectors[economy.sector_of(i)] << ','
        << format_value(a.upstream[i]) << ',' << format_value(a.downstream[i])
        << ',' << format_value(a.risk_output[i]) << ','
        << format_value(a.risk_input[i]) << ','
        << format_value(a.self_visits_output[i]) << ','
        << format_value(a.self_visits_input[i]) << ','
        << format_value(a.product_dist[i]) << '\n';
  }
  return out.str();
}

std::string node_stats_json(const Economy& economy, const YearAnalysis& a) {
  json nodes = json::array();
  for (int i = 0; i < economy.node_count(); ++i) {
    json entry{{"node", economy.node_label(i)},
               {"country", economy.labels().countries[economy.country_of(i)]},
               {"sector", economy.labels().sectors[economy.sector_of(i)]},
               {"upstreamness", snap(a.upstream[i])},
               {"downstreamness", snap(a.downstream[i])},
               {"risk_output", snap(a.risk_output[i])},
               {"risk_input", snap(a.risk_input[i])},
               {"self_visits_output", snap(a.self_visits_output[i])},
               {"self_visits_input", snap(a.self_visits_input[i])},
               {"product_distribution", snap(a.product_dist[i])}};
    entry["final_use_by_country"] =
        vector_json(a.final_use_dist.row(i).transpose());
    entry["value_added_by_country"] =
        vector_json(a.value_added_dist.row(i).transpose());
    nodes.push_back(std::move(entry));
  }
  const json doc{{"year", a.year},
                 {"countries", economy.labels().countries},
                 {"nodes", nodes}};
  return doc.dump(2) + "\n";
}

std::string spectral_json(const YearAnalysis& a) {
  const json doc{{"year", a.year},
                 {"node_count", a.node_count},
                 {"input", spectral_summary_json(a.input_spectral)},
                 {"output", spectral_summary_json(a.output_spectral)},
                 {"product_distribution", vector_json(a.product_dist)}};
  return doc.dump(2) + "\n";
}

std::string indicators_json(const YearAnalysis& a) {
  json doc = indicators_payload(a.indicators);
  doc["year"] = a.year;
  return doc.dump(2) + "\n";
}

std::string country_distribution_csv(const Economy& economy,
                                     const Eigen::MatrixXd& dist) {
  std::ostringstream out;
  out << "node";
  for (const auto& code : economy.labels().countries) out << ',' << code;
  out << '\n';
  for (int i = 0; i < economy.node_count(); ++i) {
    out << economy.node_label(i);
    for (Eigen::Index c = 0; c < dist.cols(); ++c)
      out << ',' << format_value(dist(i, c));
    out << '\n';
  }
  return out.str();
}

std::string industry_matrix_csv(const Labels& labels,
                                const Eigen::MatrixXd& slice) {
  std::ostringstream out;
  out << "country";
  for (const auto& code : labels.countries) out << ',' << code;
  out << '\n';
  for (Eigen::Index r = 0; r < slice.rows(); ++r) {
    out << labels.countries[r];
    for (Eigen::Index c = 0; c < slice.cols(); ++c)
      out << ',' << format_value(slice(r, c));
    out << '\n';
  }
  return out.str();
}

std::string histogram_csv(const Histogram& hist) {
  std::ostringstream out;
  out << "bin_lo,bin_hi,count\n";
  const int bins = static_cast<int>(hist.counts.size());
  const double width = (hist.hi - hist.lo) / bins;
  for (int b = 0; b < bins; ++b) {
    out << format_value(hist.lo + b * width) << ','
        << format_value(b + 1 == bins ? hist.hi : hist.lo + (b + 1) * width)
        << ',' << hist.counts[b] << '\n';
  }
  return out.str();
}

std::string kappa_sweep_csv(const std::vector<KappaSweepRow>& rows) {
  std::ostringstream out;
  out << "kappa,upstream_vs_degree,upstream_vs_eigenvector,"
         "downstream_vs_degree,downstream_vs_eigenvector,skipped\n";
  for (const KappaSweepRow& row : rows) {
    out << format_value(row.kappa) << ',';
    if (row.skipped) {
      out << ",,,,1\n";
    } else {
      out << format_value(row.upstream_vs_degree) << ','
          << format_value(row.upstream_vs_eigenvector) << ','
          << format_value(row.downstream_vs_degree) << ','
          << format_value(row.downstream_vs_eigenvector) << ",0\n";
    }
  }
  return out.str();
}

std::string panel_csv(const std::vector<PanelRow>& rows) {
  std::ostringstream out;
  out << "year,node_count,lambda,input_diag_mean,input_offdiag_mean,"
         "output_diag_mean,output_offdiag_mean,domestic_value_added,"
         "cross_border_value_added,domestic_final_use,cross_border_final_use,"
         "domestic_value_added_fraction,cross_border_value_added_fraction,"
         "domestic_final_use_fraction,cross_border_final_use_fraction\n";
  for (const PanelRow& row : rows) {
    out << row.year << ',' << row.node_count << ',' << format_value(row.lambda)
        << ',' << format_value(row.input_blocks.diag_mean) << ','
        << format_value(row.input_blocks.offdiag_mean) << ','
        << format_value(row.output_blocks.diag_mean) << ','
        << format_value(row.output_blocks.offdiag_mean) << ','
        << format_value(row.indicators.domestic_value_added) << ','
        << format_value(row.indicators.cross_border_value_added) << ','
        << format_value(row.indicators.domestic_final_use) << ','
        << format_value(row.indicators.cross_border_final_use) << ','
        << format_value(row.indicators.domestic_value_added_fraction()) << ','
        << format_value(row.indicators.cross_border_value_added_fraction())
        << ',' << format_value(row.indicators.domestic_final_use_fraction())
        << ','
        << format_value(row.indicators.cross_border_final_use_fraction())
        << '\n';
  }
  return out.str();
}

std::string panel_json(const std::vector<PanelRow>& rows) {
  json array = json::array();
  for (const PanelRow& row : rows) {
    json entry = indicators_payload(row.indicators);
    entry["year"] = row.year;
    entry["lambda"] = snap(row.lambda);
    entry["input_blocks"] = json{{"diag_mean", snap(row.input_blocks.diag_mean)},
                                 {"offdiag_mean",
                                  snap(row.input_blocks.offdiag_mean)}};
    entry["output_blocks"] =
        json{{"diag_mean", snap(row.output_blocks.diag_mean)},
             {"offdiag_mean", snap(row.output_blocks.offdiag_mean)}};
    array.push_back(std::move(entry));
  }
  return json{{"years", array}}.dump(2) + "\n";
}

std::string verification_json(const std::vector<Check>& checks) {
  json array = json::array();
  bool all = true;
  for (const Check& check : checks) {
    all = all && check.passed;
    array.push_back(json{{"name", check.name},
                         {"passed", check.passed},
                         {"measured", snap(check.measured)},
                         {"threshold", snap(check.threshold)},
                         {"detail", check.detail}});
  }
  return json{{"all_passed", all}, {"checks", array}}.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(target.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace gvc::reports
