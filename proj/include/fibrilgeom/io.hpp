#pragma once

// CSV and JSON artifacts written by the command-line tool.

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "json.hpp"

#include "fibrilgeom/curvature_torsion.hpp"
#include "fibrilgeom/curve_metrics.hpp"
#include "fibrilgeom/error.hpp"
#include "fibrilgeom/hbond_stats.hpp"
#include "fibrilgeom/pdb.hpp"
#include "fibrilgeom/persistence.hpp"

namespace fibrilgeom::io {

using Json = nlohmann::ordered_json;

inline std::string vertex_label(const VertexLabel& l, bool with_atom) {
  std::string s = fmt::format("{}:{}", l.chain_id, l.residue_seq);
  if (l.insertion_code) s += *l.insertion_code;
  if (with_atom) s += fmt::format(":{}", to_string(l.atom_class));
  return s;
}

inline std::vector<std::string> curve_labels(const DiscreteCurve& curve, std::size_t n) {
  bool with_atom = std::any_of(curve.labels().begin(), curve.labels().end(),
                               [](const VertexLabel& l) { return l.atom_class != AtomClass::CA; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(vertex_label(curve.labels()[i], with_atom));
  return out;
}

inline std::string format_number(double v) { return fmt::format("{}", v); }  // shortest round-trip

inline Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

// --- hop distances ---------------------------------------------------------

inline std::string hop_matrix_csv(const HopDistanceMatrix& m, const std::vector<std::string>& labels) {
  std::string out = "residue";
  for (const auto& l : labels) out += "," + l;
  out += '\n';
  for (std::size_t i = 0; i < m.n; ++i) {
    out += labels[i];
    for (std::size_t j = 0; j < m.n; ++j) out += fmt::format(",{:.3f}", m(i, j));
    out += '\n';
  }
  return out;
}

inline std::string binary_map_csv(const BinaryMap& m, const std::vector<std::string>& labels) {
  std::string out = "residue";
  for (const auto& l : labels) out += "," + l;
  out += '\n';
  for (std::size_t i = 0; i < m.n; ++i) {
    out += labels[i];
    for (std::size_t j = 0; j < m.n; ++j) out += m(i, j) ? ",1" : ",0";
    out += '\n';
  }
  return out;
}

inline Json hop_matrix_json(const HopDistanceMatrix& m, const std::vector<std::string>& labels) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.n; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.n; ++j) row.push_back(std::round(m(i, j) * 1000.0) / 1000.0);
    rows.push_back(std::move(row));
  }
  return Json{{"labels", labels}, {"matrix", std::move(rows)}};
}

inline Json binary_map_json(const BinaryMap& m, const std::vector<std::string>& labels) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.n; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.n; ++j) row.push_back(m(i, j) ? 1 : 0);
    rows.push_back(std::move(row));
  }
  return Json{{"labels", labels}, {"cutoff", m.cutoff}, {"matrix", std::move(rows)}};
}

// --- curvature / torsion ---------------------------------------------------

inline std::string geometry_csv(const std::vector<VertexGeometry>& entries) {
  std::string out = "chain,residue_seq,atom_class,curvature,torsion,degenerate_reason\n";
  for (const auto& e : entries) {
    std::string seq = std::to_string(e.label.residue_seq);
    if (e.label.insertion_code) seq += *e.label.insertion_code;
    out += fmt::format("{},{},{},{},{},{}\n", e.label.chain_id, seq, to_string(e.atom_class()),
                       e.curvature ? format_number(*e.curvature) : "", e.torsion ? format_number(*e.torsion) : "",
                       to_string(e.reason));
  }
  return out;
}

/// The sixteen statistics: mean and unbiased variance of |kappa| and |tau|,
/// pooled and per backbone atom class.
inline Json summary_json(const ProfileSummary& s) {
  auto block = [&](auto member) {
    return Json{{"all", optional_number(s.overall.*member)},
                {"N", optional_number(s.n.*member)},
                {"CA", optional_number(s.ca.*member)},
                {"C", optional_number(s.c.*member)}};
  };
  return Json{{"mean_abs_curvature", block(&ClassSummary::mean_abs_curvature)},
              {"mean_abs_torsion", block(&ClassSummary::mean_abs_torsion)},
              {"var_abs_curvature", block(&ClassSummary::var_abs_curvature)},
              {"var_abs_torsion", block(&ClassSummary::var_abs_torsion)},
              {"counts", Json{{"all", s.overall.count}, {"N", s.n.count}, {"CA", s.ca.count}, {"C", s.c.count}}},
              {"excluded_degenerate", s.excluded}};
}

// --- hydrogen bonds ----------------------------------------------------------

inline std::string hbond_csv(const TorsionDistanceSamples& samples) {
  std::string out = "layer,chain,residue,d_minus,d_plus,dtilde,abs_torsion_C\n";
  for (std::size_t k = 0; k < samples.records.size(); ++k) {
    const auto& r = *samples.records[k];
    out += fmt::format("{},{},{},{},{},{},{}\n", r.layer_index, r.chain_id, r.residue_seq, format_number(r.d_minus),
                       format_number(r.d_plus), format_number(r.dtilde), format_number(samples.abs_torsion[k]));
  }
  return out;
}

inline Json regression_json(const RegressionResult& r, bool one_sided_headline) {
  return Json{{"slope", r.slope},
              {"intercept", r.intercept},
              {"pearson", r.pearson_r},
              {"p_value", one_sided_headline ? r.p_value_negative : r.p_value},
              {"headline", one_sided_headline ? "one-sided-negative" : "two-sided"},
              {"p_value_two_sided", r.p_value},
              {"p_value_one_sided_negative", r.p_value_negative},
              {"t_statistic", std::isfinite(r.t_statistic) ? Json(r.t_statistic) : Json(nullptr)},
              {"se_slope", r.se_slope},
              {"se_intercept", r.se_intercept},
              {"n", r.n}};
}

// --- persistence diagrams --------------------------------------------------

inline std::string diagram_csv(const PersistenceDiagram& d) {
  std::string out = "dimension,birth,death\n";
  for (const auto& p : d.points)
    out += fmt::format("{},{},{}\n", p.dimension, format_number(p.birth), p.essential() ? "inf" : format_number(p.death));
  return out;
}

inline PersistenceDiagram parse_diagram_csv(std::istream& in) {
  PersistenceDiagram d;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (line_no == 1 && line.starts_with("dimension"))) continue;
    std::stringstream ss(line);
    std::string dim, birth, death;
    if (!std::getline(ss, dim, ',') || !std::getline(ss, birth, ',') || !std::getline(ss, death))
      throw Error(ErrorCode::MalformedRecord, "diagram line " + std::to_string(line_no) + ": expected 3 columns");
    try {
      PersistencePoint p;
      p.dimension = std::stoi(dim);
      p.birth = std::stod(birth);
      p.death = death == "inf" ? kInfinity : std::stod(death);
      if (p.death < p.birth) throw std::invalid_argument("death before birth");
      d.points.push_back(p);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::MalformedRecord, "diagram line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  std::sort(d.points.begin(), d.points.end());
  return d;
}

inline Json distance_json(const ComparisonResult& r) {
  auto block = [](const DimensionDistances& d) {
    return Json{{"bottleneck", d.bottleneck.value}, {"wasserstein", d.wasserstein.value}, {"q", d.wasserstein.q}};
  };
  return Json{{"dim0", block(r.dim0)}, {"dim1", block(r.dim1)}};
}

// --- files -----------------------------------------------------------------

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

inline void write_json(const std::string& path, const Json& j) { write_file(path, j.dump(2) + "\n"); }

}  // namespace fibrilgeom::io
