#pragma once

// Discrete osculating circles, curvature and torsion of space polygons.
//
// For the window (g[i-1], g[i], g[i+1], g[i+2]) the four inserting points
//   A = f(g[i+2], g[i-1], g[i], g[i+1])   B = f(g[i-1], g[i], g[i+1], g[i+2])
//   C = f(g[i], g[i+1], g[i+2], g[i-1])   D = f(g[i+1], g[i+2], g[i-1], g[i])
// are concyclic. The circle through them is the osculating circle at g[i];
// curvature is its inverse radius and torsion is
//   tau = -9 <Im cr(g[i-1], g[i], g[i+1], g[i+2]), N> / (2 kappa |g[i] - g[i+1]|^2)
// with N the unit radial vector of the circle at the anchor point (B by default).

#include <array>
#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "fibrilgeom/detail/parallel.hpp"
#include "fibrilgeom/error.hpp"
#include "fibrilgeom/pdb.hpp"
#include "fibrilgeom/quaternion.hpp"
#include "fibrilgeom/vec.hpp"

namespace fibrilgeom {

/// Four consecutive curve vertices g[i-1], g[i], g[i+1], g[i+2].
using Window = std::array<Vec3, 4>;

struct InsertingPoints {
  Vec3 a, b, c, d;
};

struct OsculatingCircle {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
  Vec3 plane_normal = Vec3::UnitZ();
  std::array<Vec3, 4> points{};  // A, B, C, D
};

/// Point of the osculating circle the radial normal is measured from.
enum class NormalAnchor { B, A };

enum class DegeneracyReason { None, CollinearWindow, BranchFailure, DegenerateQuadruple, SingularSystem };

constexpr std::string_view to_string(DegeneracyReason r) {
  switch (r) {
    case DegeneracyReason::None: return "";
    case DegeneracyReason::CollinearWindow: return "collinear_window";
    case DegeneracyReason::BranchFailure: return "branch_failure";
    case DegeneracyReason::DegenerateQuadruple: return "degenerate_quadruple";
    case DegeneracyReason::SingularSystem: return "singular_system";
  }
  return "unknown";
}

struct VertexGeometry {
  std::size_t vertex_index = 0;
  VertexLabel label;
  std::optional<double> curvature;  // 1/Angstrom
  std::optional<double> torsion;    // dimensionless
  DegeneracyReason reason = DegeneracyReason::None;

  AtomClass atom_class() const { return label.atom_class; }
  bool degenerate() const { return reason != DegeneracyReason::None; }
};

/// Everything computed for one window; exposed for diagnostics and tests.
struct WindowGeometry {
  InsertingPoints inserting;
  OsculatingCircle circle;
  Vec3 normal = Vec3::Zero();
  Quaternion cross_ratio;
  double curvature = 0.0;
  double torsion = 0.0;
};

namespace detail {

inline double window_extent(const Window& w) { return extent(w[0], w[1], w[2], w[3]); }

inline bool collinear(const Window& w) {
  double scale = window_extent(w);
  if (!(scale > 0.0)) return true;
  std::size_t far = 1;
  for (std::size_t k = 2; k < 4; ++k)
    if ((w[k] - w[0]).norm() > (w[far] - w[0]).norm()) far = k;
  Vec3 dir = (w[far] - w[0]).normalized();
  for (std::size_t k = 1; k < 4; ++k)
    if ((w[k] - w[0]).cross(dir).norm() > 1e-12 * scale) return false;
  return true;
}

// Propagates the quaternion-layer error codes unchanged.
inline InsertingPoints inserting_points_raw(const Window& w) {
  return {diagonal_point(w[3], w[0], w[1], w[2]), diagonal_point(w[0], w[1], w[2], w[3]),
          diagonal_point(w[1], w[2], w[3], w[0]), diagonal_point(w[2], w[3], w[0], w[1])};
}

}  // namespace detail

inline InsertingPoints inserting_points(const Window& w) {
  if (detail::collinear(w)) throw Error(ErrorCode::DegenerateWindow, "collinear window");
  try {
    return detail::inserting_points_raw(w);
  } catch (const Error& e) {
    throw Error(ErrorCode::DegenerateWindow, e.what());
  }
}

/// Circle through A, B, C from the direct 3x3 solve
///   (X - (A+B)/2).(B-A) = 0,  (X - (A+C)/2).(C-A) = 0,  ((B-A) x (C-A)).(X-A) = 0.
inline OsculatingCircle osculating_circle(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  Vec3 ab = b - a;
  Vec3 ac = c - a;
  Vec3 n = ab.cross(ac);
  Mat3 m;
  m.row(0) = ab.transpose();
  m.row(1) = ac.transpose();
  m.row(2) = n.transpose();
  double scale = std::max({ab.norm(), ac.norm(), (c - b).norm()});
  double det = m.determinant();
  // det = |n|^2, so compare against the fourth power of the extent.
  if (!(std::abs(det) > 1e-12 * std::pow(scale, 4)))
    throw Error(ErrorCode::SingularSystem, "circumcircle system is singular (points nearly collinear)");
  Vec3 rhs(ab.dot(0.5 * (a + b)), ac.dot(0.5 * (a + c)), n.dot(a));
  OsculatingCircle circle;
  circle.center = m.partialPivLu().solve(rhs);
  circle.radius = (a - circle.center).norm();
  circle.plane_normal = n.normalized();
  circle.points = {a, b, c, d};
  return circle;
}

inline OsculatingCircle osculating_circle(const InsertingPoints& p) { return osculating_circle(p.a, p.b, p.c, p.d); }

namespace detail {

inline WindowGeometry complete_window(const Window& w, const InsertingPoints& p, const OsculatingCircle& circle,
                                      NormalAnchor anchor) {
  WindowGeometry g;
  g.inserting = p;
  g.circle = circle;
  const Vec3& anchor_point = anchor == NormalAnchor::B ? p.b : p.a;
  g.normal = (g.circle.center - anchor_point).normalized();
  g.cross_ratio = cross_ratio(w[0], w[1], w[2], w[3]);
  g.curvature = 1.0 / g.circle.radius;
  g.torsion = -9.0 * g.cross_ratio.im.dot(g.normal) / (2.0 * g.curvature * (w[1] - w[2]).squaredNorm());
  return g;
}

}  // namespace detail

/// Full computation for one window; throws DegenerateWindow / SingularSystem.
inline WindowGeometry analyze_window(const Window& w, NormalAnchor anchor = NormalAnchor::B) {
  InsertingPoints p = inserting_points(w);
  return detail::complete_window(w, p, osculating_circle(p), anchor);
}

/// Curvature and torsion at g[i]; degeneracy is reported in-band.
inline VertexGeometry curvature_torsion_at(const Window& w, NormalAnchor anchor = NormalAnchor::B) {
  VertexGeometry v;
  if (detail::collinear(w)) {
    v.reason = DegeneracyReason::CollinearWindow;
    return v;
  }
  InsertingPoints p;
  try {
    p = detail::inserting_points_raw(w);
  } catch (const Error& e) {
    v.reason = e.code() == ErrorCode::BranchFailure ? DegeneracyReason::BranchFailure
                                                    : DegeneracyReason::DegenerateQuadruple;
    return v;
  }
  OsculatingCircle circle;
  try {
    circle = osculating_circle(p);
  } catch (const Error&) {
    v.reason = DegeneracyReason::SingularSystem;
    return v;
  }
  auto g = detail::complete_window(w, p, circle, anchor);
  v.curvature = g.curvature;
  v.torsion = g.torsion;
  return v;
}

// ---------------------------------------------------------------------------
// Profiles

struct ClassSummary {
  std::size_t count = 0;
  std::optional<double> mean_abs_curvature;
  std::optional<double> mean_abs_torsion;
  std::optional<double> var_abs_curvature;  // unbiased, n - 1
  std::optional<double> var_abs_torsion;
};

struct ProfileSummary {
  ClassSummary overall;
  ClassSummary n;
  ClassSummary ca;
  ClassSummary c;
  std::size_t excluded = 0;  // degenerate windows left out of every statistic

  const ClassSummary& for_class(AtomClass cls) const {
    return cls == AtomClass::N ? n : cls == AtomClass::CA ? ca : c;
  }
};

struct GeometryProfile {
  std::vector<VertexGeometry> entries;
  ProfileSummary summary;
};

namespace detail {

inline ClassSummary summarize_values(const std::vector<double>& kappa, const std::vector<double>& tau) {
  ClassSummary s;
  s.count = kappa.size();
  auto mean = [](const std::vector<double>& x) {
    double sum = 0.0;
    for (double v : x) sum += v;
    return sum / static_cast<double>(x.size());
  };
  auto variance = [](const std::vector<double>& x, double m) {
    double sum = 0.0;
    for (double v : x) sum += (v - m) * (v - m);
    return sum / static_cast<double>(x.size() - 1);
  };
  if (s.count >= 1) {
    s.mean_abs_curvature = mean(kappa);
    s.mean_abs_torsion = mean(tau);
  }
  if (s.count >= 2) {
    s.var_abs_curvature = variance(kappa, *s.mean_abs_curvature);
    s.var_abs_torsion = variance(tau, *s.mean_abs_torsion);
  }
  return s;
}

}  // namespace detail

/// Mean and unbiased variance of |kappa|, |tau| per atom class and pooled.
inline ProfileSummary summarize(const std::vector<VertexGeometry>& entries) {
  std::array<std::vector<double>, 3> kappa, tau;
  std::vector<double> all_kappa, all_tau;
  ProfileSummary out;
  for (const auto& e : entries) {
    if (e.degenerate()) {
      ++out.excluded;
      continue;
    }
    auto k = static_cast<std::size_t>(e.atom_class());
    kappa[k].push_back(std::abs(*e.curvature));
    tau[k].push_back(std::abs(*e.torsion));
    all_kappa.push_back(std::abs(*e.curvature));
    all_tau.push_back(std::abs(*e.torsion));
  }
  out.overall = detail::summarize_values(all_kappa, all_tau);
  out.n = detail::summarize_values(kappa[0], tau[0]);
  out.ca = detail::summarize_values(kappa[1], tau[1]);
  out.c = detail::summarize_values(kappa[2], tau[2]);
  return out;
}

/// Evaluates every interior window of an arbitrary curve: vertices 1 .. size-3.
inline GeometryProfile profile_curve(const DiscreteCurve& curve, NormalAnchor anchor = NormalAnchor::B) {
  GeometryProfile profile;
  if (curve.size() < 4) return profile;
  std::size_t windows = curve.size() - 3;
  profile.entries.resize(windows);
  detail::parallel_for(windows, [&](std::size_t k) {
    std::size_t i = k + 1;
    Window w{curve[i - 1], curve[i], curve[i + 1], curve[i + 2]};
    VertexGeometry v = curvature_torsion_at(w, anchor);
    v.vertex_index = i;
    v.label = curve.labels()[i];
    profile.entries[k] = v;
  });
  profile.summary = summarize(profile.entries);
  return profile;
}

/// Backbone profile of an N, CA, C curve. Windows assign values to
/// N_i from (C_{i-1}, N_i, CA_i, C_i), to CA_i from (N_i, CA_i, C_i, N_{i+1})
/// and to C_i from (CA_i, C_i, N_{i+1}, CA_{i+1}).
inline GeometryProfile profile_backbone(const DiscreteCurve& curve, NormalAnchor anchor = NormalAnchor::B) {
  static constexpr AtomClass kPattern[] = {AtomClass::N, AtomClass::CA, AtomClass::C};
  if (curve.size() % 3 != 0)
    throw Error(ErrorCode::LabelPatternViolation, "backbone curve length is not a multiple of 3");
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const auto& l = curve.labels()[i];
    if (l.atom_class != kPattern[i % 3] || l.residue_seq != curve.labels()[i - i % 3].residue_seq)
      throw Error(ErrorCode::LabelPatternViolation,
                  "vertex " + std::to_string(i) + " breaks the N, CA, C residue pattern");
  }
  return profile_curve(curve, anchor);
}

}  // namespace fibrilgeom
