#pragma once

// Layer-to-layer backbone hydrogen-bond distances in stacked fibril chains and
// the torsion-versus-distance regression.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fibrilgeom/curvature_torsion.hpp"
#include "fibrilgeom/error.hpp"
#include "fibrilgeom/pdb.hpp"

namespace fibrilgeom {

/// Distances from the carbonyl O of residue i in layer k to the amide N of
/// residue i+1 in the neighbouring layers k-1 (minus) and k+1 (plus).
struct LayerPairDistance {
  std::size_t layer_index = 0;
  char chain_id = ' ';
  int residue_seq = 0;
  double d_minus = 0.0;
  double d_plus = 0.0;
  double dtilde = 0.0;  // |d_minus^2 - d_plus^2|, Angstrom^2
};

struct LayerDistances {
  std::vector<LayerPairDistance> records;
  std::size_t skipped_boundary_layers = 0;
  std::size_t skipped_residues = 0;  // O_i or a neighbouring N_{i+1} missing
};

inline LayerDistances squared_distance_differences(const Structure& s, const std::vector<char>& layer_order) {
  if (layer_order.size() < 3)
    throw Error(ErrorCode::LayerListTooShort,
                "need at least 3 stacked chains, got " + std::to_string(layer_order.size()));
  std::vector<const Chain*> layers;
  for (char id : layer_order) layers.push_back(&s.chain(id));

  LayerDistances out;
  out.skipped_boundary_layers = 2;
  for (std::size_t k = 1; k + 1 < layers.size(); ++k) {
    const Chain& below = *layers[k - 1];
    const Chain& here = *layers[k];
    const Chain& above = *layers[k + 1];
    for (const Residue& r : here.residues) {
      const Atom* o = r.find("O");
      const Residue* rm = below.find(r.seq + 1);
      const Residue* rp = above.find(r.seq + 1);
      const Atom* nm = rm ? rm->find("N") : nullptr;
      const Atom* np = rp ? rp->find("N") : nullptr;
      if (r.insertion_code || !o || !nm || !np) {
        ++out.skipped_residues;
        continue;
      }
      LayerPairDistance d;
      d.layer_index = k;
      d.chain_id = here.id;
      d.residue_seq = r.seq;
      d.d_minus = (o->position - nm->position).norm();
      d.d_plus = (o->position - np->position).norm();
      d.dtilde = std::abs(d.d_minus * d.d_minus - d.d_plus * d.d_plus);
      out.records.push_back(d);
    }
  }
  return out;
}

/// Matched (|tau at C_i|, dtilde_i) samples for the regression.
struct TorsionDistanceSamples {
  std::vector<double> abs_torsion;
  std::vector<double> dtilde;
  std::vector<const LayerPairDistance*> records;
  std::size_t dropped = 0;  // no usable carbonyl-carbon torsion
};

/// Joins distance records with carbonyl-carbon torsions by (chain, residue).
inline TorsionDistanceSamples join_carbonyl_torsions(const LayerDistances& distances,
                                                     std::span<const VertexGeometry> entries) {
  std::map<std::pair<char, int>, double> carbonyl;
  for (const auto& e : entries)
    if (!e.degenerate() && e.atom_class() == AtomClass::C && !e.label.insertion_code)
      carbonyl[{e.label.chain_id, e.label.residue_seq}] = std::abs(*e.torsion);
  TorsionDistanceSamples out;
  for (const auto& rec : distances.records) {
    auto it = carbonyl.find({rec.chain_id, rec.residue_seq});
    if (it == carbonyl.end()) {
      ++out.dropped;
      continue;
    }
    out.abs_torsion.push_back(it->second);
    out.dtilde.push_back(rec.dtilde);
    out.records.push_back(&rec);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Student t distribution

/// Regularized incomplete beta I_x(a, b), modified Lentz continued fraction.
inline double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || x < 0.0 || x > 1.0)
    throw Error(ErrorCode::InvalidArgument, "incomplete beta outside its domain");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  // The fraction converges quickly for x < (a+1)/(a+b+2); use the symmetry otherwise.
  if (x > (a + 1.0) / (a + b + 2.0)) return 1.0 - incomplete_beta(b, a, 1.0 - x);

  double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 1000; ++m) {
    double m2 = 2.0 * m;
    double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + num * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + num * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < eps) break;
  }
  return std::exp(log_front) * h / a;
}

/// P(T <= t) for Student's t with dof degrees of freedom.
inline double student_t_cdf(double t, double dof) {
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  double tail = 0.5 * incomplete_beta(0.5 * dof, 0.5, dof / (dof + t * t));
  return t > 0.0 ? 1.0 - tail : tail;
}

/// Two-sided tail probability P(|T| >= |t|), computed without cancellation.
inline double student_t_two_sided(double t, double dof) {
  if (std::isinf(t)) return 0.0;
  return incomplete_beta(0.5 * dof, 0.5, dof / (dof + t * t));
}

// ---------------------------------------------------------------------------
// Regression

struct RegressionResult {
  double slope = 0.0;
  double intercept = 0.0;
  double pearson_r = 0.0;
  double t_statistic = 0.0;
  double p_value = 1.0;             // two-sided Wald test of zero slope
  double p_value_negative = 1.0;    // one-sided, alternative: negative correlation
  double se_slope = 0.0;
  double se_intercept = 0.0;
  std::size_t n = 0;
};

/// Ordinary least squares of y on x with Pearson r and a t-test on n - 2 dof.
inline RegressionResult linear_regression(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::LengthMismatch, std::to_string(x.size()) + " vs " + std::to_string(y.size()) + " samples");
  if (x.size() < 3) throw Error(ErrorCode::InsufficientData, "regression needs at least 3 samples");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::ZeroVariance, "all x values are equal");
  if (!(syy > 0.0)) throw Error(ErrorCode::ZeroVariance, "all y values are equal");

  RegressionResult r;
  r.n = x.size();
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  r.pearson_r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);

  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double e = y[i] - (r.intercept + r.slope * x[i]);
    sse += e * e;
  }
  double sigma2 = sse / (n - 2.0);
  r.se_slope = std::sqrt(sigma2 / sxx);
  r.se_intercept = std::sqrt(sigma2 * (1.0 / n + mx * mx / sxx));

  double dof = n - 2.0;
  double one_minus_r2 = 1.0 - r.pearson_r * r.pearson_r;
  r.t_statistic = one_minus_r2 > 0.0 ? r.pearson_r * std::sqrt(dof / one_minus_r2)
                                     : std::copysign(std::numeric_limits<double>::infinity(), r.pearson_r);
  r.p_value = student_t_two_sided(r.t_statistic, dof);
  r.p_value_negative = student_t_cdf(r.t_statistic, dof);
  return r;
}

/// Regresses |tau| at carbonyl carbons on the squared distance differences.
inline RegressionResult regress_torsion_vs_distance(std::span<const double> abs_torsions,
                                                    std::span<const double> dtildes) {
  return linear_regression(dtildes, abs_torsions);
}

}  // namespace fibrilgeom
