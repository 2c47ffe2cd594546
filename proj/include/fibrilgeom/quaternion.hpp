#pragma once

// Quaternion algebra on [r, v] pairs, the quaternionic cross-ratio, the polar
// square root and the Moebius-invariant "diagonal" point built from them.

#include <algorithm>
#include <cmath>
#include <string>

#include "fibrilgeom/error.hpp"
#include "fibrilgeom/vec.hpp"

namespace fibrilgeom {

struct Quaternion {
  double re = 0.0;
  Vec3 im = Vec3::Zero();

  Quaternion() = default;
  Quaternion(double r, const Vec3& v) : re(r), im(v) {}
  explicit Quaternion(double r) : re(r) {}

  /// Embeds a point of R^3 as a pure imaginary quaternion.
  static Quaternion pure(const Vec3& v) { return {0.0, v}; }

  double norm_squared() const { return re * re + im.squaredNorm(); }
  double norm() const { return std::sqrt(norm_squared()); }
  Quaternion conj() const { return {re, -im}; }
  bool is_finite() const { return std::isfinite(re) && im.allFinite(); }

  friend Quaternion operator+(const Quaternion& a, const Quaternion& b) { return {a.re + b.re, a.im + b.im}; }
  friend Quaternion operator-(const Quaternion& a, const Quaternion& b) { return {a.re - b.re, a.im - b.im}; }
  friend Quaternion operator-(const Quaternion& a) { return {-a.re, -a.im}; }
  friend Quaternion operator*(double s, const Quaternion& q) { return {s * q.re, s * q.im}; }

  /// Hamilton product: [r,v][s,w] = [rs - <v,w>, rw + sv + v x w].
  friend Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.re * b.re - a.im.dot(b.im), a.re * b.im + b.re * a.im + a.im.cross(b.im)};
  }
};

inline Quaternion qmul(const Quaternion& a, const Quaternion& b) { return a * b; }

inline Quaternion qinv(const Quaternion& q) {
  double n2 = q.norm_squared();
  if (!(n2 > 0.0)) throw Error(ErrorCode::ZeroQuaternion, "inverse of the zero quaternion");
  return (1.0 / n2) * q.conj();
}

namespace detail {

inline double extent(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return std::max({(a - b).norm(), (a - c).norm(), (a - d).norm(), (b - c).norm(), (b - d).norm(), (c - d).norm()});
}

// Relative threshold below which two points of a quadruple count as coincident.
inline constexpr double kCoincidence = 1e-14;

}  // namespace detail

/// cr(a,b,c,d) = (a-b)(b-c)^-1 (c-d)(d-a)^-1 with points as pure quaternions.
/// Real exactly when the four points are concyclic.
inline Quaternion cross_ratio(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  double scale = detail::extent(a, b, c, d);
  if ((b - c).norm() <= detail::kCoincidence * scale)
    throw Error(ErrorCode::CoincidentPoints, "cross-ratio needs b != c");
  if ((d - a).norm() <= detail::kCoincidence * scale)
    throw Error(ErrorCode::CoincidentPoints, "cross-ratio needs d != a");
  using Q = Quaternion;
  return Q::pure(a - b) * qinv(Q::pure(b - c)) * Q::pure(c - d) * qinv(Q::pure(d - a));
}

/// Principal square root through the polar form |q|[cos phi, u sin phi],
/// phi in [0, pi]. Undefined on the non-positive reals.
inline Quaternion sqrt_polar(const Quaternion& q) {
  double n = q.norm();
  double v = q.im.norm();
  if (!(n > 0.0) || (q.re <= 0.0 && v <= 1e-14 * n))
    throw Error(ErrorCode::NonPositiveRealBranch,
                "square root requested on the non-positive real axis (re=" + std::to_string(q.re) + ")");
  double root = std::sqrt(n);
  if (v == 0.0) return Quaternion(root);
  double half = 0.5 * std::atan2(v, q.re);
  return {root * std::cos(half), (root * std::sin(half) / v) * q.im};
}

/// Full quaternion value of the diagonal point
///   f(a,b,c,d) = (X + 1)^-1 (X c + b),  X = (b-a)(c-a)^-1 sqrt(cr(c,a,b,d)).
/// For points of R^3 the real part vanishes up to rounding.
inline Quaternion diagonal_point_quaternion(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  double scale = detail::extent(a, b, c, d);
  const Vec3* pts[] = {&a, &b, &c, &d};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if ((*pts[i] - *pts[j]).norm() <= detail::kCoincidence * scale)
        throw Error(ErrorCode::DegenerateQuadruple,
                    "points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
  Quaternion root;
  try {
    root = sqrt_polar(cross_ratio(c, a, b, d));
  } catch (const Error& e) {
    throw Error(ErrorCode::BranchFailure, e.what());
  }
  using Q = Quaternion;
  Q x = Q::pure(b - a) * qinv(Q::pure(c - a)) * root;
  Q denom = x + Q(1.0);
  if (denom.norm() <= 1e-14 * (x.norm() + 1.0))
    throw Error(ErrorCode::DegenerateQuadruple, "diagonal point lies at infinity");
  return qinv(denom) * (x * Q::pure(c) + Q::pure(b));
}

/// Diagonal ("inserting") point of a quadruple. It lies on the circumsphere of
/// a,b,c,d and satisfies cr(c,a,b,f) = -sqrt(cr(c,a,b,d)).
inline Vec3 diagonal_point(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  Quaternion f = diagonal_point_quaternion(a, b, c, d);
  double scale = detail::extent(a, b, c, d) + std::max({a.norm(), b.norm(), c.norm(), d.norm()});
  if (!f.is_finite() || std::abs(f.re) > 1e-9 * scale)
    throw Error(ErrorCode::DegenerateQuadruple, "diagonal point left the imaginary quaternions");
  return f.im;
}

}  // namespace fibrilgeom
