#include <gtest/gtest.h>

#include <random>

#include "fibrilgeom/curvature_torsion.hpp"
#include "fibrilgeom/quaternion.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace fibrilgeom;
using Q = Quaternion;

namespace {

const Vec3 kI = Vec3::UnitX(), kJ = Vec3::UnitY(), kK = Vec3::UnitZ();

void expect_q(const Q& got, double re, const Vec3& im, double tol = 1e-12) {
  EXPECT_NEAR(got.re, re, tol);
  EXPECT_NEAR((got.im - im).norm(), 0.0, tol) << got.im.transpose() << " vs " << im.transpose();
}

Vec3 to_v(oracle::cplx z) { return {z.real(), z.imag(), 0.0}; }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;  // sentinel: nothing thrown
}

}  // namespace

TEST(Quaternion, BasisRelations) {
  expect_q(Q::pure(kI) * Q::pure(kJ), 0, kK);
  expect_q(Q::pure(kJ) * Q::pure(kK), 0, kI);
  expect_q(Q::pure(kK) * Q::pure(kI), 0, kJ);
  expect_q(Q::pure(kJ) * Q::pure(kI), 0, -kK);
  for (const Vec3& e : {kI, kJ, kK}) expect_q(Q::pure(e) * Q::pure(e), -1, Vec3::Zero());
  expect_q(Q::pure(kI) * Q::pure(kJ) * Q::pure(kK), -1, Vec3::Zero());
}

TEST(Quaternion, ProductOfPureVectors) {
  Vec3 v(1, 2, 3), w(-2, 0.5, 4);
  expect_q(Q::pure(v) * Q::pure(w), -v.dot(w), v.cross(w));
}

TEST(Quaternion, Inverse) {
  expect_q(qinv(Q(2.0)), 0.5, Vec3::Zero());
  expect_q(qinv(Q::pure(kI)), 0, -kI);
  Q q(1.0, Vec3(1, 1, 1));
  expect_q(qinv(q), 0.25, Vec3(-0.25, -0.25, -0.25));
  expect_q(q * qinv(q), 1, Vec3::Zero());
  EXPECT_EQ(code_of([] { qinv(Q()); }), ErrorCode::ZeroQuaternion);
}

TEST(Quaternion, NormIsMultiplicative) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    Q a(fixture::uniform(rng, -3, 3), fixture::gaussian(rng));
    Q b(fixture::uniform(rng, -3, 3), fixture::gaussian(rng));
    EXPECT_NEAR((a * b).norm(), a.norm() * b.norm(), 1e-12 * (1 + a.norm() * b.norm()));
    Q c(fixture::uniform(rng, -3, 3), fixture::gaussian(rng));
    Q lhs = (a * b) * c, rhs = a * (b * c);
    EXPECT_NEAR((lhs - rhs).norm(), 0.0, 1e-12 * (1 + lhs.norm()));
  }
}

TEST(SqrtPolar, KnownRoots) {
  expect_q(sqrt_polar(Q(4.0)), 2, Vec3::Zero());
  expect_q(sqrt_polar(Q::pure(Vec3(0, 0, 2))), 1, Vec3(0, 0, 1));
  Q q(0.3, Vec3(-1, 0.4, 2));
  Q r = sqrt_polar(q);
  expect_q(r * r, q.re, q.im);
  EXPECT_GE(r.re, 0.0);
}

TEST(SqrtPolar, NonPositiveRealBranchIsAnError) {
  EXPECT_EQ(code_of([] { sqrt_polar(Q(-1.0)); }), ErrorCode::NonPositiveRealBranch);
  EXPECT_EQ(code_of([] { sqrt_polar(Q()); }), ErrorCode::NonPositiveRealBranch);
}

TEST(CrossRatio, SquareIsHarmonic) {
  Vec3 a(0, 0, 0), b(1, 0, 0), c(1, 1, 0), d(0, 1, 0);
  expect_q(cross_ratio(a, b, c, d), -1, Vec3::Zero());
}

TEST(CrossRatio, ConcyclicPointsGiveRealValue) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    Mat3 rot = fixture::random_rotation(rng);
    Vec3 center = fixture::gaussian(rng, 3.0);
    double radius = fixture::uniform(rng, 0.5, 5.0);
    std::array<Vec3, 4> p;
    for (auto& x : p) {
      double th = fixture::uniform(rng, 0, 2 * M_PI);
      x = center + radius * rot * Vec3(std::cos(th), std::sin(th), 0);
    }
    Q cr = cross_ratio(p[0], p[1], p[2], p[3]);
    EXPECT_LT(cr.im.norm(), 1e-8 * (1 + std::abs(cr.re)));
  }
}

TEST(CrossRatio, PlanarValueMatchesComplexCrossRatio) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 100; ++t) {
    oracle::cplx z[4];
    for (auto& x : z) x = {fixture::uniform(rng, -2, 2), fixture::uniform(rng, -2, 2)};
    Q cr = cross_ratio(to_v(z[0]), to_v(z[1]), to_v(z[2]), to_v(z[3]));
    auto want = oracle::cross_ratio(z[0], z[1], z[2], z[3]);
    double tol = 1e-10 * (1 + std::abs(want));
    EXPECT_NEAR(cr.re, want.real(), tol);
    EXPECT_NEAR(cr.im.z(), want.imag(), tol);
    EXPECT_NEAR(cr.im.head<2>().norm(), 0.0, tol);
  }
}

TEST(CrossRatio, TetrahedronImaginaryPartPointsAlongFromCircumcenter) {
  // Regular tetrahedron: Im cr(a,b,c,d) is parallel to a - m where m is the
  // circumcenter of b, c, d.
  Vec3 a(1, 1, 1), b(1, -1, -1), c(-1, 1, -1), d(-1, -1, 1);
  Q cr = cross_ratio(a, b, c, d);
  Vec3 m = oracle::circumcenter(b, c, d);
  EXPECT_NEAR(cr.im.normalized().cross((a - m).normalized()).norm(), 0.0, 1e-12);
}

TEST(CrossRatio, CoincidentPoints) {
  Vec3 a(0, 0, 0), b(1, 0, 0), d(0, 1, 0);
  EXPECT_EQ(code_of([&] { cross_ratio(a, b, b, d); }), ErrorCode::CoincidentPoints);
  EXPECT_EQ(code_of([&] { cross_ratio(a, b, d, a); }), ErrorCode::CoincidentPoints);
}

TEST(DiagonalPoint, UnitSquareValue) {
  // cr(c,a,b,f) = -sqrt(cr(c,a,b,d)) solved in the complex plane.
  Vec3 f = diagonal_point({0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0});
  auto want = oracle::diagonal_point({0, 0}, {1, 0}, {1, 1}, {0, 1});
  EXPECT_NEAR(want.real(), 0.5 * (1 + std::sqrt(2.0)), 1e-12);
  EXPECT_NEAR(want.imag(), 0.5, 1e-12);
  EXPECT_NEAR((f - to_v(want)).norm(), 0.0, 1e-12) << f.transpose();
}

TEST(DiagonalPoint, PlanarMatchesComplexSolve) {
  std::mt19937_64 rng(7);
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    oracle::cplx z[4];
    for (auto& x : z) x = {fixture::uniform(rng, -3, 3), fixture::uniform(rng, -3, 3)};
    auto cr = oracle::cross_ratio(z[2], z[0], z[1], z[3]);
    if (cr.real() < 0 && std::abs(cr.imag()) < 1e-3) continue;  // near the excluded branch
    auto want = oracle::diagonal_point(z[0], z[1], z[2], z[3]);
    if (std::abs(want) > 1e3) continue;
    Vec3 f = diagonal_point(to_v(z[0]), to_v(z[1]), to_v(z[2]), to_v(z[3]));
    EXPECT_NEAR((f - to_v(want)).norm(), 0.0, 1e-8 * (1 + std::abs(want)));
    ++checked;
  }
  EXPECT_GT(checked, 200);
}

TEST(DiagonalPoint, SatisfiesDefiningRelationInSpace) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 300; ++t) {
    Vec3 a = fixture::gaussian(rng), b = fixture::gaussian(rng), c = fixture::gaussian(rng),
         d = fixture::gaussian(rng);
    Vec3 f;
    try {
      f = diagonal_point(a, b, c, d);
    } catch (const Error&) {
      continue;
    }
    if (f.norm() > 1e3) continue;
    Q lhs = cross_ratio(c, a, b, f);
    Q rhs = -1.0 * sqrt_polar(cross_ratio(c, a, b, d));
    EXPECT_NEAR((lhs - rhs).norm(), 0.0, 1e-7 * (1 + rhs.norm()));
    // f lies on the sphere through a, b, c, d.
    Vec3 m = oracle::circumsphere_center(a, b, c, d);
    double r = (a - m).norm();
    EXPECT_NEAR((f - m).norm(), r, 1e-7 * (1 + r));
  }
}

TEST(DiagonalPoint, InsertingPointsAreHarmonicAndConcyclic) {
  std::mt19937_64 rng(9);
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    Window w{fixture::gaussian(rng), fixture::gaussian(rng), fixture::gaussian(rng), fixture::gaussian(rng)};
    InsertingPoints p;
    try {
      p = inserting_points(w);
    } catch (const Error&) {
      continue;
    }
    Q cr = cross_ratio(p.a, p.b, p.c, p.d);
    EXPECT_NEAR(cr.re, -1.0, 1e-8);
    EXPECT_LT(cr.im.norm(), 1e-8);
    ++checked;
  }
  EXPECT_GT(checked, 250);
}

TEST(DiagonalPoint, EquivariantUnderSimilarity) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 100; ++t) {
    Vec3 a = fixture::gaussian(rng), b = fixture::gaussian(rng), c = fixture::gaussian(rng),
         d = fixture::gaussian(rng);
    Mat3 rot = fixture::random_rotation(rng);
    double s = fixture::uniform(rng, 0.5, 3.0);
    Vec3 shift = fixture::gaussian(rng, 4.0);
    auto g = [&](const Vec3& x) -> Vec3 { return s * rot * x + shift; };
    Vec3 f;
    try {
      f = diagonal_point(a, b, c, d);
    } catch (const Error&) {
      continue;
    }
    Vec3 f2 = diagonal_point(g(a), g(b), g(c), g(d));
    EXPECT_NEAR((f2 - g(f)).norm(), 0.0, 1e-8 * (1 + g(f).norm()));
  }
}

TEST(DiagonalPoint, CoincidentPointsAreDegenerate) {
  Vec3 a(0, 0, 0), b(1, 0, 0), c(1, 1, 0);
  EXPECT_EQ(code_of([&] { diagonal_point(a, b, c, a); }), ErrorCode::DegenerateQuadruple);
}

TEST(DiagonalPoint, ExcludedBranchIsReported) {
  // c, a, b, d concyclic in this order with cr(c,a,b,d) negative real.
  Vec3 a(0, 1, 0), b(-1, 0, 0), c(1, 0, 0), d(0, -1, 0);
  EXPECT_EQ(code_of([&] { diagonal_point(a, b, c, d); }), ErrorCode::BranchFailure);
}

TEST(CrossRatio, MobiusInvariants) {
  std::mt19937_64 rng(12);
  auto invert = [](const Vec3& x) -> Vec3 { return x / x.squaredNorm(); };
  for (int t = 0; t < 100; ++t) {
    std::array<Vec3, 4> p;
    for (auto& x : p) x = fixture::gaussian(rng, 2.0) + Vec3(0.5, 0.5, 0.5);
    Q cr = cross_ratio(p[0], p[1], p[2], p[3]);
    Mat3 rot = fixture::random_rotation(rng);
    double s = fixture::uniform(rng, 0.2, 5.0);
    Vec3 shift = fixture::gaussian(rng, 3.0);
    std::array<Vec3, 4> sim, inv;
    for (int k = 0; k < 4; ++k) {
      sim[k] = s * rot * p[k] + shift;
      inv[k] = invert(p[k]);
    }
    for (const auto& img : {sim, inv}) {
      Q cr2 = cross_ratio(img[0], img[1], img[2], img[3]);
      double scale = 1 + cr.norm();
      EXPECT_NEAR(cr2.re, cr.re, 1e-8 * scale);
      EXPECT_NEAR(cr2.im.norm(), cr.im.norm(), 1e-8 * scale);
    }
  }
}
