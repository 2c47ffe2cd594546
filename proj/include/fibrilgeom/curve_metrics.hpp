#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "fibrilgeom/detail/parallel.hpp"
#include "fibrilgeom/error.hpp"
#include "fibrilgeom/pdb.hpp"
#include "fibrilgeom/vec.hpp"

namespace fibrilgeom {

/// Dense symmetric n x n matrix of Angstrom values.
struct HopDistanceMatrix {
  std::size_t n = 0;
  std::vector<double> entries;  // row-major

  double operator()(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
  double& operator()(std::size_t i, std::size_t j) { return entries[i * n + j]; }
};

struct BinaryMap {
  std::size_t n = 0;
  double cutoff = 0.0;
  std::vector<bool> entries;  // row-major

  bool operator()(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
};

struct AlignmentResult {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  double rmsd = 0.0;

  /// Applies the fitted motion x -> R x + t.
  Vec3 apply(const Vec3& x) const { return rotation * x + translation; }
};

/// Euclidean distance between vertex i and vertex i + k.
inline double hop_distance(const DiscreteCurve& curve, std::size_t i, std::size_t k) {
  if (i >= curve.size() || k >= curve.size() - i)
    throw Error(ErrorCode::IndexOutOfRange, "hop (" + std::to_string(i) + ", " + std::to_string(k) +
                                                ") outside a curve of " + std::to_string(curve.size()) + " vertices");
  return (curve[i] - curve[i + k]).norm();
}

/// D_ij = | |g_i - g_j| - |g'_i - g'_j| | over the first n vertices of each curve.
inline HopDistanceMatrix truncated_hop_matrix(const DiscreteCurve& first, const DiscreteCurve& second, std::size_t n) {
  if (first.size() < n || second.size() < n)
    throw Error(ErrorCode::CurveTooShort, "truncation length " + std::to_string(n) + " exceeds curve lengths " +
                                              std::to_string(first.size()) + "/" + std::to_string(second.size()));
  HopDistanceMatrix m{n, std::vector<double>(n * n, 0.0)};
  detail::parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double a = (first[i] - first[j]).norm();
      double b = (second[i] - second[j]).norm();
      m.entries[i * n + j] = std::abs(a - b);
    }
  }, 16);
  return m;
}

inline HopDistanceMatrix truncated_hop_matrix(const DiscreteCurve& first, const DiscreteCurve& second) {
  return truncated_hop_matrix(first, second, std::min(first.size(), second.size()));
}

/// Entry (i, j) is set when D_ij is strictly greater than the cutoff.
inline BinaryMap threshold_map(const HopDistanceMatrix& matrix, double cutoff) {
  if (!(cutoff > 0.0)) throw Error(ErrorCode::InvalidArgument, "cutoff must be positive");
  BinaryMap map{matrix.n, cutoff, std::vector<bool>(matrix.entries.size())};
  for (std::size_t k = 0; k < matrix.entries.size(); ++k) map.entries[k] = matrix.entries[k] > cutoff;
  return map;
}

/// Root mean square deviation of corresponding points, no superposition.
inline double rmsd(std::span<const Vec3> p, std::span<const Vec3> q) {
  if (p.size() != q.size())
    throw Error(ErrorCode::LengthMismatch, std::to_string(p.size()) + " vs " + std::to_string(q.size()) + " points");
  if (p.empty()) throw Error(ErrorCode::InsufficientData, "rmsd of empty point lists");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += (p[i] - q[i]).squaredNorm();
  return std::sqrt(sum / static_cast<double>(p.size()));
}

/// Least-squares proper rotation and translation carrying p onto q (Kabsch).
inline AlignmentResult kabsch_align(std::span<const Vec3> p, std::span<const Vec3> q) {
  if (p.size() != q.size())
    throw Error(ErrorCode::LengthMismatch, std::to_string(p.size()) + " vs " + std::to_string(q.size()) + " points");
  if (p.size() < 3) throw Error(ErrorCode::InsufficientData, "Kabsch alignment needs at least 3 points");

  Vec3 cp = Vec3::Zero(), cq = Vec3::Zero();
  for (std::size_t i = 0; i < p.size(); ++i) {
    cp += p[i];
    cq += q[i];
  }
  cp /= static_cast<double>(p.size());
  cq /= static_cast<double>(q.size());

  Mat3 h = Mat3::Zero();
  Mat3 spread = Mat3::Zero();
  for (std::size_t i = 0; i < p.size(); ++i) {
    h += (p[i] - cp) * (q[i] - cq).transpose();
    spread += (p[i] - cp) * (p[i] - cp).transpose();
  }
  // Collinear input leaves the rotation about the common line undetermined.
  Vec3 extent = Eigen::JacobiSVD<Mat3>(spread).singularValues();
  if (!(extent[0] > 0.0) || extent[1] <= 1e-14 * extent[0])
    throw Error(ErrorCode::DegenerateConfiguration, "points are collinear; rotation is not unique");

  Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU();
  Mat3 v = svd.matrixV();
  double d = (v * u.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  Mat3 correction = Mat3::Identity();
  correction(2, 2) = d;

  AlignmentResult out;
  out.rotation = v * correction * u.transpose();
  out.translation = cq - out.rotation * cp;
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += (out.apply(p[i]) - q[i]).squaredNorm();
  out.rmsd = std::sqrt(sum / static_cast<double>(p.size()));
  return out;
}

}  // namespace fibrilgeom
