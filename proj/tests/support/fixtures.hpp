#pragma once

// Synthetic structures and point sets for the test suites.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oracles.hpp"

namespace fixture {

using V3 = Eigen::Vector3d;

/// Seeded standard-normal vector.
inline V3 gaussian(std::mt19937_64& rng, double sigma = 1.0) {
  std::normal_distribution<double> n(0.0, sigma);
  return {n(rng), n(rng), n(rng)};
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Uniformly random rotation (QR of a Gaussian matrix with sign fix).
inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  Eigen::Matrix3d g;
  for (int c = 0; c < 3; ++c) g.col(c) = gaussian(rng);
  Eigen::HouseholderQR<Eigen::Matrix3d> qr(g);
  Eigen::Matrix3d q = qr.householderQ();
  Eigen::Matrix3d r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < 3; ++c)
    if (r(c, c) < 0) q.col(c) *= -1.0;
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

struct BackboneAtoms {
  V3 n, ca, c, o;
};

/// Extended strand with seeded jitter, one residue every ~3.4 A along x.
inline std::vector<BackboneAtoms> strand(int residues, std::mt19937_64& rng, double jitter = 0.15) {
  std::vector<BackboneAtoms> out;
  for (int i = 0; i < residues; ++i) {
    double x = 3.4 * i;
    double s = (i % 2 == 0) ? 1.0 : -1.0;
    BackboneAtoms b;
    b.n = V3(x, 0.0, 0.0) + gaussian(rng, jitter);
    b.ca = V3(x + 1.2, 0.9 * s, 0.3) + gaussian(rng, jitter);
    b.c = V3(x + 2.4, 0.2 * s, -0.2) + gaussian(rng, jitter);
    b.o = V3(x + 2.6, 0.4 * s, -1.4) + gaussian(rng, jitter);
    out.push_back(b);
  }
  return out;
}

/// PDB text for a stack of chains; chain k is the strand shifted by k * rise
/// along z, with independent jitter per layer.
inline std::string stacked_pdb(const std::string& chain_ids, int residues, std::uint64_t seed, double rise = 4.8,
                               int first_seq = 1) {
  std::mt19937_64 rng(seed);
  auto base = strand(residues, rng, 0.0);
  std::string text;
  int serial = 1;
  for (std::size_t k = 0; k < chain_ids.size(); ++k) {
    V3 shift(0.0, 0.0, rise * static_cast<double>(k));
    for (int i = 0; i < residues; ++i) {
      auto put = [&](const std::string& name, const V3& p) {
        V3 q = p + shift + gaussian(rng, 0.2);
        text += oracle::atom_line(serial++, name, ' ', "GLY", chain_ids[k], first_seq + i, q.x(), q.y(), q.z()) + "\n";
      };
      put("N", base[i].n);
      put("CA", base[i].ca);
      put("C", base[i].c);
      put("O", base[i].o);
    }
  }
  text += "END\n";
  return text;
}

/// Points of a random planar curve in the plane through `origin` spanned by u, v.
inline std::vector<V3> planar_curve(int n, std::mt19937_64& rng) {
  V3 u = gaussian(rng).normalized();
  V3 v = u.cross(gaussian(rng)).normalized();
  V3 origin = gaussian(rng, 5.0);
  std::vector<V3> pts;
  for (int i = 0; i < n; ++i) pts.push_back(origin + uniform(rng, -10, 10) * u + uniform(rng, -10, 10) * v);
  return pts;
}

inline std::vector<V3> helix_samples(const oracle::Helix& h, double eps, int n) {
  std::vector<V3> pts;
  for (int i = 0; i < n; ++i) pts.push_back(h(eps * i));
  return pts;
}

}  // namespace fixture
