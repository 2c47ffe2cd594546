#pragma once

// Vietoris-Rips persistence over Z/2 and matching distances between diagrams.
//
// Filtration convention: a simplex enters at eps = (max pairwise distance) / 2,
// i.e. {x_0..x_k} is present once d(x_i, x_j) <= 2 eps for all pairs. Reported
// births and deaths are radii, half of the common "diameter" convention.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fibrilgeom/detail/parallel.hpp"
#include "fibrilgeom/error.hpp"
#include "fibrilgeom/vec.hpp"

namespace fibrilgeom {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Simplex {
  std::vector<std::uint32_t> vertices;  // ascending
  double value = 0.0;                   // filtration radius

  int dimension() const { return static_cast<int>(vertices.size()) - 1; }
};

struct FilteredComplex {
  std::size_t num_points = 0;
  int max_dim = 0;
  double max_eps = 0.0;
  std::vector<Simplex> simplices;  // sorted by (value, dimension, vertices)
};

struct PersistencePoint {
  double birth = 0.0;
  double death = kInfinity;
  int dimension = 0;

  bool essential() const { return std::isinf(death); }
  double persistence() const { return death - birth; }
  bool operator==(const PersistencePoint&) const = default;
  bool operator<(const PersistencePoint& o) const {
    if (dimension != o.dimension) return dimension < o.dimension;
    if (birth != o.birth) return birth < o.birth;
    return death < o.death;
  }
};

struct PersistenceDiagram {
  std::vector<PersistencePoint> points;  // sorted by (dimension, birth, death)
  std::size_t zero_persistence_pairs = 0;

  PersistenceDiagram in_dimension(int dim) const {
    PersistenceDiagram out;
    for (const auto& p : points)
      if (p.dimension == dim) out.points.push_back(p);
    return out;
  }

  std::size_t essential_count() const {
    return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const auto& p) { return p.essential(); }));
  }
};

/// Replaces infinite deaths by `cap` (never below the birth).
inline PersistenceDiagram cap_essential(PersistenceDiagram d, double cap) {
  for (auto& p : d.points)
    if (p.essential()) p.death = std::max(cap, p.birth);
  std::sort(d.points.begin(), d.points.end());
  return d;
}

// ---------------------------------------------------------------------------
// Vietoris-Rips filtration

inline FilteredComplex vr_filtration(std::span<const Vec3> points, int max_dim, double max_eps) {
  if (max_dim < 0 || max_dim > 2)
    throw Error(ErrorCode::InvalidArgument, "max_dim must be 0, 1 or 2 (H0 and H1 only), got " + std::to_string(max_dim));
  if (!(max_eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "max_eps must be positive");
  const std::size_t n = points.size();
  if (n >= std::numeric_limits<std::uint32_t>::max()) throw Error(ErrorCode::InvalidArgument, "too many points");

  std::vector<double> radius(n * n, 0.0);
  detail::parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) radius[i * n + j] = 0.5 * (points[i] - points[j]).norm();
  }, 32);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (radius[i * n + j] == 0.0)
        throw Error(ErrorCode::DuplicatePoints, "points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");

  FilteredComplex complex{n, max_dim, max_eps, {}};
  auto& out = complex.simplices;
  for (std::uint32_t i = 0; i < n; ++i) out.push_back({{i}, 0.0});
  if (max_dim >= 1) {
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j)
        if (radius[i * n + j] <= max_eps) out.push_back({{i, j}, radius[i * n + j]});
  }
  if (max_dim >= 2) {
    std::vector<std::vector<std::uint32_t>> neighbours(n);
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j)
        if (radius[i * n + j] <= max_eps) neighbours[i].push_back(j);
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < neighbours[i].size(); ++a)
        for (std::size_t b = a + 1; b < neighbours[i].size(); ++b) {
          std::uint32_t j = neighbours[i][a], k = neighbours[i][b];
          double r = radius[j * n + k];
          if (r <= max_eps) out.push_back({{i, j, k}, std::max({radius[i * n + j], radius[i * n + k], r})});
        }
  }
  std::sort(out.begin(), out.end(), [](const Simplex& x, const Simplex& y) {
    if (x.value != y.value) return x.value < y.value;
    if (x.vertices.size() != y.vertices.size()) return x.vertices.size() < y.vertices.size();
    return x.vertices < y.vertices;
  });
  return complex;
}

// ---------------------------------------------------------------------------
// Boundary matrix reduction

namespace detail {

using Column = std::vector<std::uint32_t>;  // ascending row indices

inline void add_column(Column& target, const Column& source, Column& scratch) {
  scratch.clear();
  std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(), std::back_inserter(scratch));
  target.swap(scratch);
}

}  // namespace detail

/// Z/2 persistence by standard column reduction with clearing. Classes of
/// dimension < max_dim are reported; zero-length pairs are counted, not emitted.
inline PersistenceDiagram compute_persistence(const FilteredComplex& complex) {
  const auto& simplices = complex.simplices;
  const std::size_t m = simplices.size();
  const std::size_t n = complex.num_points;

  // Face lookup: vertex -> index, edge (i, j) -> index.
  std::vector<std::uint32_t> vertex_index(n);
  std::vector<std::int64_t> edge_index(n * n, -1);
  for (std::uint32_t s = 0; s < m; ++s) {
    const auto& v = simplices[s].vertices;
    if (v.size() == 1) vertex_index[v[0]] = s;
    if (v.size() == 2) edge_index[v[0] * n + v[1]] = s;
  }
  auto boundary = [&](const Simplex& s) {
    detail::Column col;
    const auto& v = s.vertices;
    if (v.size() == 2) {
      col = {vertex_index[v[0]], vertex_index[v[1]]};
    } else if (v.size() == 3) {
      col = {static_cast<std::uint32_t>(edge_index[v[0] * n + v[1]]), static_cast<std::uint32_t>(edge_index[v[0] * n + v[2]]),
             static_cast<std::uint32_t>(edge_index[v[1] * n + v[2]])};
    }
    std::sort(col.begin(), col.end());
    return col;
  };

  constexpr std::int64_t kNone = -1;
  std::vector<std::int64_t> pivot_owner(m, kNone);  // row -> column whose low it is
  std::vector<bool> cleared(m, false);
  std::vector<detail::Column> reduced(m);
  detail::Column scratch;

  // Highest dimension first so that its pivots clear columns one dimension down.
  for (int dim = complex.max_dim; dim >= 1; --dim) {
    for (std::uint32_t j = 0; j < m; ++j) {
      if (simplices[j].dimension() != dim || cleared[j]) continue;
      detail::Column col = boundary(simplices[j]);
      while (!col.empty()) {
        std::int64_t owner = pivot_owner[col.back()];
        if (owner == kNone) break;
        detail::add_column(col, reduced[owner], scratch);
      }
      if (!col.empty()) {
        pivot_owner[col.back()] = j;
        cleared[col.back()] = true;
      }
      reduced[j] = std::move(col);
    }
  }

  PersistenceDiagram diagram;
  for (std::uint32_t i = 0; i < m; ++i) {
    const int dim = simplices[i].dimension();
    if (dim >= complex.max_dim && complex.max_dim > 0) continue;
    if (!reduced[i].empty()) continue;  // negative simplex: it killed a class
    double birth = simplices[i].value;
    std::int64_t killer = pivot_owner[i];
    double death = killer == kNone ? kInfinity : simplices[killer].value;
    if (death == birth) {
      ++diagram.zero_persistence_pairs;
      continue;
    }
    diagram.points.push_back({birth, death, dim});
  }
  std::sort(diagram.points.begin(), diagram.points.end());
  return diagram;
}

inline PersistenceDiagram vr_persistence(std::span<const Vec3> points, int max_dim, double max_eps) {
  return compute_persistence(vr_filtration(points, max_dim, max_eps));
}

// ---------------------------------------------------------------------------
// Diagram distances

enum class DistanceKind { Bottleneck, Wasserstein };

/// One edge of an optimal matching. An empty side means the diagonal.
struct MatchedPair {
  std::optional<std::size_t> first;   // index into the first diagram's points
  std::optional<std::size_t> second;  // index into the second diagram's points
  double cost = 0.0;                  // l-infinity ground distance
};

struct DiagramDistance {
  double value = 0.0;
  DistanceKind kind = DistanceKind::Bottleneck;
  double q = kInfinity;
  std::vector<MatchedPair> matching;
};

namespace detail {

inline double linf(const PersistencePoint& a, const PersistencePoint& b) {
  return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

inline double to_diagonal(const PersistencePoint& p) { return 0.5 * (p.death - p.birth); }

struct SplitDiagram {
  std::vector<std::size_t> finite;
  std::vector<std::size_t> essential;  // sorted by birth
};

inline SplitDiagram split(const PersistenceDiagram& d) {
  SplitDiagram s;
  for (std::size_t i = 0; i < d.points.size(); ++i) (d.points[i].essential() ? s.essential : s.finite).push_back(i);
  std::stable_sort(s.essential.begin(), s.essential.end(),
                   [&](std::size_t a, std::size_t b) { return d.points[a].birth < d.points[b].birth; });
  return s;
}

inline void check_single_dimension(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  std::optional<int> dim;
  for (const auto* d : {&a, &b})
    for (const auto& p : d->points) {
      if (dim && *dim != p.dimension)
        throw Error(ErrorCode::InvalidArgument, "diagram distances need points of a single homology dimension");
      dim = p.dimension;
    }
}

// Essential classes pair up in birth order; counts must agree.
inline std::vector<MatchedPair> match_essential(const PersistenceDiagram& a, const SplitDiagram& sa,
                                                const PersistenceDiagram& b, const SplitDiagram& sb) {
  if (sa.essential.size() != sb.essential.size())
    throw Error(ErrorCode::EssentialMismatch, std::to_string(sa.essential.size()) + " vs " +
                                                  std::to_string(sb.essential.size()) + " essential classes");
  std::vector<MatchedPair> out;
  for (std::size_t k = 0; k < sa.essential.size(); ++k) {
    std::size_t i = sa.essential[k], j = sb.essential[k];
    out.push_back({i, j, std::abs(a.points[i].birth - b.points[j].birth)});
  }
  return out;
}

/// Maximum bipartite matching (Kuhn) on a square adjacency predicate.
template <typename Adjacent>
std::vector<std::int64_t> perfect_matching(std::size_t size, Adjacent&& adjacent) {
  std::vector<std::int64_t> match_right(size, -1);
  std::vector<char> visited(size);
  std::vector<std::vector<std::size_t>> adj(size);
  for (std::size_t l = 0; l < size; ++l)
    for (std::size_t r = 0; r < size; ++r)
      if (adjacent(l, r)) adj[l].push_back(r);
  auto augment = [&](auto&& self, std::size_t l) -> bool {
    for (std::size_t r : adj[l]) {
      if (visited[r]) continue;
      visited[r] = 1;
      if (match_right[r] < 0 || self(self, static_cast<std::size_t>(match_right[r]))) {
        match_right[r] = static_cast<std::int64_t>(l);
        return true;
      }
    }
    return false;
  };
  for (std::size_t l = 0; l < size; ++l) {
    std::fill(visited.begin(), visited.end(), 0);
    if (!augment(augment, l)) return {};
  }
  std::vector<std::int64_t> match_left(size, -1);
  for (std::size_t r = 0; r < size; ++r) match_left[static_cast<std::size_t>(match_right[r])] = static_cast<std::int64_t>(r);
  return match_left;
}

/// Min-cost assignment on a dense square cost matrix (Hungarian method with
/// potentials). Returns the column assigned to each row.
inline std::vector<std::size_t> min_cost_assignment(const std::vector<double>& cost, std::size_t size) {
  std::vector<double> u(size + 1, 0.0), v(size + 1, 0.0);
  std::vector<std::size_t> p(size + 1, 0), way(size + 1, 0);
  for (std::size_t i = 1; i <= size; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(size + 1, kInfinity);
    std::vector<char> used(size + 1, 0);
    do {
      used[j0] = 1;
      std::size_t i0 = p[j0], j1 = 0;
      double delta = kInfinity;
      for (std::size_t j = 1; j <= size; ++j) {
        if (used[j]) continue;
        double cur = cost[(i0 - 1) * size + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= size; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(size);
  for (std::size_t j = 1; j <= size; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

// Rows: first-diagram finite points, then one diagonal slot per second-diagram
// point. Columns: second-diagram finite points, then diagonal slots for the first.
inline std::vector<MatchedPair> decode_matching(const PersistenceDiagram& a, const std::vector<std::size_t>& fa,
                                                const PersistenceDiagram& b, const std::vector<std::size_t>& fb,
                                                const std::vector<std::size_t>& row_to_col) {
  const std::size_t n1 = fa.size(), n2 = fb.size();
  std::vector<MatchedPair> out;
  for (std::size_t r = 0; r < n1 + n2; ++r) {
    std::size_t c = row_to_col[r];
    if (r < n1 && c < n2)
      out.push_back({fa[r], fb[c], linf(a.points[fa[r]], b.points[fb[c]])});
    else if (r < n1)
      out.push_back({fa[r], std::nullopt, to_diagonal(a.points[fa[r]])});
    else if (c < n2)
      out.push_back({std::nullopt, fb[c], to_diagonal(b.points[fb[c]])});
  }
  return out;
}

}  // namespace detail

/// W_inf: exact bottleneck distance. Candidate values are all point-to-point
/// l-inf distances and diagonal gaps; the smallest one admitting a perfect
/// matching on the diagonal-augmented bipartite graph is the answer.
inline DiagramDistance bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  detail::check_single_dimension(a, b);
  auto sa = detail::split(a), sb = detail::split(b);
  DiagramDistance out;
  out.kind = DistanceKind::Bottleneck;
  out.matching = detail::match_essential(a, sa, b, sb);
  double essential_cost = 0.0;
  for (const auto& m : out.matching) essential_cost = std::max(essential_cost, m.cost);

  const auto& fa = sa.finite;
  const auto& fb = sb.finite;
  const std::size_t n1 = fa.size(), n2 = fb.size(), size = n1 + n2;
  std::vector<double> candidates{0.0};
  for (std::size_t i : fa) candidates.push_back(detail::to_diagonal(a.points[i]));
  for (std::size_t j : fb) candidates.push_back(detail::to_diagonal(b.points[j]));
  for (std::size_t i : fa)
    for (std::size_t j : fb) candidates.push_back(detail::linf(a.points[i], b.points[j]));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  auto feasible = [&](double delta) {
    return detail::perfect_matching(size, [&](std::size_t r, std::size_t c) {
      if (r < n1 && c < n2) return detail::linf(a.points[fa[r]], b.points[fb[c]]) <= delta;
      if (r < n1) return c - n2 == r && detail::to_diagonal(a.points[fa[r]]) <= delta;
      if (c < n2) return r - n1 == c && detail::to_diagonal(b.points[fb[c]]) <= delta;
      return true;
    });
  };
  std::size_t lo = 0, hi = candidates.size() - 1;  // the largest candidate is always feasible
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (!feasible(candidates[mid]).empty())
      hi = mid;
    else
      lo = mid + 1;
  }
  auto match = feasible(candidates[lo]);
  std::vector<std::size_t> row_to_col(size);
  for (std::size_t r = 0; r < size; ++r) row_to_col[r] = static_cast<std::size_t>(match[r]);
  auto finite = detail::decode_matching(a, fa, b, fb, row_to_col);
  out.matching.insert(out.matching.end(), finite.begin(), finite.end());
  out.value = std::max(candidates[lo], essential_cost);
  return out;
}

/// W_q: exact q-Wasserstein distance by min-cost perfect matching.
inline DiagramDistance wasserstein(const PersistenceDiagram& a, const PersistenceDiagram& b, double q) {
  if (!(q >= 1.0) || std::isinf(q)) throw Error(ErrorCode::InvalidArgument, "Wasserstein exponent must be finite and >= 1");
  detail::check_single_dimension(a, b);
  auto sa = detail::split(a), sb = detail::split(b);
  DiagramDistance out;
  out.kind = DistanceKind::Wasserstein;
  out.q = q;
  out.matching = detail::match_essential(a, sa, b, sb);

  const auto& fa = sa.finite;
  const auto& fb = sb.finite;
  const std::size_t n1 = fa.size(), n2 = fb.size(), size = n1 + n2;
  std::vector<double> cost(size * size, 0.0);
  for (std::size_t r = 0; r < size; ++r)
    for (std::size_t c = 0; c < size; ++c) {
      double d = 0.0;
      if (r < n1 && c < n2)
        d = detail::linf(a.points[fa[r]], b.points[fb[c]]);
      else if (r < n1)
        d = detail::to_diagonal(a.points[fa[r]]);
      else if (c < n2)
        d = detail::to_diagonal(b.points[fb[c]]);
      cost[r * size + c] = std::pow(d, q);
    }
  if (size > 0) {
    auto finite = detail::decode_matching(a, fa, b, fb, detail::min_cost_assignment(cost, size));
    out.matching.insert(out.matching.end(), finite.begin(), finite.end());
  }
  double total = 0.0;
  for (const auto& m : out.matching) total += std::pow(m.cost, q);
  out.value = std::pow(total, 1.0 / q);
  return out;
}

// ---------------------------------------------------------------------------
// Structure comparison

struct DimensionDistances {
  DiagramDistance bottleneck;
  DiagramDistance wasserstein;
};

struct ComparisonResult {
  PersistenceDiagram first;   // as computed, essential deaths infinite
  PersistenceDiagram second;
  double max_eps = 0.0;
  double q = 1.0;
  DimensionDistances dim0;
  DimensionDistances dim1;
};

/// How infinite deaths enter the distances.
enum class EssentialPolicy {
  Cap,     // death := max_eps before matching
  Strict,  // essential counts must agree; matched by |birth - birth'|
};

/// H0/H1 diagrams of both clouds (radius convention, max_dim 2) and their
/// bottleneck and q-Wasserstein distances.
inline ComparisonResult compare_structures(std::span<const Vec3> first, std::span<const Vec3> second, double max_eps,
                                           double q, EssentialPolicy policy = EssentialPolicy::Cap) {
  if (first.empty() || second.empty()) throw Error(ErrorCode::InsufficientData, "empty point cloud");
  if (std::isinf(max_eps) && policy == EssentialPolicy::Cap)
    throw Error(ErrorCode::InvalidArgument, "capping essential classes needs a finite max_eps");
  ComparisonResult r;
  r.max_eps = max_eps;
  r.q = q;
  if (detail::thread_budget() > 1) {
    auto fut = std::async(std::launch::async, [&] { return vr_persistence(second, 2, max_eps); });
    r.first = vr_persistence(first, 2, max_eps);
    r.second = fut.get();
  } else {
    r.first = vr_persistence(first, 2, max_eps);
    r.second = vr_persistence(second, 2, max_eps);
  }
  auto prepared = [&](const PersistenceDiagram& d, int dim) {
    auto part = d.in_dimension(dim);
    return policy == EssentialPolicy::Cap ? cap_essential(std::move(part), max_eps) : part;
  };
  for (int dim : {0, 1}) {
    auto a = prepared(r.first, dim);
    auto b = prepared(r.second, dim);
    DimensionDistances& slot = dim == 0 ? r.dim0 : r.dim1;
    slot.bottleneck = bottleneck(a, b);
    slot.wasserstein = wasserstein(a, b, q);
  }
  return r;
}

}  // namespace fibrilgeom
