#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "unidim/core/finite_space.hpp"
#include "unidim/core/rng.hpp"
#include "unidim/core/window.hpp"

namespace unidim {

// Radii in {0} ∪ [M, ∞); `safe` marks vertices whose coverage is decidable.
struct Covering {
  double M = 1;
  std::vector<double> radius;
  std::vector<std::uint8_t> safe;

  std::size_t size() const { return radius.size(); }
};

struct WeightedBall {
  VertexId center;
  double radius;
  double cost;
};

struct WeightedBallCollection {
  std::vector<WeightedBall> entries;

  void add(VertexId c, double r, double cost) {
    if (!(cost > 0)) throw std::invalid_argument("ball collection: cost must be positive");
    entries.push_back({c, r, cost});
  }
  double max_radius() const {
    double m = 0;
    for (const auto& e : entries) m = std::max(m, e.radius);
    return m;
  }
  double total_cost(double alpha) const {
    double s = 0;
    for (const auto& e : entries) s += e.cost * std::pow(e.radius, alpha);
    return s;
  }
};

// Vertices within distance r of v, with no horizon check.
inline std::vector<VertexId> vertices_near(const RootedWindow& w, VertexId v, double r) {
  std::vector<VertexId> out;
  if (w.graph()) {
    auto d = w.graph_distances(v, r);
    for (VertexId u = 0; u < w.size(); ++u)
      if (d[u] <= r + kDistEps) out.push_back(u);
    return out;
  }
  for (VertexId u = 0; u < w.size(); ++u)
    if (w.distance(u, v) <= r + kDistEps) out.push_back(u);
  return out;
}

inline std::vector<VertexId> vertices_near(const FiniteMetricSpace& s, VertexId v, double r) {
  std::vector<VertexId> out;
  for (VertexId u = 0; u < s.n; ++u)
    if (s.distance(u, v) <= r + kDistEps) out.push_back(u);
  return out;
}

enum class CubeRule { LexicographicLeast, WeightProportional };

namespace detail {

inline const CoordMetric& require_cube_pattern(const RootedWindow& w) {
  const auto* c = w.coords();
  if (!c) throw std::invalid_argument("cube covering: window is not a coordinate pattern");
  if (c->dim > 1 && c->norm != Norm::Sup) throw std::invalid_argument("cube covering: needs the sup metric");
  if (c->dim == 1 && c->norm == Norm::SqrtTime) throw std::invalid_argument("cube covering: unsupported norm");
  return *c;
}

}  // namespace detail

// Cubes [0,r)^k + U + r z with U uniform in (-r, 0]^k; one point per occupied
// cube gets radius r.
inline Covering cube_covering(const RootedWindow& w, double r, CubeRule rule, RngStream rng,
                              const WeightAssignment& weight, std::vector<double> shift) {
  const auto& c = detail::require_cube_pattern(w);
  if (r < 1) throw std::invalid_argument("cube covering: r must be >= 1");
  const int k = c.dim;
  if (shift.size() != static_cast<std::size_t>(k)) throw std::invalid_argument("cube covering: shift dimension");
  const double R = w.horizon();
  std::vector<double> rootc(c.coords.begin() + static_cast<long>(w.root()) * k,
                            c.coords.begin() + static_cast<long>(w.root() + 1) * k);

  std::map<std::vector<std::int64_t>, std::vector<VertexId>> cells;
  Covering cov;
  cov.M = r;
  cov.radius.assign(w.size(), 0);
  cov.safe.assign(w.size(), 0);
  for (VertexId v = 0; v < w.size(); ++v) {
    std::vector<std::int64_t> z(static_cast<std::size_t>(k));
    bool inside = true;
    for (int i = 0; i < k; ++i) {
      double x = c.coords[v * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)];
      auto zi = static_cast<std::int64_t>(std::floor((x - shift[static_cast<std::size_t>(i)]) / r));
      z[static_cast<std::size_t>(i)] = zi;
      double lo = shift[static_cast<std::size_t>(i)] + r * static_cast<double>(zi);
      // cube must lie inside the window box for its occupancy to be exact
      inside = inside && lo >= rootc[static_cast<std::size_t>(i)] - R - kDistEps &&
               lo + r <= rootc[static_cast<std::size_t>(i)] + R + kDistEps;
    }
    cov.safe[v] = inside;
    cells[z].push_back(v);
  }
  for (auto& [z, pts] : cells) {
    VertexId pick = pts.front();
    auto cell_rng = rng.derive("cell");
    for (auto zi : z) cell_rng = cell_rng.derive("", static_cast<std::uint64_t>(zi));
    if (rule == CubeRule::LexicographicLeast) {
      auto less = [&](VertexId a, VertexId b) {
        for (int i = 0; i < k; ++i) {
          double xa = c.coords[a * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)];
          double xb = c.coords[b * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)];
          if (xa != xb) return xa < xb;
        }
        return false;
      };
      pick = *std::min_element(pts.begin(), pts.end(), less);
    } else {
      double total = 0;
      for (auto v : pts) total += weight[v];
      if (total > 0) {
        double t = cell_rng.uniform() * total;
        for (auto v : pts) {
          pick = v;
          t -= weight[v];
          if (t < 0) break;
        }
      }
    }
    cov.radius[pick] = r;
  }
  return cov;
}

inline Covering cube_covering(const RootedWindow& w, double r, CubeRule rule, RngStream rng,
                              const WeightAssignment& weight = WeightAssignment::constant(1)) {
  const auto& c = detail::require_cube_pattern(w);
  std::vector<double> shift(static_cast<std::size_t>(c.dim));
  for (auto& u : shift) u = -r * rng.uniform();
  return cube_covering(w, r, rule, rng.derive("pick"), weight, std::move(shift));
}

struct SelectionOptions {
  bool all_or_nothing = false;
};

// Select v with probability 1 ∧ n^{-β} w(v); selected points get radius n,
// points with no selection within n get radius 1 (or n in the all-or-nothing
// variant).
inline Covering selection_covering(const RootedWindow& w, const WeightAssignment& weight, double n, double beta,
                                   RngStream rng, SelectionOptions opt = {}) {
  if (n < 1) throw std::invalid_argument("selection covering: n must be >= 1");
  if (beta < 0) throw std::invalid_argument("selection covering: beta must be >= 0");
  Covering cov;
  cov.M = 1;
  cov.radius.assign(w.size(), 0);
  cov.safe.assign(w.size(), 0);
  std::vector<std::uint8_t> sel(w.size(), 0);
  double scale = std::pow(n, -beta);
  for (VertexId v = 0; v < w.size(); ++v) sel[v] = rng.derive("sel", v).uniform() < std::min(1.0, scale * weight[v]);
  for (VertexId v = 0; v < w.size(); ++v) {
    cov.safe[v] = w.ball_is_safe(v, n);
    if (sel[v]) {
      cov.radius[v] = n;
      continue;
    }
    if (!cov.safe[v]) continue;
    bool near = false;
    for (auto u : w.ball(v, n))
      if (sel[u]) {
        near = true;
        break;
      }
    if (!near) cov.radius[v] = opt.all_or_nothing ? n : 1;
  }
  return cov;
}

// Root-only variant: decides radius(root) from N_n(root) alone.
inline double selection_root_radius(const RootedWindow& w, const WeightAssignment& weight, double n, double beta,
                                    RngStream rng, SelectionOptions opt = {}) {
  if (!w.ball_is_safe(w.root(), n)) throw TruncationError("selection covering: horizon below n");
  double scale = std::pow(n, -beta);
  auto selected = [&](VertexId v) { return rng.derive("sel", v).uniform() < std::min(1.0, scale * weight[v]); };
  if (selected(w.root())) return n;
  for (auto u : w.ball(w.root(), n))
    if (selected(u)) return 0;
  return opt.all_or_nothing ? n : 1;
}

namespace detail {

template <class Space>
Covering rounding_impl(const Space& s, std::vector<std::uint8_t> safe, const WeightedBallCollection& coll, double a,
                       double M, RngStream rng) {
  if (a < 0) throw std::invalid_argument("rounding covering: a must be >= 0");
  Covering cov;
  cov.M = M;
  cov.radius.assign(s.size(), 0);
  cov.safe = std::move(safe);
  std::vector<std::uint8_t> covered(s.size(), 0);
  for (std::size_t i = 0; i < coll.entries.size(); ++i) {
    const auto& e = coll.entries[i];
    if (e.radius < M - kDistEps) throw std::invalid_argument("rounding covering: entry radius below M");
    if (rng.derive("inc", i).uniform() < std::min(1.0, a * e.cost)) {
      cov.radius[e.center] = std::max(cov.radius[e.center], e.radius);
      for (auto u : vertices_near(s, e.center, e.radius)) covered[u] = 1;
    }
  }
  for (VertexId v = 0; v < s.size(); ++v)
    if (!covered[v] && cov.radius[v] == 0) cov.radius[v] = M;
  return cov;
}

}  // namespace detail

inline Covering rounding_covering(const FiniteMetricSpace& s, const WeightedBallCollection& coll, double a, double M,
                                  RngStream rng) {
  return detail::rounding_impl(s, std::vector<std::uint8_t>(s.n, 1), coll, a, M, rng);
}

inline Covering rounding_covering(const RootedWindow& w, const WeightedBallCollection& coll, double a, double M,
                                  RngStream rng) {
  std::vector<std::uint8_t> safe(w.size());
  double reach = std::max(M, coll.max_radius());
  for (VertexId v = 0; v < w.size(); ++v) safe[v] = w.ball_is_safe(v, reach);
  return detail::rounding_impl(w, std::move(safe), coll, a, M, rng);
}

struct CoveringReport {
  bool valid = true;
  std::vector<VertexId> uncovered;
  std::vector<VertexId> bad_radius;  // radius in (0, M)
  std::map<int, std::size_t> multiplicity;  // safe-vertex histogram
  int max_multiplicity = 0;
};

template <class Space>
CoveringReport covering_validate(const Space& s, const Covering& cov) {
  if (cov.radius.size() != s.size()) throw std::invalid_argument("covering_validate: size mismatch");
  CoveringReport rep;
  std::vector<int> mult(s.size(), 0);
  for (VertexId u = 0; u < s.size(); ++u) {
    double r = cov.radius[u];
    if (r == 0) continue;
    if (r < cov.M - kDistEps) rep.bad_radius.push_back(u);
    for (auto v : vertices_near(s, u, r)) ++mult[v];
  }
  for (VertexId v = 0; v < s.size(); ++v) {
    if (!cov.safe.empty() && !cov.safe[v]) continue;
    ++rep.multiplicity[mult[v]];
    rep.max_multiplicity = std::max(rep.max_multiplicity, mult[v]);
    if (mult[v] == 0) rep.uncovered.push_back(v);
  }
  rep.valid = rep.uncovered.empty() && rep.bad_radius.empty();
  return rep;
}

}  // namespace unidim
