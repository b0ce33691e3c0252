#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "../coverings/covering.hpp"
#include "../spaces/cantor.hpp"
#include "flow_tree.hpp"

namespace unidim {

// Occupied nested b-adic cubes of a coordinate pattern at levels 0..N. The
// level-n partition is shifted by u + sum_{i<n} a_i b^i with u uniform in
// [0,1)^k and iid digits a_i. Each level-N cube hangs below its own virtual
// top so that its edge, with conductance b^{N alpha}, is part of the tree.
struct BadicTree {
  int b = 2, N = 0, dim = 1;
  double alpha = 0;
  FlowTree tree;                                  // height field holds the level
  std::vector<std::int64_t> count;                // points per cube (e)
  std::vector<std::vector<std::int64_t>> index;   // cube index per coordinate
  std::vector<std::vector<VertexId>> members;     // window points per cube
  std::vector<std::int64_t> leaf_of;              // window vertex -> level-0 cube, -1 outside
  std::vector<double> lo, hi;                     // kept region, per coordinate
  std::vector<double> offset;                     // level-0 shift per coordinate

  int level(std::size_t v) const { return static_cast<int>(tree.height[v]); }
  double side(int n) const { return std::pow(static_cast<double>(b), n); }
  bool inside(const RootedWindow& w, VertexId v, double r) const {
    const auto* c = w.coords();
    for (int j = 0; j < dim; ++j) {
      double x = c->coords[v * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)];
      if (x - r < lo[static_cast<std::size_t>(j)] - kDistEps || x + r >= hi[static_cast<std::size_t>(j)] - kDistEps) return false;
    }
    return true;
  }
};

inline double badic_conductance(int b, double alpha, int n) {
  return std::exp(static_cast<double>(n) * alpha * std::log(static_cast<double>(b)));
}

inline BadicTree build_badic_tree(const RootedWindow& w, int b, int N, double alpha, RngStream rng) {
  const auto* c = w.coords();
  if (!c) throw std::invalid_argument("build_badic_tree: coordinate pattern required");
  if (b < 2) throw ParameterError("build_badic_tree: b must be >= 2");
  if (N < 0) throw ParameterError("build_badic_tree: N must be >= 0");
  if (alpha < 0) throw ParameterError("build_badic_tree: alpha must be >= 0");
  BadicTree t;
  t.b = b;
  t.N = N;
  t.alpha = alpha;
  t.dim = c->dim;
  auto k = static_cast<std::size_t>(c->dim);
  NestedPartition part(b, c->dim, rng.derive("shift"));
  if (N >= part.levels()) throw ParameterError("build_badic_tree: too many levels");
  auto u0 = rng.derive("offset");
  for (std::size_t j = 0; j < k; ++j) t.offset.push_back(u0.uniform());

  auto shift = [&](int n, std::size_t j) { return t.offset[j] + static_cast<double>(part.shift(n, static_cast<int>(j))); };
  auto cube_of = [&](const double* x, int n) {
    std::vector<std::int64_t> q(k);
    double s = t.side(n);
    for (std::size_t j = 0; j < k; ++j) q[j] = static_cast<std::int64_t>(std::floor((x[j] - shift(n, j)) / s));
    return q;
  };

  // kept level-N cubes lie inside [-R, R]^k
  double R = w.horizon(), S = t.side(N);
  t.lo.resize(k);
  t.hi.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    double s = shift(N, j);
    t.lo[j] = s + std::ceil((-R - s) / S - kDistEps) * S;
    t.hi[j] = s + std::floor((R - s) / S + kDistEps) * S;
  }
  std::vector<double> origin(k, 0.0);
  auto root_cube = cube_of(origin.data(), N);
  for (std::size_t j = 0; j < k; ++j) {
    double a = shift(N, j) + static_cast<double>(root_cube[j]) * S;
    if (a < t.lo[j] - kDistEps || a + S > t.hi[j] + kDistEps)
      throw TruncationError("build_badic_tree: window too small for " + std::to_string(N) + " levels");
  }

  std::vector<std::map<std::vector<std::int64_t>, std::size_t>> ids(static_cast<std::size_t>(N) + 1);
  t.leaf_of.assign(w.size(), -1);
  auto add_vertex = [&](std::int64_t parent, int n, std::vector<std::int64_t> q) {
    auto id = t.tree.add(parent, badic_conductance(b, alpha, n), n);
    t.count.push_back(0);
    t.index.push_back(std::move(q));
    t.members.emplace_back();
    return id;
  };
  for (VertexId v = 0; v < w.size(); ++v) {
    const double* x = &c->coords[v * k];
    bool in = true;
    for (std::size_t j = 0; j < k; ++j) in = in && x[j] >= t.lo[j] && x[j] < t.hi[j];
    if (!in) continue;
    std::int64_t parent = -1;
    for (int n = N; n >= 0; --n) {
      auto q = cube_of(x, n);
      auto& m = ids[static_cast<std::size_t>(n)];
      auto it = m.find(q);
      std::size_t id;
      if (it != m.end()) {
        id = it->second;
      } else {
        if (n == N) {
          parent = static_cast<std::int64_t>(t.tree.add(-1, 0, N + 1));
          t.count.push_back(0);
          t.index.emplace_back();
          t.members.emplace_back();
        }
        id = add_vertex(parent, n, q);
        m.emplace(q, id);
      }
      ++t.count[id];
      t.members[id].push_back(v);
      parent = static_cast<std::int64_t>(id);
    }
    t.leaf_of[v] = parent;
  }
  // virtual tops carry the counts of their cube
  for (std::size_t v = 0; v < t.tree.size(); ++v)
    if (t.tree.is_top(v) && !t.tree.children[v].empty()) t.count[v] = t.count[t.tree.children[v][0]];
  return t;
}

// One ball of radius b^n per cut cube, centred at a uniformly chosen point of
// the cube. Points outside the kept region are marked unsafe.
inline Covering cutset_to_covering(const RootedWindow& w, const BadicTree& t, const CutSet& cut, RngStream rng) {
  Covering cov{1, std::vector<double>(w.size(), 0), std::vector<std::uint8_t>(w.size(), 0)};
  for (VertexId v = 0; v < w.size(); ++v) cov.safe[v] = t.leaf_of[v] >= 0;
  for (std::size_t v = 0; v < t.tree.size(); ++v) {
    if (!cut[v] || t.tree.is_top(v)) continue;
    const auto& pts = t.members[v];
    auto pick = rng.derive("pick", static_cast<std::int64_t>(v));
    auto u = pts[static_cast<std::size_t>(pick.below(static_cast<std::int64_t>(pts.size())))];
    cov.radius[u] = std::max(cov.radius[u], t.side(t.level(v)));
  }
  return cov;
}

}  // namespace unidim
