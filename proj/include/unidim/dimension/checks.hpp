#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "unidim/spaces/pwit.hpp"

namespace unidim {

// Smallest C with C x^α + (1-x)^α >= 1/2 on [0, 1].
inline double regtree_constant(double alpha) {
  if (alpha < 0) throw std::invalid_argument("regtree_constant: alpha < 0");
  if (alpha == 0) return 0.5;
  auto need = [alpha](double x) { return (0.5 - std::pow(1 - x, alpha)) / std::pow(x, alpha); };
  double best = -INFINITY, bx = 1;
  const int n = 4000;
  for (int i = 1; i <= n; ++i) {
    double x = double(i) / n;
    if (double v = need(x); v > best) best = v, bx = x;
  }
  double lo = std::max(1e-9, bx - 1.0 / n), hi = std::min(1.0, bx + 1.0 / n);
  for (int it = 0; it < 100; ++it) {
    double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (need(m1) < need(m2)) lo = m1;
    else hi = m2;
  }
  return std::max({best, need((lo + hi) / 2), 0.0});
}

// Complete tree of given depth with unit edges: the root has `root_children`
// children, every other internal vertex `children`.
inline LengthTree regular_tree(int root_children, int children, int depth) {
  LengthTree t;
  t.parent.push_back(-1);
  t.length.push_back(0);
  t.depth.push_back(0);
  t.children.emplace_back();
  for (std::size_t i = 0; i < t.parent.size(); ++i) {
    if (t.depth[i] == depth) continue;
    for (int c = 0; c < (i == 0 ? root_children : children); ++c) {
      auto id = t.parent.size();
      t.parent.push_back(static_cast<std::int64_t>(i));
      t.length.push_back(1);
      t.depth.push_back(t.depth[i] + 1);
      t.children.emplace_back();
      t.children[i].push_back(id);
    }
  }
  return t;
}

struct RegtreeViolation {
  double r;
  double weight;
  double limit;
};

struct RegtreeReport {
  double C = 0;
  double r_checked = 0;  // conclusion verified for all r < r_checked
  std::vector<RegtreeViolation> violations;
};

// Checks w(N'_r(o)) >= r^α with w(u) = C Σ_{v~u} d'(u,v)^α for every r below
// the distance to the deepest (incomplete) level of the tree.
inline RegtreeReport regtree_weight_check(const LengthTree& t, double alpha, double C) {
  const auto n = t.parent.size();
  int maxd = *std::max_element(t.depth.begin(), t.depth.end());
  for (std::size_t v = 1; v < n; ++v)
    if (t.length[v] < 1) throw std::invalid_argument("regtree check: edge lengths must be >= 1");
  for (std::size_t v = 0; v < n; ++v) {
    if (t.depth[v] == maxd) continue;
    auto deg = t.children[v].size() + (v == 0 ? 0 : 1);
    if (deg < (v == 0 ? 2u : 3u)) throw std::invalid_argument("regtree check: degree precondition fails");
  }
  if (C + 1e-12 < regtree_constant(alpha)) throw std::invalid_argument("regtree check: C below the admissible constant");
  std::vector<double> dist(n, 0), w(n, 0);
  for (std::size_t v = 1; v < n; ++v) dist[v] = dist[static_cast<std::size_t>(t.parent[v])] + t.length[v];
  for (std::size_t v = 1; v < n; ++v) {
    double x = C * std::pow(t.length[v], alpha);
    w[v] += x;
    w[static_cast<std::size_t>(t.parent[v])] += x;
  }
  RegtreeReport rep;
  rep.C = C;
  rep.r_checked = INFINITY;
  std::vector<std::pair<double, double>> dw;
  for (std::size_t v = 0; v < n; ++v) {
    if (t.depth[v] == maxd) rep.r_checked = std::min(rep.r_checked, dist[v]);
    else dw.emplace_back(dist[v], w[v]);
  }
  std::sort(dw.begin(), dw.end());
  // the ball is constant on [d_i, d_{i+1}); the supremum of r^α there is d_{i+1}^α
  double mass = 0;
  for (std::size_t i = 0; i < dw.size(); ++i) {
    mass += dw[i].second;
    if (i + 1 < dw.size() && dw[i + 1].first == dw[i].first) continue;
    double next = i + 1 < dw.size() ? std::min(dw[i + 1].first, rep.r_checked) : rep.r_checked;
    if (dw[i].first >= rep.r_checked) break;
    double lim = std::pow(next, alpha);
    if (mass < lim * (1 - 1e-12)) rep.violations.push_back({next, mass, lim});
  }
  return rep;
}

// Lengths replaced by max(1, length).
inline LengthTree with_unit_floor(LengthTree t) {
  for (std::size_t v = 1; v < t.length.size(); ++v) t.length[v] = std::max(1.0, t.length[v]);
  return t;
}

struct InverseTimeReport {
  double C = 0;
  std::int64_t crossing = 0;   // smallest k0 with S^{-1}(k) <= ψ(k) for all k in [k0, k_max]
  bool violated_at_kmax = false;
};

// S^{-1}(k) = min{m : S_m >= k} for nonnegative jumps X_1, X_2, ...;
// ψ(k) = C k^t log log k, checked for integer k in [16, k_max].
inline InverseTimeReport inverse_time_bound_check(std::span<const double> jumps, double t, double C,
                                                  std::int64_t k_max) {
  InverseTimeReport rep;
  rep.C = C;
  rep.crossing = 16;
  auto psi = [&](std::int64_t k) { return C * std::pow(double(k), t) * std::log(std::log(double(k))); };
  // S^{-1} equals m on the integers of (S_{m-1}, S_m]; ψ increases, so the
  // violating k of each such run form a prefix found by bisection
  double prev = 0;
  std::int64_t m = 0;
  for (double x : jumps) {
    ++m;
    double S = prev + x;
    auto lo = std::max<std::int64_t>(16, static_cast<std::int64_t>(std::floor(prev)) + 1);
    auto hi = std::min<std::int64_t>(k_max, static_cast<std::int64_t>(std::floor(S)));
    prev = S;
    if (lo > hi) {
      if (lo > k_max) break;
      continue;
    }
    if (double(m) > psi(lo)) {
      std::int64_t a = lo, b = hi;  // last k in [a, b] with m > ψ(k)
      while (a < b) {
        auto mid = a + (b - a + 1) / 2;
        if (double(m) > psi(mid)) a = mid;
        else b = mid - 1;
      }
      rep.crossing = a + 1;
      if (a == k_max) rep.violated_at_kmax = true;
    }
    if (hi == k_max) return rep;
  }
  if (prev < double(k_max)) throw std::invalid_argument("inverse time check: jump sequence too short");
  return rep;
}

}  // namespace unidim
