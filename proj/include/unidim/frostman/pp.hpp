#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "../flows/badic.hpp"
#include "../flows/norm.hpp"

namespace unidim {

struct PpViolation {
  VertexId v;
  double r, mass, bound;
};

struct FrostmanPP {
  WeightAssignment weight = WeightAssignment::constant(0);
  double delta = 0;
  double root_weight = 0;
  std::size_t checked = 0;  // (v, r) pairs verified
  std::vector<PpViolation> violations;
  bool flow_ok = false;     // max flow legal and equal to the min cut
};

// w(v) = delta f_0(q_0(v)) / e(q_0(v)) from the max flow on the b-adic cube
// tree with conductances b^{n alpha}, delta = (b+1)^{-k}. Verified exactly on
// every ball inside the kept region: the mass is a step function of r, so
// only r = 1 and the distances in (1, b^N] are checked.
inline FrostmanPP frostman_weight_pp(const RootedWindow& w, double alpha, int b, int N, RngStream rng,
                                     double tol = 1e-9) {
  auto t = build_badic_tree(w, b, N, alpha, rng);
  auto solved = solve_forest(t.tree);
  FrostmanPP out;
  out.flow_ok = solved.ok() && flow_residual(t.tree) <= 1e-9;
  out.delta = std::pow(static_cast<double>(b + 1), -t.dim);
  std::vector<double> wv(w.size(), 0);
  for (VertexId v = 0; v < w.size(); ++v) {
    if (t.leaf_of[v] < 0) continue;
    auto leaf = static_cast<std::size_t>(t.leaf_of[v]);
    wv[v] = out.delta * t.tree.f[leaf] / static_cast<double>(t.count[leaf]);
  }
  out.root_weight = wv[w.root()];
  const double rmax_all = t.side(N);
  const auto* c = w.coords();
  const auto k = static_cast<std::size_t>(t.dim);
  // vertices by first coordinate; in one dimension balls are index ranges
  std::vector<VertexId> order(w.size());
  for (VertexId v = 0; v < w.size(); ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b2) { return c->coords[a * k] < c->coords[b2 * k]; });
  std::vector<std::size_t> pos(w.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  std::vector<std::pair<double, double>> pts;
  for (VertexId v = 0; v < w.size(); ++v) {
    if (t.leaf_of[v] < 0) continue;
    double rmax = rmax_all;
    for (std::size_t j = 0; j < k; ++j) {
      double x = c->coords[v * k + j];
      rmax = std::min({rmax, x - t.lo[j], t.hi[j] - x - 1e-9});
    }
    if (rmax < 1) continue;
    pts.clear();
    if (k == 1) {
      // merge the left and right runs in order of distance
      double x = c->coords[v];
      std::size_t l = pos[v], r = pos[v] + 1;
      for (;;) {
        double dl = l > 0 ? x - c->coords[order[l - 1]] : 1e300;
        double dr = r < order.size() ? c->coords[order[r]] - x : 1e300;
        if (pts.empty()) {
          pts.emplace_back(0.0, wv[v]);
          continue;
        }
        double d = std::min(dl, dr);
        if (d > rmax + kDistEps) break;
        if (dl <= dr) pts.emplace_back(dl, wv[order[--l]]);
        else pts.emplace_back(dr, wv[order[r++]]);
      }
    } else {
      for (auto u : w.ball(v, rmax)) pts.emplace_back(w.distance(v, u), wv[u]);
      std::sort(pts.begin(), pts.end());
    }
    long double mass = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      mass += pts[i].second;
      if (i + 1 < pts.size() && pts[i + 1].first <= pts[i].first + kDistEps) continue;
      double r = std::max(1.0, pts[i].first);
      if (i + 1 < pts.size() && pts[i].first < 1 && pts[i + 1].first <= 1 + kDistEps) continue;
      ++out.checked;
      double bound = std::pow(r, alpha);
      if (static_cast<double>(mass) > bound * (1 + tol)) out.violations.push_back({v, r, static_cast<double>(mass), bound});
    }
  }
  out.weight = WeightAssignment::from_values(std::move(wv));
  return out;
}

}  // namespace unidim
