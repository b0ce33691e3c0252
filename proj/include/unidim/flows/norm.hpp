#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "../core/parallel.hpp"
#include "../core/stats.hpp"
#include "../spaces/model.hpp"
#include "badic.hpp"
#include "flow_tree.hpp"

namespace unidim {

using ConductanceFn = std::function<double(const RootedWindow&, VertexId)>;

struct ComponentCheck {
  double value = 0, leaf_flow = 0, cut_flow = 0, cut_capacity = 0;
  bool ok(double tol = 1e-9) const {
    double s = tol * std::max(1.0, cut_capacity);
    return std::abs(leaf_flow - value) <= s && std::abs(cut_capacity - value) <= s && leaf_flow <= cut_flow + s &&
           cut_flow <= cut_capacity + s;
  }
};

// Joint max flow and pruned min cut on every component, with the deterministic
// chain sum_L f = value = sum_cut c and sum_L f <= sum_cut f <= sum_cut c.
struct SolvedForest {
  FlowResult flow;
  CutSet cut;
  std::vector<ComponentCheck> checks;
  bool ok(double tol = 1e-9) const {
    for (const auto& c : checks)
      if (!c.ok(tol)) return false;
    return true;
  }
};

inline SolvedForest solve_forest(FlowTree& t) {
  SolvedForest s;
  s.flow = tree_maxflow(t);
  s.cut = cut_minimality_prune(t, tree_mincut(t, s.flow));
  for (auto top : t.tops()) {
    ComponentCheck c;
    c.value = s.flow.value[top];
    CompensatedSum lf, cf, cc;
    for (auto v : t.component(top)) {
      if (t.is_leaf(v)) lf.add(t.f[v]);
      if (s.cut[v]) {
        cf.add(t.f[v]);
        cc.add(t.c[v]);
      }
    }
    c.leaf_flow = lf.value();
    c.cut_flow = cf.value();
    c.cut_capacity = cc.value();
    s.checks.push_back(c);
  }
  return s;
}

struct FlowNormEstimate {
  std::int64_t n = 0;
  double norm = 0, norm_sem = 0;  // E[f(o) 1{o in L}]
  double cut = 0, cut_sem = 0;    // E[c(o) 1{o in cut}]
  int trials = 0, truncations = 0, chain_violations = 0;
  std::vector<double> per_trial_norm, per_trial_cut;
};

// Root statistics of the height <= n truncation; a window of radius 2n + 2
// decides the root's component.
inline FlowNormEstimate flow_norm_estimate(const SpaceModel& model, std::int64_t n, int trials,
                                           const ConductanceFn& conductance, int jobs = 1) {
  std::vector<double> fo(static_cast<std::size_t>(trials), 0), co(fo.size(), 0);
  std::vector<std::uint8_t> trunc(fo.size(), 0), bad(fo.size(), 0);
  parallel_for(fo.size(), jobs, [&](std::size_t i) {
    try {
      auto w = model.sample(i, static_cast<double>(2 * n + 2));
      if (w.truncation_events() > 0) {
        trunc[i] = 1;
        return;
      }
      auto t = truncate_forest(w, n, [&](VertexId v) { return conductance(w, v); });
      auto s = solve_forest(t);
      bad[i] = !s.ok();
      auto root = static_cast<std::int64_t>(w.root());
      // a root above height n contributes zero
      for (std::size_t v = 0; v < t.size(); ++v) {
        if (t.source[v] != root || t.is_top(v)) continue;
        if (t.is_leaf(v)) fo[i] = t.f[v];
        if (s.cut[v]) co[i] = t.c[v];
      }
    } catch (const TruncationError&) {
      trunc[i] = 1;
    }
  });
  FlowNormEstimate e;
  e.n = n;
  for (std::size_t i = 0; i < fo.size(); ++i) {
    if (trunc[i]) {
      ++e.truncations;
      continue;
    }
    e.chain_violations += bad[i];
    e.per_trial_norm.push_back(fo[i]);
    e.per_trial_cut.push_back(co[i]);
  }
  e.trials = static_cast<int>(e.per_trial_norm.size());
  e.norm = mean_of(e.per_trial_norm);
  e.norm_sem = sem_of(e.per_trial_norm);
  e.cut = mean_of(e.per_trial_cut);
  e.cut_sem = sem_of(e.per_trial_cut);
  return e;
}

// Root statistics of the b-adic flow weighted by the point counts:
// ||f|| = E[f(q_0(0)) / e_0] and c(cut) = E[sum_n b^{n alpha} / e_n 1{q_n(0) in cut}].
struct BadicNormEstimate {
  double norm = 0, norm_sem = 0, cut = 0, cut_sem = 0;
  int trials = 0, truncations = 0, chain_violations = 0;
};

inline BadicNormEstimate badic_flow_norm(const SpaceModel& model, int b, int N, double alpha, int trials,
                                         std::uint64_t seed, int jobs = 1) {
  std::vector<double> fo(static_cast<std::size_t>(trials), 0), co(fo.size(), 0);
  std::vector<std::uint8_t> trunc(fo.size(), 0), bad(fo.size(), 0);
  double reach = 2 * std::pow(static_cast<double>(b), N) + 2;
  parallel_for(fo.size(), jobs, [&](std::size_t i) {
    try {
      auto w = model.sample(i, reach);
      auto t = build_badic_tree(w, b, N, alpha, RngStream(seed).derive("badic", static_cast<std::int64_t>(i)));
      auto s = solve_forest(t.tree);
      bad[i] = !s.ok();
      auto v = static_cast<std::size_t>(t.leaf_of[w.root()]);
      fo[i] = t.tree.f[v] / static_cast<double>(t.count[v]);
      CompensatedSum cs;
      for (; !t.tree.is_top(v); v = static_cast<std::size_t>(t.tree.parent[v]))
        if (s.cut[v]) cs.add(t.tree.c[v] / static_cast<double>(t.count[v]));
      co[i] = cs.value();
    } catch (const TruncationError&) {
      trunc[i] = 1;
    }
  });
  BadicNormEstimate e;
  std::vector<double> a, c;
  for (std::size_t i = 0; i < fo.size(); ++i) {
    if (trunc[i]) {
      ++e.truncations;
      continue;
    }
    e.chain_violations += bad[i];
    a.push_back(fo[i]);
    c.push_back(co[i]);
  }
  e.trials = static_cast<int>(a.size());
  e.norm = mean_of(a);
  e.norm_sem = sem_of(a);
  e.cut = mean_of(c);
  e.cut_sem = sem_of(c);
  return e;
}

}  // namespace unidim
