#include <gtest/gtest.h>

#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "unidim/core.hpp"
#include "unidim/coverings.hpp"
#include "unidim/flows.hpp"
#include "unidim/spaces.hpp"
#include "flow_oracle.hpp"

using namespace unidim;
using unidim::testing::augmenting_path_value;
using unidim::testing::random_tree;

namespace {

bool minimal(const FlowTree& t, const CutSet& cut) {
  if (!is_cutset(t, cut)) return false;
  for (std::size_t v = 0; v < t.size(); ++v) {
    if (!cut[v]) continue;
    auto c2 = cut;
    c2[v] = 0;
    if (is_cutset(t, c2)) return false;
  }
  return true;
}

FlowTree path_tree(int edges, double c) {
  FlowTree t;
  t.add(-1, 0, edges);
  for (int i = 0; i < edges; ++i) t.add(i, c, edges - 1 - i);
  return t;
}

FlowTree binary_tree(int depth, const std::function<double(int)>& cap_at_height) {
  FlowTree t;
  t.add(-1, 0, depth);
  std::vector<std::size_t> layer{0};
  for (int d = depth - 1; d >= 0; --d) {
    std::vector<std::size_t> next;
    for (auto v : layer)
      for (int j = 0; j < 2; ++j) next.push_back(t.add(static_cast<std::int64_t>(v), cap_at_height(d), d));
    layer = next;
  }
  return t;
}

}  // namespace

TEST(TreeMaxflow, SingleEdge) {
  FlowTree t;
  t.add(-1, 0, 1);
  t.add(0, 2.5, 0);
  auto fr = tree_maxflow(t);
  EXPECT_DOUBLE_EQ(fr.value[0], 2.5);
  auto cut = tree_mincut(t, fr);
  EXPECT_EQ(cut, (CutSet{0, 1}));
}

TEST(TreeMaxflow, TopIsSinkForTwoLeaves) {
  FlowTree t;
  t.add(-1, 0, 1);
  t.add(0, 1, 0);
  t.add(0, 1, 0);
  EXPECT_DOUBLE_EQ(tree_maxflow(t).value[0], 2);
}

TEST(TreeMaxflow, RootEdgeOverTwoChildren) {
  FlowTree t;
  t.add(-1, 0, 2);
  t.add(0, 3, 1);
  t.add(1, 1, 0);
  t.add(1, 1, 0);
  auto fr = tree_maxflow(t);
  EXPECT_DOUBLE_EQ(fr.value[0], 2);
  EXPECT_DOUBLE_EQ(augmenting_path_value(t, 0), 2);
  EXPECT_DOUBLE_EQ(t.f[1], 2);
  auto cut = tree_mincut(t, fr);
  EXPECT_EQ(cut, (CutSet{0, 0, 1, 1}));
}

TEST(TreeMaxflow, ProportionalScaling) {
  FlowTree t;
  t.add(-1, 0, 2);
  t.add(0, 1.5, 1);
  t.add(1, 1, 0);
  t.add(1, 2, 0);
  tree_maxflow(t);
  EXPECT_DOUBLE_EQ(t.f[1], 1.5);
  EXPECT_DOUBLE_EQ(t.f[2], 0.5);
  EXPECT_DOUBLE_EQ(t.f[3], 1.0);
}

TEST(TreeMincut, BinaryTreeLevelSums) {
  // min cut conductance = least level sum; ties go to the higher level
  for (double growth : {1.0, 2.0, 3.0}) {
    const int depth = 5;
    auto t = binary_tree(depth, [&](int h) { return std::pow(growth, -h); });
    auto fr = tree_maxflow(t);
    auto cut = tree_mincut(t, fr);
    double best = 1e300;
    int best_h = -1;
    for (int h = depth - 1; h >= 0; --h) {
      double sum = std::pow(2.0, depth - h) * std::pow(growth, -h);
      if (sum < best - 1e-12) best = sum, best_h = h;
    }
    EXPECT_NEAR(fr.value[0], best, 1e-12) << growth;
    for (std::size_t v = 1; v < t.size(); ++v) EXPECT_EQ(cut[v] != 0, t.height[v] == best_h) << growth;
  }
  // constant conductance: cut just below the top; capacity growing upward: leaves
  auto uni = binary_tree(4, [](int) { return 1.0; });
  auto ucut = tree_mincut(uni, tree_maxflow(uni));
  for (std::size_t v = 1; v < uni.size(); ++v) EXPECT_EQ(ucut[v] != 0, uni.height[v] == 3);
  auto leafy = binary_tree(4, [](int h) { return std::pow(3.0, -h); });
  auto lcut = tree_mincut(leafy, tree_maxflow(leafy));
  for (std::size_t v = 1; v < leafy.size(); ++v) EXPECT_EQ(lcut[v] != 0, leafy.height[v] == 3);
  auto small = binary_tree(4, [](int h) { return std::pow(3.0, h); });
  auto scut = tree_mincut(small, tree_maxflow(small));
  for (std::size_t v = 1; v < small.size(); ++v) EXPECT_EQ(scut[v] != 0, small.height[v] == 0);
}

TEST(TreeMaxflow, MatchesAugmentingPathsOnRandomTrees) {
  RngStream rng(17);
  for (int i = 0; i < 1000; ++i) {
    auto t = random_tree(rng.derive("tree", i), 1 + static_cast<int>(rng.below(60)));
    auto fr = tree_maxflow(t);
    double oracle = augmenting_path_value(t, 0);
    EXPECT_NEAR(fr.value[0], oracle, 1e-9 * std::max(1.0, oracle)) << i;
    EXPECT_LE(flow_residual(t), 1e-9);
    auto cut = tree_mincut(t, fr);
    EXPECT_TRUE(is_cutset(t, cut));
    auto pruned = cut_minimality_prune(t, cut);
    EXPECT_EQ(pruned, cut) << "min cut is already minimal";
    EXPECT_NEAR(cut_conductance(t, pruned), oracle, 1e-9 * std::max(1.0, oracle)) << i;
    if (t.size() <= 21) {
      EXPECT_TRUE(minimal(t, pruned)) << i;
    }
  }
}

TEST(CutPrune, PathPrunesToTopEdge) {
  auto t = path_tree(6, 1);
  CutSet all(t.size(), 1);
  all[0] = 0;
  auto p = cut_minimality_prune(t, all);
  EXPECT_EQ(std::count(p.begin(), p.end(), 1), 1);
  EXPECT_EQ(p[1], 1);
}

TEST(CutPrune, RandomCutsBecomeMinimal) {
  RngStream rng(23);
  for (int i = 0; i < 500; ++i) {
    auto t = random_tree(rng.derive("tree", i), 2 + static_cast<int>(rng.below(18)));
    CutSet cut(t.size(), 0);
    for (std::size_t v = 1; v < t.size(); ++v) cut[v] = t.children[v].empty() || rng.uniform() < 0.4;
    auto p = cut_minimality_prune(t, cut);
    EXPECT_TRUE(minimal(t, p)) << i;
    EXPECT_EQ(cut_minimality_prune(t, p), p);
    EXPECT_LE(cut_conductance(t, p), cut_conductance(t, cut) + 1e-12);
    for (std::size_t v = 0; v < t.size(); ++v) EXPECT_LE(p[v], cut[v]);
  }
}

TEST(CutPrune, RejectsNonCuts) {
  auto t = path_tree(3, 1);
  EXPECT_THROW(cut_minimality_prune(t, CutSet(t.size(), 0)), std::invalid_argument);
}

TEST(EdgeList, RoundTrip) {
  auto t = random_tree(RngStream(4), 30);
  tree_maxflow(t);
  std::stringstream ss;
  write_edge_list(ss, t);
  auto u = read_edge_list(ss);
  ASSERT_EQ(u.size(), t.size());
  EXPECT_EQ(u.parent, t.parent);
  EXPECT_EQ(u.c, t.c);
  EXPECT_EQ(u.f, t.f);
  std::istringstream bad("1 0 2.0\n1 0 3.0\n");
  EXPECT_THROW(read_edge_list(bad), std::invalid_argument);
  std::istringstream cyc("1 2 1\n2 1 1\n");
  EXPECT_THROW(read_edge_list(cyc), std::invalid_argument);
  std::istringstream plain("1 0 1.5\n2 0 2.5\n");
  auto p = read_edge_list(plain);
  EXPECT_TRUE(p.f.empty());
  EXPECT_DOUBLE_EQ(tree_maxflow(p).value[0], 4);
}

TEST(TruncateForest, PathGivesOneComponent) {
  GeneralizedCanopy path(LevelSequence::constant(0), 1, std::int64_t{0});
  auto w = path.sample(0, 10);
  auto t = truncate_forest(w, 4, [](VertexId) { return 1.0; });
  auto tops = t.tops();
  ASSERT_EQ(tops.size(), 1u);
  EXPECT_EQ(t.height[tops[0]], 4);
  EXPECT_EQ(t.size(), 5u);
}

TEST(TruncateForest, CanopyComponentsAreFullSubtrees) {
  GeneralizedCanopy c(LevelSequence::linear(1), 5, std::int64_t{0});
  auto w = c.sample(0, 12);
  const std::int64_t n = 3;
  auto t = truncate_forest(w, n, [](VertexId) { return 1.0; });
  for (auto top : t.tops()) {
    EXPECT_EQ(t.height[top], n);
    EXPECT_EQ(w.heights()[static_cast<std::size_t>(t.source[top])], n);
    EXPECT_EQ(t.component(top).size(), (std::size_t{1} << (n + 1)) - 1);
    auto fr = tree_maxflow(t);
    EXPECT_DOUBLE_EQ(fr.value[top], 2);  // two unit edges below the top
  }
  auto root = std::find(t.source.begin(), t.source.end(), static_cast<std::int64_t>(w.root()));
  EXPECT_NE(root, t.source.end());
}

TEST(TruncateForest, EgwComponentCountMatchesTraversal) {
  EternalGW egw(OffspringDistribution::poisson(1), 3);
  const std::int64_t n = 3;
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    auto w = egw.sample(trial, 12);
    auto t = truncate_forest(w, n, [](VertexId) { return 1.0; });
    // oracle: recursive heights, then distinct tops of decidable vertices
    auto par = w.parents();
    std::vector<std::vector<VertexId>> kids(w.size());
    for (VertexId v = 0; v < w.size(); ++v)
      if (par[v] >= 0) kids[static_cast<std::size_t>(par[v])].push_back(v);
    std::function<std::int64_t(VertexId)> height = [&](VertexId v) {
      std::int64_t h = 0;
      for (auto c : kids[v]) h = std::max(h, height(c) + 1);
      return h;
    };
    std::set<VertexId> tops, singles;
    for (VertexId v = 0; v < w.size(); ++v) {
      if (height(v) > n || w.dist_to_root(v) + n + 1 > w.horizon() || par[v] < 0) continue;
      auto p = static_cast<VertexId>(par[v]);
      if (height(p) <= n) continue;
      (kids[v].empty() ? singles : tops).insert(v);
    }
    EXPECT_EQ(t.tops().size(), tops.size() + singles.size()) << trial;
    for (auto top : t.tops()) EXPECT_LE(t.height[top], std::max<std::int64_t>(n, 1));
  }
}

TEST(FlowNorm, PathRootLeafIndicator) {
  auto unit = [](const RootedWindow&, VertexId) { return 1.0; };
  GeneralizedCanopy leaf(LevelSequence::constant(0), 1, std::int64_t{0});
  auto a = flow_norm_estimate(leaf, 3, 5, unit);
  EXPECT_DOUBLE_EQ(a.norm, 1);
  EXPECT_DOUBLE_EQ(a.cut, 0);  // the cut sits at the top edge
  GeneralizedCanopy high(LevelSequence::constant(0), 1, std::int64_t{2});
  auto b = flow_norm_estimate(high, 3, 5, unit);
  EXPECT_DOUBLE_EQ(b.norm, 0);
  EXPECT_EQ(b.chain_violations, 0);
}

TEST(FlowNorm, EgwNormEqualsCutAndChainHolds) {
  EternalGW egw(OffspringDistribution::poisson(1), 8);
  // an isomorphism-invariant conductance keeps the root statistics balanced
  auto cond = [](const RootedWindow& w, VertexId v) {
    std::size_t kids = 0;
    for (auto p : w.parents()) kids += p == static_cast<std::int64_t>(v);
    return 0.3 + 1.0 / static_cast<double>(1 + kids);
  };
  for (std::int64_t n : {1, 3}) {
    auto e = flow_norm_estimate(egw, n, 4000, cond);
    EXPECT_EQ(e.chain_violations, 0);
    EXPECT_EQ(e.truncations, 0);
    double se = std::hypot(e.norm_sem, e.cut_sem);
    EXPECT_NEAR(e.norm, e.cut, 4 * se) << n;
  }
}

TEST(FlowNorm, CanopyUnitConductanceValue) {
  // every component carries two units, so both root statistics equal
  // 2 * P(root level 0) / 2^n in expectation; check the chain and equality
  GeneralizedCanopy c(LevelSequence::linear(1), 2);
  auto unit = [](const RootedWindow&, VertexId) { return 1.0; };
  auto e = flow_norm_estimate(c, 2, 4000, unit);
  EXPECT_EQ(e.chain_violations, 0);
  EXPECT_NEAR(e.norm, e.cut, 4 * std::hypot(e.norm_sem, e.cut_sem));
}

TEST(FlowNorm, NonincreasingInTruncationLevel) {
  EternalGW egw(OffspringDistribution::poisson(1), 12);
  auto unit = [](const RootedWindow&, VertexId) { return 1.0; };
  double prev = 1e9, prev_sem = 0;
  for (std::int64_t n : {1, 2, 4, 8}) {
    auto e = flow_norm_estimate(egw, n, 3000, unit);
    EXPECT_LE(e.norm, prev + 3 * std::hypot(e.norm_sem, prev_sem)) << n;
    prev = e.norm;
    prev_sem = e.norm_sem;
  }
}

TEST(Badic, SinglePointIsAChain) {
  auto w = RootedWindow::from_coords(1, {0.0}, Norm::Sup, 0, 200);
  auto t = build_badic_tree(w, 2, 5, 1.0, RngStream(3));
  EXPECT_EQ(t.tree.size(), 7u);  // six cubes plus the virtual top
  EXPECT_EQ(t.tree.tops().size(), 1u);
  auto fr = tree_maxflow(t.tree);
  EXPECT_DOUBLE_EQ(fr.value[t.tree.tops()[0]], 1);
}

TEST(Badic, LatticeCountsArePowers) {
  auto w = Lattice(1).sample(0, 300);
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto t = build_badic_tree(w, 2, 6, 1.0, RngStream(s));
    for (std::size_t v = 0; v < t.tree.size(); ++v) {
      if (t.tree.is_top(v)) continue;
      EXPECT_EQ(t.count[v], std::int64_t{1} << t.level(v));
      EXPECT_DOUBLE_EQ(t.tree.c[v], std::pow(2.0, t.level(v)));
    }
    auto root_leaf = static_cast<std::size_t>(t.leaf_of[w.root()]);
    EXPECT_EQ(t.count[root_leaf], 1);
  }
}

TEST(Badic, NestingAndTruncation) {
  auto w = Lattice(2).sample(0, 40);
  auto t = build_badic_tree(w, 3, 2, 0.5, RngStream(7));
  for (std::size_t v = 0; v < t.tree.size(); ++v) {
    if (t.tree.is_top(v) || t.tree.is_top(static_cast<std::size_t>(t.tree.parent[v]))) continue;
    auto p = static_cast<std::size_t>(t.tree.parent[v]);
    EXPECT_EQ(t.level(p), t.level(v) + 1);
    for (auto u : t.members[v]) EXPECT_NE(std::find(t.members[p].begin(), t.members[p].end(), u), t.members[p].end());
  }
  auto small = Lattice(1).sample(0, 5);
  EXPECT_THROW(build_badic_tree(small, 2, 4, 1, RngStream(1)), TruncationError);
}

TEST(Badic, CutsetCoveringsAreValid) {
  WalkImage img(0.7, 5);
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    auto w = img.sample(trial, 600);
    auto t = build_badic_tree(w, 2, 7, 0.6, RngStream(trial));
    auto fr = tree_maxflow(t.tree);
    EXPECT_LE(flow_residual(t.tree), 1e-9);
    auto cut = cut_minimality_prune(t.tree, tree_mincut(t.tree, fr));
    auto cov = cutset_to_covering(w, t, cut, RngStream(trial).derive("cov"));
    EXPECT_TRUE(covering_validate(w, cov).valid) << trial;
    CutSet leaves(t.tree.size(), 0);
    for (std::size_t v = 0; v < t.tree.size(); ++v) leaves[v] = t.tree.is_leaf(v);
    EXPECT_TRUE(covering_validate(w, cutset_to_covering(w, t, leaves, RngStream(1))).valid);
  }
}

TEST(Badic, FlowNormChain) {
  WalkImage img(0.5, 2);
  auto e = badic_flow_norm(img, 2, 6, 0.5, 400, 1);
  EXPECT_EQ(e.truncations, 0);
  EXPECT_EQ(e.chain_violations, 0);
  EXPECT_GT(e.norm, 0);
  EXPECT_GT(e.cut, 0);
}
