#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "unidim/core/window.hpp"

namespace unidim {

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) comp_ += (sum_ - t) + x;
    else comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0, comp_ = 0;
};

// Finite forest of one-ended-tree pieces. Edge (v, F(v)) is named by v, so
// c[v] and f[v] belong to that edge; tops have no edge.
struct FlowTree {
  std::vector<std::int64_t> parent;  // -1 at component tops
  std::vector<double> c;
  std::vector<double> f;             // empty until a flow is assigned
  std::vector<std::int64_t> height;
  std::vector<std::int64_t> source;  // originating window vertex, -1 if none
  std::vector<std::vector<std::size_t>> children;

  std::size_t size() const { return parent.size(); }
  bool is_top(std::size_t v) const { return parent[v] < 0; }
  bool is_leaf(std::size_t v) const { return !is_top(v) && children[v].empty(); }

  std::size_t add(std::int64_t par, double cond, std::int64_t h, std::int64_t src = -1) {
    auto id = parent.size();
    parent.push_back(par);
    c.push_back(cond);
    height.push_back(h);
    source.push_back(src);
    children.emplace_back();
    if (par >= 0) children[static_cast<std::size_t>(par)].push_back(id);
    return id;
  }

  std::vector<std::size_t> tops() const {
    std::vector<std::size_t> t;
    for (std::size_t v = 0; v < size(); ++v)
      if (is_top(v)) t.push_back(v);
    return t;
  }

  std::size_t top_of(std::size_t v) const {
    while (parent[v] >= 0) v = static_cast<std::size_t>(parent[v]);
    return v;
  }

  // Vertices of the component under `top`, parents before children.
  std::vector<std::size_t> component(std::size_t top) const {
    std::vector<std::size_t> out{top};
    for (std::size_t i = 0; i < out.size(); ++i)
      for (auto w : children[out[i]]) out.push_back(w);
    return out;
  }

  void validate() const {
    auto n = size();
    if (c.size() != n || height.size() != n || children.size() != n) throw std::invalid_argument("FlowTree: ragged arrays");
    for (std::size_t v = 0; v < n; ++v) {
      if (parent[v] >= static_cast<std::int64_t>(n)) throw std::invalid_argument("FlowTree: parent out of range");
      if (!is_top(v) && !(c[v] >= 0)) throw std::invalid_argument("FlowTree: negative conductance");
    }
    // every vertex reaches a top without cycles
    for (std::size_t v = 0; v < n; ++v) {
      std::size_t steps = 0, u = v;
      while (parent[u] >= 0) {
        u = static_cast<std::size_t>(parent[u]);
        if (++steps > n) throw std::invalid_argument("FlowTree: parent cycle");
      }
    }
  }
};

struct FlowResult {
  std::map<std::size_t, double> value;  // per component top
  std::vector<double> into;             // bottom-up capacities
};

// Bottom-up max flow from the leaves to each top; flows are split among
// children in proportion to their capacities.
inline FlowResult tree_maxflow(FlowTree& t) {
  FlowResult res;
  auto n = t.size();
  res.into.assign(n, 0);
  t.f.assign(n, 0);
  for (auto top : t.tops()) {
    auto comp = t.component(top);
    for (auto it = comp.rbegin(); it != comp.rend(); ++it) {
      auto v = *it;
      if (t.children[v].empty()) {
        res.into[v] = t.is_top(v) ? 0 : t.c[v];
        continue;
      }
      CompensatedSum s;
      for (auto w : t.children[v]) s.add(res.into[w]);
      res.into[v] = t.is_top(v) ? s.value() : std::min(t.c[v], s.value());
    }
    res.value[top] = res.into[top];
    for (auto v : comp) {
      double out = t.is_top(v) ? res.into[v] : t.f[v];
      if (t.is_top(v)) t.f[v] = 0;
      if (t.children[v].empty()) continue;
      CompensatedSum s;
      for (auto w : t.children[v]) s.add(res.into[w]);
      double total = s.value();
      double scale = total > 0 ? out / total : 0;
      for (auto w : t.children[v]) t.f[w] = std::min(t.c[w], res.into[w] * scale);
    }
  }
  return res;
}

// Largest violation of 0 <= f <= c and of conservation at non-leaf, non-top
// vertices.
inline double flow_residual(const FlowTree& t) {
  double worst = 0;
  for (std::size_t v = 0; v < t.size(); ++v) {
    if (t.is_top(v)) continue;
    worst = std::max({worst, -t.f[v], t.f[v] - t.c[v]});
    if (t.children[v].empty()) continue;
    CompensatedSum s;
    for (auto w : t.children[v]) s.add(t.f[w]);
    worst = std::max(worst, std::abs(s.value() - t.f[v]));
  }
  return worst;
}

using CutSet = std::vector<std::uint8_t>;  // membership of edge (v, F(v))

// Minimum cut; at equality the higher edge is cut.
inline CutSet tree_mincut(const FlowTree& t, const FlowResult& fr) {
  CutSet cut(t.size(), 0);
  for (auto top : t.tops()) {
    std::vector<std::size_t> stack(t.children[top].begin(), t.children[top].end());
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      if (t.children[v].empty()) {
        cut[v] = 1;
        continue;
      }
      CompensatedSum s;
      for (auto w : t.children[v]) s.add(fr.into[w]);
      if (t.c[v] <= s.value()) cut[v] = 1;
      else stack.insert(stack.end(), t.children[v].begin(), t.children[v].end());
    }
  }
  return cut;
}

inline double cut_conductance(const FlowTree& t, const CutSet& cut, std::int64_t top = -1) {
  CompensatedSum s;
  for (std::size_t v = 0; v < t.size(); ++v)
    if (cut[v] && (top < 0 || t.top_of(v) == static_cast<std::size_t>(top))) s.add(t.c[v]);
  return s.value();
}

// Every leaf-to-top path meets the cut.
inline bool is_cutset(const FlowTree& t, const CutSet& cut) {
  for (std::size_t v = 0; v < t.size(); ++v) {
    if (!t.is_leaf(v)) continue;
    bool hit = false;
    for (auto u = v; !t.is_top(u) && !hit; u = static_cast<std::size_t>(t.parent[u])) hit = cut[u];
    if (!hit) return false;
  }
  return true;
}

// Repeatedly drops the lowest bad edges (those with a cut edge above them).
inline CutSet cut_minimality_prune(const FlowTree& t, CutSet cut) {
  if (!is_cutset(t, cut)) throw std::invalid_argument("cut_minimality_prune: input is not a cut-set");
  for (;;) {
    std::vector<std::uint8_t> bad(t.size(), 0);
    bool any = false;
    for (std::size_t v = 0; v < t.size(); ++v) {
      if (!cut[v]) continue;
      for (auto u = t.parent[v]; u >= 0 && !t.is_top(static_cast<std::size_t>(u)); u = t.parent[static_cast<std::size_t>(u)])
        if (cut[static_cast<std::size_t>(u)]) {
          bad[v] = 1;
          any = true;
          break;
        }
    }
    if (!any) return cut;
    // lowest bad edges: no other bad edge in their subtree
    std::vector<std::uint8_t> bad_below(t.size(), 0);
    for (auto top : t.tops()) {
      auto comp = t.component(top);
      for (auto it = comp.rbegin(); it != comp.rend(); ++it)
        for (auto w : t.children[*it]) bad_below[*it] |= bad[w] | bad_below[w];
    }
    for (std::size_t v = 0; v < t.size(); ++v)
      if (bad[v] && !bad_below[v]) cut[v] = 0;
  }
}

// Edge-list text format: one line "child parent conductance [flow]" per edge;
// isolated tops appear as "v -1 0".
inline void write_edge_list(std::ostream& os, const FlowTree& t) {
  os.precision(17);
  for (std::size_t v = 0; v < t.size(); ++v) {
    if (t.is_top(v)) {
      if (t.children[v].empty()) os << v << " -1 0\n";
      continue;
    }
    os << v << ' ' << t.parent[v] << ' ' << t.c[v];
    if (!t.f.empty()) os << ' ' << t.f[v];
    os << '\n';
  }
}

inline FlowTree read_edge_list(std::istream& is) {
  struct Row {
    std::int64_t child, parent;
    double c, f;
    bool has_f;
  };
  std::vector<Row> rows;
  std::string line;
  std::int64_t maxid = -1;
  bool any_flow = false;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    Row r{};
    if (!(ls >> r.child >> r.parent >> r.c)) throw std::invalid_argument("edge list line " + std::to_string(lineno) + ": expected child parent conductance");
    r.has_f = static_cast<bool>(ls >> r.f);
    std::string extra;
    if (ls >> extra) throw std::invalid_argument("edge list line " + std::to_string(lineno) + ": trailing fields");
    if (r.child < 0) throw std::invalid_argument("edge list line " + std::to_string(lineno) + ": negative child id");
    any_flow |= r.has_f;
    maxid = std::max({maxid, r.child, r.parent});
    rows.push_back(r);
  }
  auto n = static_cast<std::size_t>(maxid + 1);
  FlowTree t;
  t.parent.assign(n, -1);
  t.c.assign(n, 0);
  t.height.assign(n, 0);
  t.source.assign(n, -1);
  t.children.assign(n, {});
  if (any_flow) t.f.assign(n, 0);
  std::vector<std::uint8_t> seen(n, 0);
  for (const auto& r : rows) {
    auto v = static_cast<std::size_t>(r.child);
    if (seen[v]) throw std::invalid_argument("edge list: vertex " + std::to_string(v) + " listed twice");
    seen[v] = 1;
    t.parent[v] = r.parent;
    t.c[v] = r.c;
    if (r.parent >= 0) t.children[static_cast<std::size_t>(r.parent)].push_back(v);
    if (any_flow) {
      if (!r.has_f && r.parent >= 0) throw std::invalid_argument("edge list: flow column must be all or nothing");
      if (r.has_f) t.f[v] = r.f;
    }
  }
  t.validate();
  // heights: longest path down to a leaf
  for (auto top : t.tops()) {
    auto comp = t.component(top);
    for (auto it = comp.rbegin(); it != comp.rend(); ++it)
      for (auto w : t.children[*it]) t.height[*it] = std::max(t.height[*it], t.height[w] + 1);
  }
  return t;
}

// Components of the height <= n forest of a one-ended tree window. Heights
// are recomputed from the visible descendants, which is exact for v once
// dist(v) + n + 1 <= horizon. Kept components are those whose top is
// decidable; a top's parent with visible height > n is certainly above the
// cut. A single vertex component is extended by its parent edge.
inline FlowTree truncate_forest(const RootedWindow& w, std::int64_t n,
                                const std::function<double(VertexId)>& conductance) {
  if (!w.has_tree()) throw std::invalid_argument("truncate_forest: window has no tree structure");
  auto par = w.parents();
  auto N = w.size();
  std::vector<std::vector<VertexId>> kids(N);
  for (VertexId v = 0; v < N; ++v)
    if (par[v] >= 0) kids[static_cast<std::size_t>(par[v])].push_back(v);
  // visible subtree depth
  std::vector<std::int64_t> h(N, 0);
  std::vector<VertexId> order;
  for (VertexId v = 0; v < N; ++v)
    if (par[v] < 0) order.push_back(v);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (auto c : kids[order[i]]) order.push_back(c);
  if (order.size() != N) throw std::logic_error("truncate_forest: parent map is not a forest");
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    for (auto c : kids[*it]) h[*it] = std::max(h[*it], h[c] + 1);

  FlowTree t;
  double R = w.horizon();
  auto decidable = [&](VertexId v) { return w.dist_to_root(v) + static_cast<double>(n) + 1 <= R + kDistEps; };
  for (VertexId v = 0; v < N; ++v) {
    if (h[v] > n || !decidable(v)) continue;
    if (par[v] < 0) throw TruncationError("truncate_forest: parent of vertex " + std::to_string(v) + " lies outside the window");
    auto p = static_cast<std::size_t>(par[v]);
    if (h[p] <= n) continue;  // not a top, or undecidable

    if (kids[v].empty()) {
      auto top = t.add(-1, 0, 1, static_cast<std::int64_t>(p));
      t.add(static_cast<std::int64_t>(top), conductance(v), 0, static_cast<std::int64_t>(v));
      continue;
    }
    auto top = t.add(-1, 0, h[v], static_cast<std::int64_t>(v));
    std::vector<std::pair<VertexId, std::size_t>> stack;
    for (auto c : kids[v]) stack.emplace_back(c, top);
    while (!stack.empty()) {
      auto [u, pid] = stack.back();
      stack.pop_back();
      auto id = t.add(static_cast<std::int64_t>(pid), conductance(u), h[u], static_cast<std::int64_t>(u));
      for (auto c : kids[u]) stack.emplace_back(c, id);
    }
  }
  return t;
}

}  // namespace unidim
