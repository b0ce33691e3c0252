#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace unidim {

using VertexId = std::size_t;

inline constexpr double kDistEps = 1e-9;

// A ball query that would reach past the window horizon.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Norm { Sup, Euclidean, SqrtTime };

struct CoordMetric {
  int dim = 1;
  std::vector<double> coords;  // row-major, dim per vertex
  Norm norm = Norm::Sup;

  double distance(VertexId u, VertexId v) const {
    const double* a = &coords[u * dim];
    const double* b = &coords[v * dim];
    switch (norm) {
      case Norm::Sup: {
        double m = 0;
        for (int i = 0; i < dim; ++i) m = std::max(m, std::abs(a[i] - b[i]));
        return m;
      }
      case Norm::Euclidean: {
        double s = 0;
        for (int i = 0; i < dim; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
        return std::sqrt(s);
      }
      case Norm::SqrtTime:
        return std::max(std::sqrt(std::abs(a[0] - b[0])), std::abs(a[1] - b[1]));
    }
    return 0;
  }
};

struct GraphMetric {
  std::vector<std::size_t> offsets;  // CSR, size n+1
  std::vector<std::uint32_t> targets;
  std::vector<double> lengths;  // empty means unit lengths

  double length(std::size_t e) const { return lengths.empty() ? 1.0 : lengths[e]; }
};

class RootedWindow;

struct ProductMetric {
  std::shared_ptr<const RootedWindow> first;
  std::shared_ptr<const RootedWindow> second;
};

// A nonnegative weight per vertex; a constant assignment needs no storage.
class WeightAssignment {
 public:
  static WeightAssignment constant(double c) {
    WeightAssignment w;
    w.constant_ = c;
    return w;
  }
  static WeightAssignment from_values(std::vector<double> v) {
    WeightAssignment w;
    w.values_ = std::move(v);
    w.constant_ = 0;
    w.explicit_ = true;
    return w;
  }
  double operator[](VertexId v) const { return explicit_ ? values_[v] : constant_; }
  bool is_constant() const { return !explicit_; }
  double constant_value() const { return constant_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
  double constant_ = 1;
  bool explicit_ = false;
};

// Exact ball of radius `horizon` around `root` in one realization.
class RootedWindow {
 public:
  using Metric = std::variant<CoordMetric, GraphMetric, ProductMetric>;

  static RootedWindow from_coords(int dim, std::vector<double> coords, Norm norm, VertexId root, double horizon) {
    RootedWindow w;
    CoordMetric m{dim, std::move(coords), norm};
    w.n_ = m.coords.size() / static_cast<std::size_t>(dim);
    w.root_ = root;
    w.horizon_ = horizon;
    w.dist_.resize(w.n_);
    for (VertexId v = 0; v < w.n_; ++v) w.dist_[v] = m.distance(root, v);
    if (dim == 1) {
      w.order_.resize(w.n_);
      std::iota(w.order_.begin(), w.order_.end(), VertexId{0});
      std::sort(w.order_.begin(), w.order_.end(),
                [&](VertexId a, VertexId b) { return m.coords[a] < m.coords[b]; });
    }
    w.metric_ = std::move(m);
    w.check_inside();
    return w;
  }

  static RootedWindow from_graph(GraphMetric g, VertexId root, double horizon) {
    RootedWindow w;
    w.n_ = g.offsets.empty() ? 0 : g.offsets.size() - 1;
    w.root_ = root;
    w.horizon_ = horizon;
    w.metric_ = std::move(g);
    w.dist_ = w.graph_distances(root, std::numeric_limits<double>::infinity());
    w.check_inside();
    return w;
  }

  // Sup-metric product; vertex (i, j) has id i * second.size() + j.
  static RootedWindow product(std::shared_ptr<const RootedWindow> a, std::shared_ptr<const RootedWindow> b) {
    if (std::abs(a->horizon() - b->horizon()) > kDistEps) throw std::invalid_argument("product: horizon mismatch");
    RootedWindow w;
    w.n_ = a->size() * b->size();
    w.root_ = a->root() * b->size() + b->root();
    w.horizon_ = a->horizon();
    w.metric_ = ProductMetric{std::move(a), std::move(b)};
    return w;
  }

  std::size_t size() const { return n_; }
  VertexId root() const { return root_; }
  double horizon() const { return horizon_; }
  const Metric& metric() const { return metric_; }

  const CoordMetric* coords() const { return std::get_if<CoordMetric>(&metric_); }
  const GraphMetric* graph() const { return std::get_if<GraphMetric>(&metric_); }
  const ProductMetric* product_parts() const { return std::get_if<ProductMetric>(&metric_); }

  double dist_to_root(VertexId v) const {
    if (auto* p = product_parts()) {
      auto nb = p->second->size();
      return std::max(p->first->dist_to_root(v / nb), p->second->dist_to_root(v % nb));
    }
    return dist_[v];
  }

  double distance(VertexId u, VertexId v) const {
    if (auto* c = coords()) return c->distance(u, v);
    if (auto* p = product_parts()) {
      auto nb = p->second->size();
      return std::max(p->first->distance(u / nb, v / nb), p->second->distance(u % nb, v % nb));
    }
    if (u == v) return 0;
    auto d = graph_distances(u, std::numeric_limits<double>::infinity(), v);
    return d[v];
  }

  bool ball_is_safe(VertexId v, double r) const { return dist_to_root(v) + r <= horizon_ + kDistEps; }

  // Closed ball; radius 0 gives the empty set.
  std::vector<VertexId> ball(VertexId v, double r) const {
    if (v >= n_) throw std::out_of_range("ball: vertex outside window");
    if (r < 0) throw std::invalid_argument("ball: negative radius");
    if (!ball_is_safe(v, r))
      throw TruncationError("ball(" + std::to_string(v) + ", " + std::to_string(r) + ") exceeds horizon " +
                            std::to_string(horizon_));
    std::vector<VertexId> out;
    if (r == 0) return out;
    if (auto* c = coords()) {
      if (c->dim == 1) {
        double x = c->coords[v];
        auto lo = std::lower_bound(order_.begin(), order_.end(), x - r - kDistEps,
                                   [&](VertexId a, double t) { return c->coords[a] < t; });
        for (auto it = lo; it != order_.end() && c->coords[*it] <= x + r + kDistEps; ++it) out.push_back(*it);
        std::sort(out.begin(), out.end());
      } else {
        for (VertexId u = 0; u < n_; ++u)
          if (c->distance(u, v) <= r + kDistEps) out.push_back(u);
      }
    } else if (auto* p = product_parts()) {
      auto nb = p->second->size();
      auto ba = p->first->ball(v / nb, r);
      auto bb = p->second->ball(v % nb, r);
      out.reserve(ba.size() * bb.size());
      for (auto i : ba)
        for (auto j : bb) out.push_back(i * nb + j);
    } else {
      auto d = graph_distances(v, r);
      for (VertexId u = 0; u < n_; ++u)
        if (d[u] <= r + kDistEps) out.push_back(u);
    }
    return out;
  }

  double weight_of_ball(const WeightAssignment& w, VertexId v, double r) const {
    double s = 0;
    for (auto u : ball(v, r)) s += w[u];
    return s;
  }

  // w(N_r(root)) for every r in `radii`, via sorted root distances.
  std::vector<double> root_profile(const WeightAssignment& w, std::span<const double> radii) const {
    for (double r : radii)
      if (r > horizon_ + kDistEps) throw TruncationError("root_profile: radius " + std::to_string(r) + " > horizon");
    if (auto* p = product_parts(); p && w.is_constant()) {
      auto a = p->first->root_profile(WeightAssignment::constant(1), radii);
      auto b = p->second->root_profile(WeightAssignment::constant(1), radii);
      std::vector<double> out(radii.size());
      for (std::size_t i = 0; i < radii.size(); ++i) out[i] = w.constant_value() * a[i] * b[i];
      return out;
    }
    std::vector<std::pair<double, double>> dw(n_);
    for (VertexId v = 0; v < n_; ++v) dw[v] = {dist_to_root(v), w[v]};
    std::sort(dw.begin(), dw.end());
    std::vector<double> prefix(n_ + 1, 0);
    for (std::size_t i = 0; i < n_; ++i) prefix[i + 1] = prefix[i] + dw[i].second;
    std::vector<double> out;
    out.reserve(radii.size());
    for (double r : radii) {
      if (r == 0) {
        out.push_back(0);
        continue;
      }
      auto it = std::upper_bound(dw.begin(), dw.end(), r + kDistEps,
                                 [](double t, const std::pair<double, double>& e) { return t < e.first; });
      out.push_back(prefix[static_cast<std::size_t>(it - dw.begin())]);
    }
    return out;
  }

  // Optional one-ended tree structure: parent (-1 when outside the window)
  // and height, where height(parent) = height + 1.
  bool has_tree() const { return !parent_.empty(); }
  std::span<const std::int64_t> parents() const { return parent_; }
  std::span<const std::int64_t> heights() const { return height_; }
  void set_tree(std::vector<std::int64_t> parent, std::vector<std::int64_t> height) {
    parent_ = std::move(parent);
    height_ = std::move(height);
  }

  // Optional integer labels (e.g. lattice positions), `label_dim` per vertex.
  int label_dim() const { return label_dim_; }
  std::span<const std::int64_t> labels() const { return labels_; }
  void set_labels(int dim, std::vector<std::int64_t> labels) {
    label_dim_ = dim;
    labels_ = std::move(labels);
  }

  std::span<const double> marks() const { return marks_; }

  // Generator-reported events where exactness could not be guaranteed.
  int truncation_events() const { return truncations_; }
  void set_truncation_events(int n) { truncations_ = n; }
  void set_marks(std::vector<double> m) { marks_ = std::move(m); }

  // Bounded Dijkstra from `src`; entries beyond `limit` stay infinite.
  std::vector<double> graph_distances(VertexId src, double limit, VertexId stop_at = static_cast<VertexId>(-1)) const {
    const auto& g = std::get<GraphMetric>(metric_);
    std::vector<double> d(n_, std::numeric_limits<double>::infinity());
    d[src] = 0;
    if (g.lengths.empty()) {
      std::vector<VertexId> frontier{src};
      std::size_t head = 0;
      while (head < frontier.size()) {
        VertexId u = frontier[head++];
        if (u == stop_at) break;
        if (d[u] + 1 > limit + kDistEps) continue;
        for (auto e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
          VertexId x = g.targets[e];
          if (d[x] == std::numeric_limits<double>::infinity()) {
            d[x] = d[u] + 1;
            frontier.push_back(x);
          }
        }
      }
      return d;
    }
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0, src});
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du > d[u]) continue;
      if (u == stop_at) break;
      for (auto e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
        double nd = du + g.length(e);
        VertexId x = g.targets[e];
        if (nd <= limit + kDistEps && nd < d[x]) {
          d[x] = nd;
          pq.push({nd, x});
        }
      }
    }
    return d;
  }

 private:
  void check_inside() const {
    for (VertexId v = 0; v < n_; ++v)
      if (!(dist_[v] <= horizon_ + kDistEps))
        throw std::logic_error("window vertex " + std::to_string(v) + " lies outside the horizon");
  }

  std::size_t n_ = 0;
  VertexId root_ = 0;
  double horizon_ = 0;
  Metric metric_;
  std::vector<double> dist_;
  std::vector<VertexId> order_;
  std::vector<std::int64_t> parent_, height_;
  std::vector<std::int64_t> labels_;
  int label_dim_ = 0;
  std::vector<double> marks_;
  int truncations_ = 0;
};

// Undirected CSR from an edge list.
inline GraphMetric graph_from_edges(std::size_t n, std::span<const std::pair<VertexId, VertexId>> edges,
                                    std::span<const double> lengths = {}) {
  GraphMetric g;
  g.offsets.assign(n + 1, 0);
  for (auto [a, b] : edges) {
    ++g.offsets[a + 1];
    ++g.offsets[b + 1];
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets[i + 1] += g.offsets[i];
  g.targets.resize(2 * edges.size());
  if (!lengths.empty()) g.lengths.resize(2 * edges.size());
  std::vector<std::size_t> fill(g.offsets.begin(), g.offsets.end() - 1);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [a, b] = edges[e];
    if (!lengths.empty()) {
      g.lengths[fill[a]] = lengths[e];
      g.lengths[fill[b]] = lengths[e];
    }
    g.targets[fill[a]++] = static_cast<std::uint32_t>(b);
    g.targets[fill[b]++] = static_cast<std::uint32_t>(a);
  }
  return g;
}

}  // namespace unidim
