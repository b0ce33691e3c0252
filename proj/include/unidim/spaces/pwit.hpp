#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "model.hpp"

namespace unidim {

// Weighted tree with explicit edge lengths, used for the nearest-children
// subtree of the PWIT.
struct LengthTree {
  std::vector<std::int64_t> parent;  // -1 at the root
  std::vector<double> length;        // length of the edge to the parent
  std::vector<int> depth;            // hops from the root
  std::vector<std::vector<std::size_t>> children;
};

// Poisson weighted infinite tree: every vertex's children sit at the points
// of a Poisson process on [0, inf) with intensity x^k.
class Pwit : public SpaceModel {
 public:
  Pwit(int k, std::uint64_t seed) : SpaceModel(seed), k_(k) {
    if (k < 1) throw ParameterError("pwit: k must be >= 1");
  }
  std::string kind() const override { return "pwit"; }
  int k() const { return k_; }

  // Distance of the i-th nearest child (0-based) of the vertex keyed by `key`.
  double child_distance(const RngStream& key, int i) const {
    double gamma = 0;
    auto r = key.derive("arrivals");
    for (int j = 0; j <= i; ++j) gamma += r.exponential();
    return std::pow((k_ + 1) * gamma, 1.0 / (k_ + 1));
  }

  RootedWindow sample(std::uint64_t trial, double horizon) const override {
    if (!(horizon > 0)) throw ParameterError("pwit: horizon must be positive");
    std::vector<std::pair<VertexId, VertexId>> edges;
    std::vector<double> lengths;
    std::vector<std::int64_t> parent{-1};
    struct Item {
      std::size_t id;
      RngStream key;
      double budget;
    };
    std::vector<Item> stack{{0, trial_rng(trial), horizon}};
    while (!stack.empty()) {
      auto it = stack.back();
      stack.pop_back();
      auto r = it.key.derive("arrivals");
      double gamma = 0;
      for (int c = 0;; ++c) {
        gamma += r.exponential();
        double x = std::pow((k_ + 1) * gamma, 1.0 / (k_ + 1));
        if (x > it.budget) break;
        auto id = parent.size();
        parent.push_back(static_cast<std::int64_t>(it.id));
        edges.emplace_back(it.id, id);
        lengths.push_back(x);
        stack.push_back({id, it.key.derive("c", c), it.budget - x});
      }
    }
    auto w = RootedWindow::from_graph(graph_from_edges(parent.size(), edges, lengths), 0, horizon);
    return w;
  }

  // Subtree keeping the m nearest children of every vertex, `hops` deep.
  LengthTree nearest_subtree(std::uint64_t trial, int m, int hops) const {
    LengthTree t;
    t.parent.push_back(-1);
    t.length.push_back(0);
    t.depth.push_back(0);
    t.children.emplace_back();
    struct Item {
      std::size_t id;
      RngStream key;
    };
    std::vector<Item> queue{{0, trial_rng(trial)}};
    for (std::size_t h = 0; h < queue.size(); ++h) {
      auto it = queue[h];
      if (t.depth[it.id] == hops) continue;
      auto r = it.key.derive("arrivals");
      double gamma = 0;
      for (int c = 0; c < m; ++c) {
        gamma += r.exponential();
        auto id = t.parent.size();
        t.parent.push_back(static_cast<std::int64_t>(it.id));
        t.length.push_back(std::pow((k_ + 1) * gamma, 1.0 / (k_ + 1)));
        t.depth.push_back(t.depth[it.id] + 1);
        t.children.emplace_back();
        t.children[it.id].push_back(id);
        queue.push_back({id, it.key.derive("c", c)});
      }
    }
    return t;
  }

 private:
  int k_;
};

}  // namespace unidim
