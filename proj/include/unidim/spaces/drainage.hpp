#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "model.hpp"

namespace unidim {

// Drainage network on the even lattice: the parent of (x, y) is (x +- 1, y - 1)
// with an independent fair sign per vertex, keyed by ("arrow", x, y).
class Drainage : public SpaceModel {
 public:
  explicit Drainage(std::uint64_t seed) : SpaceModel(seed) {}
  std::string kind() const override { return "drainage"; }

  struct Arrows {
    RngStream key;
    int sign(std::int64_t x, std::int64_t y) const { return (key.derive("arrow", x, y).at(0) & 1) ? 1 : -1; }
    std::pair<std::int64_t, std::int64_t> parent(std::int64_t x, std::int64_t y) const { return {x + sign(x, y), y - 1}; }
  };

  Arrows arrows(std::uint64_t trial) const { return Arrows{trial_rng(trial)}; }

  RootedWindow sample(std::uint64_t trial, double horizon) const override {
    auto radius = static_cast<std::int64_t>(std::floor(horizon + kDistEps));
    auto field = arrows(trial);
    std::unordered_map<std::uint64_t, std::size_t> index;
    auto pack = [](std::int64_t x, std::int64_t y) {
      return (static_cast<std::uint64_t>(x + 0x80000000LL) << 32) | static_cast<std::uint64_t>(y + 0x80000000LL);
    };
    std::vector<std::int64_t> labels, parent, height;
    std::vector<std::int64_t> depth;
    std::vector<std::pair<VertexId, VertexId>> edges;
    auto visit = [&](std::int64_t x, std::int64_t y, std::int64_t d) -> std::pair<std::size_t, bool> {
      auto [it, fresh] = index.emplace(pack(x, y), labels.size() / 2);
      if (fresh) {
        labels.push_back(x);
        labels.push_back(y);
        depth.push_back(d);
        height.push_back(-y);
        parent.push_back(-1);
      }
      return {it->second, fresh};
    };
    visit(0, 0, 0);
    for (std::size_t h = 0; h < depth.size(); ++h) {
      if (depth[h] == radius) continue;
      auto x = labels[2 * h], y = labels[2 * h + 1];
      auto [px, py] = field.parent(x, y);
      auto [pid, pfresh] = visit(px, py, depth[h] + 1);
      parent[h] = static_cast<std::int64_t>(pid);
      if (pfresh) edges.emplace_back(h, pid);
      for (int dx : {-1, 1}) {
        auto cx = x + dx, cy = y + 1;
        if (field.sign(cx, cy) != -dx) continue;
        auto [cid, cfresh] = visit(cx, cy, depth[h] + 1);
        if (cfresh) {
          edges.emplace_back(h, cid);
          parent[cid] = static_cast<std::int64_t>(h);
        }
      }
    }
    // parents of boundary vertices are outside the window unless already present
    for (std::size_t v = 0; v < depth.size(); ++v)
      if (parent[v] < 0) {
        auto [px, py] = field.parent(labels[2 * v], labels[2 * v + 1]);
        auto it = index.find(pack(px, py));
        if (it != index.end()) parent[v] = static_cast<std::int64_t>(it->second);
      }
    auto w = RootedWindow::from_graph(graph_from_edges(depth.size(), edges), 0, horizon);
    w.set_tree(std::move(parent), std::move(height));
    w.set_labels(2, std::move(labels));
    return w;
  }
};

}  // namespace unidim
