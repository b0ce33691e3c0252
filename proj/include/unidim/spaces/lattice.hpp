#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "model.hpp"

namespace unidim {

// Z^k with a coordinate norm.
class Lattice : public SpaceModel {
 public:
  Lattice(int k, Norm norm = Norm::Sup, std::uint64_t seed = 0) : SpaceModel(seed), k_(k), norm_(norm) {
    if (k < 1) throw ParameterError("lattice: k must be >= 1");
  }
  std::string kind() const override { return "lattice"; }

  RootedWindow sample(std::uint64_t, double horizon) const override {
    auto r = static_cast<std::int64_t>(std::floor(horizon + kDistEps));
    std::vector<double> coords;
    std::vector<std::int64_t> x(static_cast<std::size_t>(k_), -r);
    VertexId root = 0, count = 0;
    while (true) {
      bool inside = true;
      if (norm_ == Norm::Euclidean) {
        double s = 0;
        for (auto c : x) s += static_cast<double>(c * c);
        inside = std::sqrt(s) <= horizon + kDistEps;
      }
      if (inside) {
        bool origin = true;
        for (auto c : x) {
          coords.push_back(static_cast<double>(c));
          origin = origin && c == 0;
        }
        if (origin) root = count;
        ++count;
      }
      int i = 0;
      while (i < k_ && x[static_cast<std::size_t>(i)] == r) x[static_cast<std::size_t>(i++)] = -r;
      if (i == k_) break;
      ++x[static_cast<std::size_t>(i)];
    }
    return RootedWindow::from_coords(k_, std::move(coords), norm_, root, horizon);
  }

 private:
  int k_;
  Norm norm_;
};

// Cayley graphs by breadth-first search over group elements.
class Cayley : public SpaceModel {
 public:
  enum class Preset { Zk, Heisenberg };

  Cayley(Preset preset, int k = 2, std::uint64_t seed = 0) : SpaceModel(seed), preset_(preset), k_(k) {
    if (preset == Preset::Zk && k < 1) throw ParameterError("cayley: k must be >= 1");
    if (preset == Preset::Zk && k > 4) throw ParameterError("cayley: Z^k supported for k <= 4");
    if (preset == Preset::Heisenberg) k_ = 3;
  }
  std::string kind() const override { return "cayley"; }
  Preset preset() const { return preset_; }

  // Ball sizes |N_r(e)| for r = 0..radius, without building a window.
  std::vector<std::size_t> sphere_counts(int radius) const {
    std::vector<std::size_t> counts;
    bfs(radius, [&](std::size_t, int d) {
      if (counts.size() <= static_cast<std::size_t>(d)) counts.resize(static_cast<std::size_t>(d) + 1, 0);
      ++counts[static_cast<std::size_t>(d)];
    }, nullptr);
    for (std::size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];
    return counts;
  }

  RootedWindow sample(std::uint64_t, double horizon) const override {
    int radius = static_cast<int>(std::floor(horizon + kDistEps));
    std::vector<std::pair<VertexId, VertexId>> edges;
    std::vector<std::int64_t> labels;
    std::size_t n = 0;
    bfs(radius, [&](std::size_t, int) { ++n; }, &edges, &labels);
    auto w = RootedWindow::from_graph(graph_from_edges(n, edges), 0, horizon);
    w.set_labels(k_, std::move(labels));
    return w;
  }

 private:
  using Elem = std::vector<std::int64_t>;

  std::vector<Elem> generators() const {
    std::vector<Elem> g;
    int dims = preset_ == Preset::Heisenberg ? 2 : k_;
    for (int i = 0; i < dims; ++i)
      for (int s : {1, -1}) {
        Elem e(static_cast<std::size_t>(k_), 0);
        e[static_cast<std::size_t>(i)] = s;
        g.push_back(e);
      }
    return g;
  }

  Elem multiply(const Elem& x, const Elem& g) const {
    Elem y = x;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += g[i];
    if (preset_ == Preset::Heisenberg) y[2] = x[2] + g[2] + x[0] * g[1];
    return y;
  }

  // Exact packing: 16 bits per lattice coordinate, 32 for the central one.
  std::uint64_t pack(const Elem& e) const {
    if (preset_ == Preset::Heisenberg)
      return (static_cast<std::uint64_t>(e[0] + 0x8000) << 48) | (static_cast<std::uint64_t>(e[1] + 0x8000) << 32) |
             static_cast<std::uint64_t>(e[2] + 0x80000000LL);
    std::uint64_t h = 0;
    for (auto c : e) h = (h << 16) | static_cast<std::uint64_t>(c + 0x8000);
    return h;
  }

  template <class Visit>
  void bfs(int radius, Visit visit, std::vector<std::pair<VertexId, VertexId>>* edges,
           std::vector<std::int64_t>* labels = nullptr) const {
    if (radius > 30000) throw ParameterError("cayley: radius too large");
    auto gens = generators();
    std::unordered_map<std::uint64_t, std::uint32_t> index;
    std::vector<Elem> elems{Elem(static_cast<std::size_t>(k_), 0)};
    std::vector<int> depth{0};
    index.emplace(pack(elems[0]), 0);
    for (std::size_t h = 0; h < elems.size(); ++h) {
      visit(h, depth[h]);
      if (labels)
        for (auto c : elems[h]) labels->push_back(c);
      for (const auto& g : gens) {
        Elem y = multiply(elems[h], g);
        auto key = pack(y);
        auto it = index.find(key);
        if (it == index.end()) {
          if (depth[h] == radius) continue;
          it = index.emplace(key, static_cast<std::uint32_t>(elems.size())).first;
          elems.push_back(std::move(y));
          depth.push_back(depth[h] + 1);
        }
        if (edges && it->second > h) edges->emplace_back(h, it->second);
      }
    }
  }

  Preset preset_;
  int k_;
};

}  // namespace unidim
