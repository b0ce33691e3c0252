#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "model.hpp"
#include "offspring.hpp"

namespace unidim {

namespace detail {

struct TreeBuilder {
  std::vector<std::int64_t> parent, height;
  std::vector<std::pair<VertexId, VertexId>> edges;

  std::int64_t add(std::int64_t par, std::int64_t h) {
    parent.push_back(par);
    height.push_back(h);
    auto id = static_cast<std::int64_t>(parent.size() - 1);
    if (par >= 0) edges.emplace_back(static_cast<VertexId>(id), static_cast<VertexId>(par));
    return id;
  }

  // Galton-Watson descendants of `id` down to `depth` more generations.
  // Each vertex's offspring count comes from its own keyed stream.
  void grow(std::int64_t id, RngStream key, int depth, const OffspringDistribution& mu) {
    struct Item {
      std::int64_t id;
      RngStream key;
      int depth;
    };
    std::vector<Item> stack{{id, key, depth}};
    while (!stack.empty()) {
      auto it = stack.back();
      stack.pop_back();
      if (it.depth == 0) continue;
      auto r = it.key.derive("n");
      int kids = mu.sample(r);
      auto h = height[static_cast<std::size_t>(it.id)] - 1;
      for (int c = 0; c < kids; ++c) stack.push_back({add(it.id, h), it.key.derive("c", c), it.depth - 1});
    }
  }

  RootedWindow finish(double horizon) {
    auto w = RootedWindow::from_graph(graph_from_edges(parent.size(), edges), 0, horizon);
    w.set_tree(std::move(parent), std::move(height));
    return w;
  }
};

}  // namespace detail

// Unimodular Galton-Watson tree: the root's offspring follow the size-biased
// law, everyone else's follow mu.
class UnimodularGW : public SpaceModel {
 public:
  UnimodularGW(OffspringDistribution mu, bool condition_survival, int margin, std::uint64_t seed)
      : SpaceModel(seed), mu_(std::move(mu)), root_mu_(mu_.size_biased()), condition_(condition_survival), margin_(margin) {
    if (condition_ && !(mu_.mean() > 1)) throw ParameterError("ugw: survival conditioning needs a supercritical law");
  }
  std::string kind() const override { return "ugw"; }
  const OffspringDistribution& offspring() const { return mu_; }

  RootedWindow sample(std::uint64_t trial, double horizon) const override {
    int radius = static_cast<int>(std::floor(horizon + kDistEps));
    auto base = trial_rng(trial);
    for (int attempt = 0; attempt < 100000; ++attempt) {
      auto key = base.derive("attempt", attempt);
      if (condition_ && !survives(key, radius + margin_)) continue;
      detail::TreeBuilder t;
      auto root = t.add(-1, 0);
      auto r = key.derive("n");
      int kids = root_mu_.sample(r);
      for (int c = 0; c < kids; ++c) t.grow(t.add(root, -1), key.derive("c", c), radius - 1, mu_);
      auto w = t.finish(horizon);
      w.set_marks(std::vector<double>{static_cast<double>(attempt)});
      return w;
    }
    throw std::runtime_error("ugw: survival conditioning did not succeed");
  }

  // Whether some vertex at generation `depth` exists (depth-first, short-circuit).
  bool survives(RngStream key, int depth) const {
    struct Item {
      RngStream key;
      int depth;
      bool root;
    };
    std::vector<Item> stack{{key, depth, true}};
    while (!stack.empty()) {
      auto it = stack.back();
      stack.pop_back();
      if (it.depth == 0) return true;
      auto r = it.key.derive("n");
      int kids = (it.root ? root_mu_ : mu_).sample(r);
      for (int c = kids; c-- > 0;) stack.push_back({it.key.derive("c", c), it.depth - 1, false});
    }
    return false;
  }

 private:
  OffspringDistribution mu_, root_mu_;
  bool condition_;
  int margin_;
};

// Eternal Galton-Watson tree around its root: ancestors F^j(o), side children
// of each ancestor from the size-biased-minus-one law, and GW(mu) subtrees.
class EternalGW : public SpaceModel {
 public:
  EternalGW(OffspringDistribution mu, std::uint64_t seed) : SpaceModel(seed), mu_(std::move(mu)) {
    if (std::abs(mu_.mean() - 1) > 1e-9) throw ParameterError("egw: offspring law must be critical (mean 1)");
    side_ = mu_.size_biased_minus_one();
  }
  std::string kind() const override { return "egw"; }
  const OffspringDistribution& side_law() const { return side_; }

  RootedWindow sample(std::uint64_t trial, double horizon) const override {
    int radius = static_cast<int>(std::floor(horizon + kDistEps));
    auto key = trial_rng(trial);
    detail::TreeBuilder t;
    std::vector<std::int64_t> chain{t.add(-1, 0)};
    for (int j = 1; j <= radius; ++j) chain.push_back(t.add(-1, j));
    for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
      t.parent[static_cast<std::size_t>(chain[j])] = chain[j + 1];
      t.edges.emplace_back(static_cast<VertexId>(chain[j]), static_cast<VertexId>(chain[j + 1]));
    }
    t.grow(chain[0], key.derive("down"), radius, mu_);
    for (int j = 1; j < radius; ++j) {
      auto anc = key.derive("anc", j);
      auto r = anc.derive("n");
      int side = side_.sample(r);
      for (int c = 0; c < side; ++c) {
        auto kid = t.add(chain[static_cast<std::size_t>(j)], j - 1);
        t.grow(kid, anc.derive("c", c), radius - j - 1, mu_);
      }
    }
    return t.finish(horizon);
  }

 private:
  OffspringDistribution mu_, side_;
};

}  // namespace unidim
