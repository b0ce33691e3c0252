#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "model.hpp"

namespace unidim {

// Nondecreasing integer sequence q_n defining level weights p_n ~ 2^{-q_n}.
class LevelSequence {
 public:
  enum class Kind { Power, Linear, Oscillating, Constant };

  static LevelSequence power(double a) { return {Kind::Power, a, a}; }
  static LevelSequence linear(double a) { return {Kind::Linear, a, a}; }
  // Tower blocks [t_j, t_{j+1}), t_0 = 2, t_{j+1} = t_j^2, alternating
  // steep (exponent b) and flat (exponent a) growth of q_n / log2 n.
  static LevelSequence oscillating(double a, double b) { return {Kind::Oscillating, a, b}; }
  static LevelSequence constant(double c) { return {Kind::Constant, c, c}; }

  Kind kind() const { return kind_; }
  double a() const { return a_; }
  double b() const { return b_; }

  std::int64_t operator()(std::int64_t n) const {
    auto l2 = std::log2(static_cast<double>(n) + 1);
    switch (kind_) {
      case Kind::Power:
        return static_cast<std::int64_t>(std::floor(a_ * l2 + 1e-12));
      case Kind::Linear:
        return static_cast<std::int64_t>(std::floor(a_ * static_cast<double>(n) + 1e-12));
      case Kind::Constant:
        return static_cast<std::int64_t>(a_);
      case Kind::Oscillating: {
        std::int64_t lo = 2, hi = 4;
        bool steep = true;
        while (n >= hi) {
          lo = hi;
          hi = hi * hi;
          steep = !steep;
        }
        auto steep_q = static_cast<std::int64_t>(std::floor(b_ * l2 + 1e-12));
        if (n < 2 || steep) return steep_q;
        auto carried = static_cast<std::int64_t>(std::floor(b_ * std::log2(static_cast<double>(lo) + 1) + 1e-12));
        return std::max(carried, static_cast<std::int64_t>(std::floor(a_ * l2 + 1e-12)));
      }
    }
    return 0;
  }

  bool normalizable() const {
    switch (kind_) {
      case Kind::Power:
        return a_ > 1;
      case Kind::Linear:
        return a_ > 0;
      case Kind::Oscillating:
        return std::min(a_, b_) > 1 && b_ >= a_;
      case Kind::Constant:
        return false;
    }
    return false;
  }

  // Tail exponent used for the rejection sampler's Pareto envelope.
  double envelope_exponent() const { return kind_ == Kind::Linear ? 2.0 : std::min(a_, b_); }

 private:
  LevelSequence(Kind k, double a, double b) : kind_(k), a_(a), b_(b) {}
  Kind kind_;
  double a_, b_;
};

// Canopy-type tree: a level-n vertex (n >= 1) has 2^{q_n - q_{n-1}} children
// at level n-1; level 0 holds the leaves; the root's level has law p_n.
class GeneralizedCanopy : public SpaceModel {
 public:
  GeneralizedCanopy(LevelSequence q, std::uint64_t seed, std::optional<std::int64_t> fixed_root_level = std::nullopt)
      : SpaceModel(seed), q_(q), fixed_level_(fixed_root_level) {
    for (std::int64_t n = 1; n < 4096; ++n)
      if (q_(n) < q_(n - 1)) throw ParameterError("canopy: q must be nondecreasing");
    if (!fixed_level_) {
      if (!q_.normalizable()) throw ParameterError("canopy: p_n = c 2^{-q_n} is not normalizable");
      e_ = q_.envelope_exponent();
      envelope_ = 0;
      for (std::int64_t n = 0; n < 200000; ++n) envelope_ = std::max(envelope_, std::exp2(-double(q_(n))) / proposal(n));
    }
  }
  std::string kind() const override { return "canopy"; }
  const LevelSequence& sequence() const { return q_; }

  std::int64_t children_of_level(std::int64_t level) const {
    if (level <= 0) return 0;
    auto d = q_(level) - q_(level - 1);
    if (d > 40) throw ParameterError("canopy: branching 2^" + std::to_string(d) + " too large");
    return std::int64_t{1} << d;
  }

  std::int64_t sample_level(RngStream rng) const {
    if (fixed_level_) return *fixed_level_;
    for (int attempt = 0; attempt < 1000000; ++attempt) {
      double x = std::pow(rng.uniform_open(), -1.0 / (e_ - 1));
      if (x > 9e15) continue;
      auto n = static_cast<std::int64_t>(std::floor(x)) - 1;
      if (n < 0) continue;
      if (rng.uniform() * envelope_ * proposal(n) < std::exp2(-double(q_(n)))) return n;
    }
    throw std::runtime_error("canopy: level sampler did not accept");
  }

  RootedWindow sample(std::uint64_t trial, double horizon) const override {
    auto level = sample_level(trial_rng(trial).derive("level"));
    return build(level, static_cast<std::int64_t>(std::floor(horizon + kDistEps)), horizon);
  }

  RootedWindow build(std::int64_t level, std::int64_t radius, double horizon) const {
    std::vector<std::int64_t> parent, height;
    std::vector<std::pair<VertexId, VertexId>> edges;
    auto add = [&](std::int64_t lvl, std::int64_t par) {
      parent.push_back(par);
      height.push_back(lvl);
      auto id = parent.size() - 1;
      if (par >= 0) edges.emplace_back(id, static_cast<VertexId>(par));
      return static_cast<std::int64_t>(id);
    };
    // descend below `v` (at level lvl) through `depth` more levels, skipping one child
    std::vector<std::int64_t> chain;
    chain.push_back(add(level, -1));
    for (std::int64_t j = 1; j <= radius; ++j) chain.push_back(add(level + j, -1));
    for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
      parent[static_cast<std::size_t>(chain[j])] = chain[j + 1];
      edges.emplace_back(static_cast<VertexId>(chain[j]), static_cast<VertexId>(chain[j + 1]));
    }
    struct Item {
      std::int64_t id, lvl, budget;
    };
    for (std::int64_t j = 0; j <= radius; ++j) {
      std::int64_t budget = radius - j;
      std::int64_t lvl = level + j;
      if (budget == 0 || lvl == 0) continue;
      auto kids = children_of_level(lvl);
      // the chain child is one of the kids; add the others
      std::vector<Item> stack;
      for (std::int64_t c = (j == 0 ? 0 : 1); c < kids; ++c) stack.push_back({add(lvl - 1, chain[static_cast<std::size_t>(j)]), lvl - 1, budget - 1});
      while (!stack.empty()) {
        auto it = stack.back();
        stack.pop_back();
        if (it.budget == 0 || it.lvl == 0) continue;
        auto k2 = children_of_level(it.lvl);
        for (std::int64_t c = 0; c < k2; ++c) stack.push_back({add(it.lvl - 1, it.id), it.lvl - 1, it.budget - 1});
      }
    }
    auto w = RootedWindow::from_graph(graph_from_edges(parent.size(), edges), 0, horizon);
    w.set_tree(std::move(parent), std::move(height));
    return w;
  }

 private:
  double proposal(std::int64_t n) const {
    return std::pow(double(n) + 1, 1 - e_) - std::pow(double(n) + 2, 1 - e_);
  }

  LevelSequence q_;
  std::optional<std::int64_t> fixed_level_;
  double e_ = 2;
  double envelope_ = 1;
};

}  // namespace unidim
