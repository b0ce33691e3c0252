#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "model.hpp"

namespace unidim {

// Nested partitions of Z^k into cubes of side b^n shifted by
// U_n = sum_{i<n} a_i b^i, with iid uniform digit vectors a_i.
class NestedPartition {
 public:
  static constexpr int kLevels = 40;

  NestedPartition(int b, int k, RngStream key) : b_(b), k_(k), key_(key) {
    std::int64_t p = 1;
    while (levels_ < kLevels && p <= (std::int64_t{1} << 50) / b) {
      sides_.push_back(p);
      ++levels_;
      p *= b;
    }
    shifts_.assign(static_cast<std::size_t>(levels_ * k), 0);
    for (int c = 0; c < k; ++c) {
      std::int64_t u = 0;
      for (int n = 0; n < levels_; ++n) {
        shifts_[static_cast<std::size_t>(n * k + c)] = u;
        u += digit(n, c) * sides_[static_cast<std::size_t>(n)];
      }
    }
  }

  int levels() const { return levels_; }

  int base() const { return b_; }
  int dim() const { return k_; }

  std::int64_t digit(int level, int coord) const {
    return static_cast<std::int64_t>(key_.derive("digit", level, coord).at(0) % static_cast<std::uint64_t>(b_));
  }

  std::int64_t shift(int level, int coord) const { return shifts_[static_cast<std::size_t>(level * k_ + coord)]; }
  std::int64_t side(int level) const { return sides_[static_cast<std::size_t>(level)]; }

  // Index of the level-n cube containing x, per coordinate.
  std::vector<std::int64_t> cube(const std::vector<std::int64_t>& x, int level) const {
    auto side = sides_[static_cast<std::size_t>(level)];
    std::vector<std::int64_t> c(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      auto y = x[j] - shift(level, static_cast<int>(j));
      c[j] = y >= 0 ? y / side : -((-y + side - 1) / side);
    }
    return c;
  }

 private:
  int b_, k_;
  RngStream key_;
  std::vector<std::int64_t> shifts_, sides_;
  int levels_ = 0;
};

// Points of Z^k surviving independent deletion (probability 1-p) of every
// partition cube that does not contain the origin, at every level n >= 0.
class RandomizedCantor : public SpaceModel {
 public:
  RandomizedCantor(int b, double p, int k, std::uint64_t seed) : SpaceModel(seed), b_(b), p_(p), k_(k) {
    if (b < 2) throw ParameterError("cantor: b must be >= 2");
    if (p < 0 || p > 1) throw ParameterError("cantor: p must lie in [0,1]");
    if (k < 1) throw ParameterError("cantor: k must be >= 1");
  }
  std::string kind() const override { return "cantor"; }

  NestedPartition partition(std::uint64_t trial) const { return NestedPartition(b_, k_, trial_rng(trial).derive("shift")); }

  bool kept(std::uint64_t trial, int level, const std::vector<std::int64_t>& cube) const {
    auto r = trial_rng(trial).derive("keep", level);
    for (auto c : cube) r = r.derive("", c);
    return r.bernoulli(p_);
  }

  bool survives(std::uint64_t trial, const std::vector<std::int64_t>& x) const {
    return survives(trial, partition(trial), x);
  }

  bool survives(std::uint64_t trial, const NestedPartition& part, const std::vector<std::int64_t>& x) const {
    std::vector<std::int64_t> origin(x.size(), 0);
    for (int n = 0; n < part.levels(); ++n) {
      auto c = part.cube(x, n);
      if (c == part.cube(origin, n)) return true;
      if (!kept(trial, n, c)) return false;
    }
    throw std::logic_error("cantor: cubes never merged");
  }

  RootedWindow sample(std::uint64_t trial, double horizon) const override {
    auto R = static_cast<std::int64_t>(std::floor(horizon + kDistEps));
    std::vector<double> coords;
    std::vector<std::int64_t> x(static_cast<std::size_t>(k_), -R);
    VertexId root = 0, count = 0;
    auto part = partition(trial);
    while (true) {
      if (survives(trial, part, x)) {
        bool origin = true;
        for (auto c : x) {
          coords.push_back(static_cast<double>(c));
          origin = origin && c == 0;
        }
        if (origin) root = count;
        ++count;
      }
      int i = 0;
      while (i < k_ && x[static_cast<std::size_t>(i)] == R) x[static_cast<std::size_t>(i++)] = -R;
      if (i == k_) break;
      ++x[static_cast<std::size_t>(i)];
    }
    return RootedWindow::from_coords(k_, std::move(coords), Norm::Sup, root, horizon);
  }

 private:
  int b_;
  double p_;
  int k_;
};

}  // namespace unidim
