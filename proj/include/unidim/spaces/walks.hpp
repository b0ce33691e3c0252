#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "model.hpp"

namespace unidim {

// Image of a two-sided walk with positive Pareto jumps, P(jump > r) = r^{-beta}.
class WalkImage : public SpaceModel {
 public:
  WalkImage(double beta, std::uint64_t seed) : SpaceModel(seed), beta_(beta) {
    if (!(beta > 0)) throw ParameterError("srw_image: tail exponent must be positive");
  }
  std::string kind() const override { return "srw_image"; }
  double beta() const { return beta_; }

  double jump(const RngStream& side, std::int64_t i) const {
    auto r = side.derive("", i);
    return std::pow(r.uniform_open(), -1.0 / beta_);
  }

  RootedWindow sample(std::uint64_t trial, double horizon) const override {
    auto key = trial_rng(trial);
    std::vector<double> pts{0.0};
    for (int side = 0; side < 2; ++side) {
      auto s = key.derive(side == 0 ? "fwd" : "bwd");
      double pos = 0;
      for (std::int64_t i = 1;; ++i) {
        pos += jump(s, i);
        if (pos > horizon) break;
        pts.push_back(side == 0 ? pos : -pos);
      }
    }
    return RootedWindow::from_coords(1, std::move(pts), Norm::Sup, 0, horizon);
  }

  // First passage times: S^{-1}(k) = number of forward jumps until S > k.
  std::vector<double> forward_positions(std::uint64_t trial, std::int64_t steps) const {
    auto s = trial_rng(trial).derive("fwd");
    std::vector<double> out;
    double pos = 0;
    for (std::int64_t i = 1; i <= steps; ++i) out.push_back(pos += jump(s, i));
    return out;
  }

 private:
  double beta_;
};

namespace detail {

// Two-sided simple random walk; steps drawn 64 at a time from keyed blocks.
class SimpleWalk {
 public:
  explicit SimpleWalk(RngStream key) : fwd_(key.derive("fwd")), bwd_(key.derive("bwd")) {}

  int step(bool forward, std::int64_t i) const {
    const auto& s = forward ? fwd_ : bwd_;
    auto block = s.derive("", i >> 6).at(0);
    return ((block >> (i & 63)) & 1) ? 1 : -1;
  }

  // S_n for n in [-len, len], indexed by n + len.
  std::vector<std::int64_t> path(std::int64_t len) const {
    std::vector<std::int64_t> out(static_cast<std::size_t>(2 * len + 1), 0);
    std::int64_t s = 0;
    for (std::int64_t n = 1; n <= len; ++n) out[static_cast<std::size_t>(len + n)] = s += step(true, n);
    s = 0;
    for (std::int64_t n = 1; n <= len; ++n) out[static_cast<std::size_t>(len - n)] = s += step(false, n);
    return out;
  }

 private:
  RngStream fwd_, bwd_;
};

}  // namespace detail

// Zero set of a two-sided simple random walk, as points of Z.
class WalkZeros : public SpaceModel {
 public:
  explicit WalkZeros(std::uint64_t seed) : SpaceModel(seed) {}
  std::string kind() const override { return "srw_zeros"; }

  RootedWindow sample(std::uint64_t trial, double horizon) const override {
    auto len = static_cast<std::int64_t>(std::floor(horizon + kDistEps));
    auto path = detail::SimpleWalk(trial_rng(trial)).path(len);
    std::vector<double> pts;
    VertexId root = 0;
    for (std::int64_t n = -len; n <= len; ++n)
      if (path[static_cast<std::size_t>(n + len)] == 0) {
        if (n == 0) root = pts.size();
        pts.push_back(static_cast<double>(n));
      }
    return RootedWindow::from_coords(1, std::move(pts), Norm::Sup, root, horizon);
  }
};

// Graph {(n, S_n)} of a simple random walk under max(sqrt|dx|, |dy|), or the
// sup metric when `sqrt_time` is false.
class WalkGraph : public SpaceModel {
 public:
  WalkGraph(bool sqrt_time, std::uint64_t seed) : SpaceModel(seed), sqrt_time_(sqrt_time) {}
  std::string kind() const override { return "srw_graph"; }

  RootedWindow sample(std::uint64_t trial, double horizon) const override {
    auto span = sqrt_time_ ? static_cast<std::int64_t>(std::floor(horizon * horizon + kDistEps))
                           : static_cast<std::int64_t>(std::floor(horizon + kDistEps));
    auto path = detail::SimpleWalk(trial_rng(trial)).path(span);
    std::vector<double> pts;
    VertexId root = 0;
    for (std::int64_t n = -span; n <= span; ++n) {
      auto y = path[static_cast<std::size_t>(n + span)];
      if (static_cast<double>(std::abs(y)) > horizon + kDistEps) continue;
      if (n == 0) root = pts.size() / 2;
      pts.push_back(static_cast<double>(n));
      pts.push_back(static_cast<double>(y));
    }
    return RootedWindow::from_coords(2, std::move(pts), sqrt_time_ ? Norm::SqrtTime : Norm::Sup, root, horizon);
  }

 private:
  bool sqrt_time_;
};

}  // namespace unidim
