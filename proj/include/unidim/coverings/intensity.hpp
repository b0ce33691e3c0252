#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "unidim/core/fit.hpp"
#include "unidim/core/parallel.hpp"
#include "unidim/core/stats.hpp"
#include "unidim/coverings/covering.hpp"
#include "unidim/spaces/model.hpp"

namespace unidim {

// Per-trial root statistic of a covering construction: the root radius, or
// the root's selection probability when that is known in closed form.
using RootCoveringFn = std::function<double(const RootedWindow&, RngStream)>;

struct IntensityEstimate {
  double r = 0;
  double estimate = 0;
  double sem = 0;
  int trials = 0;
  int truncations = 0;
  std::vector<double> per_trial;
};

// Fraction of trials in which the root gets a nonzero radius (or the mean of
// the per-trial probability returned by `fn` when `probability` is set).
inline IntensityEstimate covering_intensity(const SpaceModel& model, const RootCoveringFn& fn, double r, double reach,
                                            int trials, std::uint64_t seed, bool probability = false, int jobs = 1) {
  std::vector<double> val(static_cast<std::size_t>(trials), 0);
  std::vector<std::uint8_t> trunc(static_cast<std::size_t>(trials), 0);
  parallel_for(static_cast<std::size_t>(trials), jobs, [&](std::size_t t) {
    try {
      auto w = model.sample(t, reach);
      if (w.truncation_events() > 0) {
        trunc[t] = 1;
        return;
      }
      double x = fn(w, RngStream(seed).derive("cover", t));
      val[t] = probability ? x : (x != 0 ? 1.0 : 0.0);
    } catch (const TruncationError&) {
      trunc[t] = 1;
    }
  });
  IntensityEstimate est;
  est.r = r;
  for (std::size_t t = 0; t < val.size(); ++t) {
    if (trunc[t]) {
      ++est.truncations;
      continue;
    }
    est.per_trial.push_back(val[t]);
  }
  est.trials = static_cast<int>(est.per_trial.size());
  est.estimate = mean_of(est.per_trial);
  est.sem = sem_of(est.per_trial);
  return est;
}

// Root covering functions.
inline RootCoveringFn cube_root_radius(double r, CubeRule rule, WeightAssignment w = WeightAssignment::constant(1)) {
  return [=](const RootedWindow& win, RngStream rng) {
    auto cov = cube_covering(win, r, rule, rng, w);
    if (!cov.safe[win.root()]) throw TruncationError("cube covering: root cube leaves the window");
    return cov.radius[win.root()];
  };
}

// w(0) / w(C_r + U + z ∋ 0) for the root's cube, with U drawn from `rng`.
inline double cube_root_share(const RootedWindow& win, double r, const WeightAssignment& w, RngStream rng) {
  const auto* c = win.coords();
  if (!c) throw std::invalid_argument("cube share: window is not a coordinate pattern");
  const auto k = static_cast<std::size_t>(c->dim);
  std::vector<double> lo(k);
  for (std::size_t i = 0; i < k; ++i) {
    double x0 = c->coords[win.root() * k + i];
    double u = -r * rng.uniform();
    lo[i] = u + r * std::floor((x0 - u) / r);
    if (lo[i] < x0 - win.horizon() - kDistEps || lo[i] + r > x0 + win.horizon() + kDistEps)
      throw TruncationError("cube share: root cube leaves the window");
  }
  double total = 0;
  for (VertexId v = 0; v < win.size(); ++v) {
    bool in = true;
    for (std::size_t i = 0; i < k && in; ++i) {
      double x = c->coords[v * k + i];
      in = x >= lo[i] - 1e-12 && x < lo[i] + r - 1e-12;
    }
    if (in) total += w[v];
  }
  return total > 0 ? w[win.root()] / total : 0.0;
}

// Decay slope of an intensity curve: minus the log-log slope.
inline double decay_slope(const std::vector<IntensityEstimate>& curve) {
  std::vector<double> r, y;
  for (const auto& e : curve) {
    r.push_back(e.r);
    y.push_back(e.estimate);
  }
  return -slope_fit(r, y).slope;
}

}  // namespace unidim
