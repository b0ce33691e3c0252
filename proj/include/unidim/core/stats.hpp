#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "rng.hpp"

namespace unidim {

inline double mean_of(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0 : s / static_cast<double>(v.size());
}

// Standard error of the mean.
inline double sem_of(std::span<const double> v) {
  if (v.size() < 2) return 0;
  double m = mean_of(v), s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

// Linear-interpolated quantile, q in [0,1].
inline double quantile_of(std::vector<double> v, double q) {
  if (v.empty()) return NAN;
  std::sort(v.begin(), v.end());
  double pos = q * static_cast<double>(v.size() - 1);
  auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= v.size()) return v.back();
  double t = pos - static_cast<double>(i);
  return v[i] * (1 - t) + v[i + 1] * t;
}

struct Interval {
  double lo = 0;
  double hi = 0;
};

// Percentile bootstrap of `stat` over resampled trial indices.
inline Interval bootstrap_ci(std::size_t n, const std::function<double(std::span<const std::size_t>)>& stat,
                             RngStream rng, int reps = 200, double level = 0.95) {
  std::vector<double> vals;
  std::vector<std::size_t> idx(n);
  for (int b = 0; b < reps; ++b) {
    auto r = rng.derive("boot", b);
    for (auto& i : idx) i = static_cast<std::size_t>(r.below(static_cast<std::int64_t>(n)));
    vals.push_back(stat(idx));
  }
  double a = (1 - level) / 2;
  return {quantile_of(vals, a), quantile_of(vals, 1 - a)};
}

inline double bootstrap_sd(std::size_t n, const std::function<double(std::span<const std::size_t>)>& stat,
                           RngStream rng, int reps = 200) {
  std::vector<double> vals;
  std::vector<std::size_t> idx(n);
  for (int b = 0; b < reps; ++b) {
    auto r = rng.derive("boot", b);
    for (auto& i : idx) i = static_cast<std::size_t>(r.below(static_cast<std::int64_t>(n)));
    vals.push_back(stat(idx));
  }
  double m = mean_of(vals), s = 0;
  for (double x : vals) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(vals.size() - 1));
}

}  // namespace unidim
