#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace unidim {

struct SlopeFit {
  std::vector<std::pair<double, double>> points;  // (log r, log y)
  double slope = 0;
  double intercept = 0;
  double stderr_slope = 0;
  double max_increment = 0;  // steepest consecutive two-point slope
  double min_increment = 0;
};

inline SlopeFit ols(std::vector<std::pair<double, double>> pts) {
  SlopeFit f;
  f.points = std::move(pts);
  const auto n = static_cast<double>(f.points.size());
  double mx = 0, my = 0;
  for (auto [x, y] : f.points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (auto [x, y] : f.points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (f.points.size() > 2) {
    double rss = 0;
    for (auto [x, y] : f.points) {
      double e = y - f.intercept - f.slope * x;
      rss += e * e;
    }
    f.stderr_slope = std::sqrt(rss / (n - 2) / sxx);
  }
  f.max_increment = -INFINITY;
  f.min_increment = INFINITY;
  for (std::size_t i = 1; i < f.points.size(); ++i) {
    double s = (f.points[i].second - f.points[i - 1].second) / (f.points[i].first - f.points[i - 1].first);
    f.max_increment = std::max(f.max_increment, s);
    f.min_increment = std::min(f.min_increment, s);
  }
  return f;
}

// OLS of log y on log r.
inline SlopeFit slope_fit(std::span<const double> radii, std::span<const double> values) {
  if (radii.size() != values.size()) throw std::invalid_argument("slope_fit: size mismatch");
  if (radii.size() < 2) throw std::invalid_argument("slope_fit: need at least two points");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (i > 0 && !(radii[i] > radii[i - 1])) throw std::invalid_argument("slope_fit: radii must increase");
    if (!(radii[i] > 0)) throw std::domain_error("slope_fit: radius must be positive");
    if (!(values[i] > 0)) throw std::domain_error("slope_fit: value must be positive");
    pts.emplace_back(std::log(radii[i]), std::log(values[i]));
  }
  return ols(std::move(pts));
}

// Oscillation-aware limsup/liminf proxies: smooth log y with a moving
// average over `smooth_octaves`, then fit OLS slopes over sliding windows of
// `window_octaves`. Grids too short for both windows shrink the smoothing
// first and then the fit window, down to a single whole-grid OLS.
struct LocalSlopeOptions {
  double smooth_octaves = 2;
  double window_octaves = 5;
};

struct LocalSlopes {
  std::vector<double> slopes;
  double lower = 0;
  double upper = 0;
};

inline LocalSlopes local_slopes(std::span<const double> radii, std::span<const double> values,
                                LocalSlopeOptions opt = {}) {
  auto whole = slope_fit(radii, values);
  std::vector<double> x, y;
  for (auto [lx, ly] : whole.points) {
    x.push_back(lx / std::log(2.0));
    y.push_back(ly / std::log(2.0));
  }
  const double eps = 1e-9;
  double span = x.back() - x.front();
  double S = opt.smooth_octaves, W = opt.window_octaves;
  if (span + eps < S + W) S = 0;
  if (span + eps < W) W = span;

  std::vector<double> sx, sy;
  if (S > 0) {
    for (std::size_t i = 0; i < x.size() && x[i] + S <= x.back() + eps; ++i) {
      double ax = 0, ay = 0;
      int cnt = 0;
      for (std::size_t j = i; j < x.size() && x[j] <= x[i] + S + eps; ++j, ++cnt) {
        ax += x[j];
        ay += y[j];
      }
      sx.push_back(ax / cnt);
      sy.push_back(ay / cnt);
    }
  } else {
    sx = x;
    sy = y;
  }

  LocalSlopes out;
  for (std::size_t i = 0; i < sx.size() && sx[i] + W <= sx.back() + eps; ++i) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t j = i; j < sx.size() && sx[j] <= sx[i] + W + eps; ++j) pts.emplace_back(sx[j], sy[j]);
    if (pts.size() >= 2) out.slopes.push_back(ols(std::move(pts)).slope);
  }
  if (out.slopes.empty()) out.slopes.push_back(whole.slope);
  out.lower = *std::min_element(out.slopes.begin(), out.slopes.end());
  out.upper = *std::max_element(out.slopes.begin(), out.slopes.end());
  return out;
}

// Geometric grid from lo to hi with `per_octave` points per doubling.
inline std::vector<double> log_grid(double lo, double hi, int per_octave) {
  std::vector<double> g;
  double octaves = std::log2(hi / lo);
  int steps = static_cast<int>(std::lround(octaves * per_octave));
  for (int i = 0; i <= steps; ++i) g.push_back(lo * std::exp2(static_cast<double>(i) / per_octave));
  g.back() = hi;
  return g;
}

inline std::vector<double> dyadic_grid(int lo_exp, int hi_exp) {
  std::vector<double> g;
  for (int j = lo_exp; j <= hi_exp; ++j) g.push_back(std::ldexp(1.0, j));
  return g;
}

}  // namespace unidim
