#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "unidim/core/fit.hpp"
#include "unidim/core/parallel.hpp"
#include "unidim/core/stats.hpp"
#include "unidim/coverings/intensity.hpp"
#include "unidim/dimension/growth.hpp"

namespace unidim {

struct MdpViolation {
  std::uint64_t trial;
  double r;
  double weight;
  double limit;
};

struct MdpResult {
  bool hypothesis_ok = false;
  double bound = NAN;          // E[w(o)] / c
  double bound_sem = NAN;
  double limsup_bound = NAN;   // E[w(o)] / (2^α c)
  double mean_root_weight = NAN;
  std::vector<MdpViolation> violations;
  std::vector<TrialCurve> curves;  // w(N_r(o)) on the radii >= M
  std::vector<double> radii;
  int trials = 0;
  int truncations = 0;
};

// Lower bound on the Hausdorff content, valid only if w(N_r(o)) <= c r^α held
// on every sampled trial and grid radius r >= M.
inline MdpResult mdp_content_bound(const SpaceModel& model, const WeightSpec& weight, double alpha, double c,
                                   double M, std::vector<double> radii, int trials, std::uint64_t seed, int jobs = 1) {
  std::erase_if(radii, [M](double r) { return r < M; });
  if (radii.empty()) throw std::invalid_argument("mdp_content_bound: no grid radius >= M");
  std::vector<TrialCurve> curves(static_cast<std::size_t>(trials));
  parallel_for(curves.size(), jobs, [&](std::size_t t) {
    TrialCurve tc;
    tc.trial = t;
    try {
      auto w = model.sample(t, radii.back());
      if (w.truncation_events() > 0) throw TruncationError("generator truncation");
      auto wa = weight(w, RngStream(seed).derive("weight", t));
      tc.values = w.root_profile(wa, radii);
      tc.root_weight = wa[w.root()];
    } catch (const TruncationError&) {
      tc.truncated = true;
    }
    curves[t] = std::move(tc);
  });
  MdpResult res;
  std::vector<double> roots;
  for (const auto& tc : curves) {
    if (tc.truncated) {
      ++res.truncations;
      continue;
    }
    ++res.trials;
    roots.push_back(tc.root_weight);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      double lim = c * std::pow(radii[i], alpha);
      if (tc.values[i] > lim * (1 + 1e-12)) res.violations.push_back({tc.trial, radii[i], tc.values[i], lim});
    }
  }
  res.mean_root_weight = mean_of(roots);
  res.hypothesis_ok = res.violations.empty() && res.truncations == 0 && res.trials > 0;
  if (res.hypothesis_ok) {
    res.bound = res.mean_root_weight / c;
    res.bound_sem = sem_of(roots) / c;
    res.limsup_bound = res.bound / std::pow(2.0, alpha);
  }
  res.curves = std::move(curves);
  res.radii = std::move(radii);
  return res;
}

struct MinkowskiEstimate {
  std::vector<double> radii;
  std::vector<double> cube_share;  // E[w(0)/w(C_r+U_r)]
  std::vector<double> ball_share;  // E[w(0)/w(N_r(0))]
  std::vector<double> mean_mass;   // E[w(N_r(0))]
  double decay_cube = NAN, decay_ball = NAN, growth_mean = NAN;
  double sd_cube = NAN, sd_ball = NAN, sd_growth = NAN;
  bool chain_ok = false;  // decay_cube <= decay_ball <= growth_mean within 2 sd
  std::vector<std::uint64_t> trial_ids;
  std::vector<std::vector<double>> trial_cube;  // w(0)/w(C_r+U_r) per trial
  int trials = 0;
  int truncations = 0;
};

inline MinkowskiEstimate euclidean_minkowski_estimate(const SpaceModel& model, const WeightSpec& weight,
                                                      std::vector<double> radii, int trials, std::uint64_t seed,
                                                      int jobs = 1, int boot = 200) {
  if (radii.size() < 2) throw std::invalid_argument("minkowski: grid needs two radii");
  const auto G = radii.size();
  struct Row {
    std::vector<double> cube, ball, mass;
    bool truncated = false;
  };
  std::vector<Row> rows(static_cast<std::size_t>(trials));
  parallel_for(rows.size(), jobs, [&](std::size_t t) {
    Row row;
    try {
      auto w = model.sample(t, radii.back());
      if (w.truncation_events() > 0) throw TruncationError("generator truncation");
      auto wa = weight(w, RngStream(seed).derive("weight", t));
      double w0 = wa[w.root()];
      if (!(w0 > 0)) throw std::domain_error("minkowski: w(0) must be positive");
      row.mass = w.root_profile(wa, radii);
      for (std::size_t i = 0; i < G; ++i) {
        row.ball.push_back(w0 / row.mass[i]);
        row.cube.push_back(cube_root_share(w, radii[i], wa, RngStream(seed).derive("shift", t, i)));
      }
    } catch (const TruncationError&) {
      row.truncated = true;
    }
    rows[t] = std::move(row);
  });
  MinkowskiEstimate est;
  est.radii = radii;
  std::vector<const Row*> ok;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    if (rows[t].truncated) {
      ++est.truncations;
      continue;
    }
    ok.push_back(&rows[t]);
    est.trial_ids.push_back(t);
    est.trial_cube.push_back(rows[t].cube);
  }
  est.trials = static_cast<int>(ok.size());
  if (ok.size() < 2) return est;
  auto slopes = [&](std::span<const std::size_t> idx) {
    std::vector<double> c(G, 0), b(G, 0), m(G, 0);
    for (auto i : idx)
      for (std::size_t j = 0; j < G; ++j) {
        c[j] += ok[i]->cube[j];
        b[j] += ok[i]->ball[j];
        m[j] += ok[i]->mass[j];
      }
    return std::array<double, 3>{-slope_fit(radii, c).slope, -slope_fit(radii, b).slope, slope_fit(radii, m).slope};
  };
  std::vector<std::size_t> all(ok.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  auto s = slopes(all);
  est.decay_cube = s[0];
  est.decay_ball = s[1];
  est.growth_mean = s[2];
  est.cube_share.assign(G, 0);
  est.ball_share.assign(G, 0);
  est.mean_mass.assign(G, 0);
  for (const auto* r : ok)
    for (std::size_t j = 0; j < G; ++j) {
      est.cube_share[j] += r->cube[j] / double(ok.size());
      est.ball_share[j] += r->ball[j] / double(ok.size());
      est.mean_mass[j] += r->mass[j] / double(ok.size());
    }
  RngStream rng = RngStream(seed).derive("boot");
  for (int k = 0; k < 3; ++k) {
    double sd = bootstrap_sd(ok.size(), [&](std::span<const std::size_t> idx) { return slopes(idx)[static_cast<std::size_t>(k)]; },
                             rng.derive("", k), boot);
    (k == 0 ? est.sd_cube : k == 1 ? est.sd_ball : est.sd_growth) = sd;
  }
  est.chain_ok = est.decay_cube <= est.decay_ball + 2 * std::hypot(est.sd_cube, est.sd_ball) &&
                 est.decay_ball <= est.growth_mean + 2 * std::hypot(est.sd_ball, est.sd_growth);
  return est;
}

struct BirkhoffPair {
  std::uint64_t trial;
  double lower_w1;
  double upper_w2;
};

struct BirkhoffResult {
  std::vector<BirkhoffPair> pairs;
  double violation_rate = NAN;
  double tol = 0;
  GrowthReport first, second;
};

// Per trial: liminf proxy of w1 against limsup proxy of w2.
inline BirkhoffResult birkhoff_compare(const SpaceModel& model, const WeightSpec& w1, const WeightSpec& w2,
                                       std::vector<double> radii, int trials, std::uint64_t seed, double tol = 0.05,
                                       int jobs = 1) {
  BirkhoffResult res;
  res.tol = tol;
  res.first = growth_report(model, w1, radii, trials, seed, jobs);
  res.second = growth_report(model, w2, radii, trials, RngStream(seed).derive("w2").key(), jobs);
  int bad = 0;
  for (std::size_t t = 0; t < res.first.curves.size(); ++t) {
    const auto& a = res.first.curves[t];
    const auto& b = res.second.curves[t];
    if (a.truncated || b.truncated || a.degenerate || b.degenerate) continue;
    res.pairs.push_back({a.trial, a.lower, b.upper});
    bad += a.lower > b.upper + tol;
  }
  if (!res.pairs.empty()) res.violation_rate = double(bad) / double(res.pairs.size());
  return res;
}

}  // namespace unidim
