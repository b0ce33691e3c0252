#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "unidim/core/fit.hpp"
#include "unidim/core/parallel.hpp"
#include "unidim/core/stats.hpp"
#include "unidim/dimension/weights.hpp"
#include "unidim/spaces/model.hpp"

namespace unidim {

struct TrialCurve {
  std::uint64_t trial = 0;
  std::vector<double> values;  // w(N_r(o)) on the grid
  double root_weight = 0;
  double lower = NAN;  // liminf proxy
  double upper = NAN;  // limsup proxy
  double ols = NAN;
  bool truncated = false;
  bool degenerate = false;  // some grid value was 0
};

struct GrowthReport {
  std::string space;
  std::string weight;
  std::vector<double> radii;
  std::vector<TrialCurve> curves;
  std::vector<double> mean_curve;
  SlopeFit mean_fit;
  LocalSlopes mean_local;
  double essinf_lower_min = NAN, essinf_lower_p5 = NAN;
  double essinf_upper_min = NAN, essinf_upper_p5 = NAN;
  int trials = 0;
  int truncations = 0;
  int degenerate = 0;
  LocalSlopeOptions slope_options;

  bool valid() const { return truncations == 0 && trials > 0; }
  std::vector<const TrialCurve*> usable() const {
    std::vector<const TrialCurve*> out;
    for (const auto& c : curves)
      if (!c.truncated && !c.degenerate) out.push_back(&c);
    return out;
  }
};

namespace detail {

inline double low_quantile(std::vector<double> v) { return quantile_of(std::move(v), 0.05); }

inline void reduce_report(GrowthReport& rep) {
  rep.trials = 0;
  rep.truncations = 0;
  rep.degenerate = 0;
  rep.mean_curve.assign(rep.radii.size(), 0);
  std::vector<double> lo, up;
  for (const auto& c : rep.curves) {
    if (c.truncated) {
      ++rep.truncations;
      continue;
    }
    ++rep.trials;
    for (std::size_t i = 0; i < rep.radii.size(); ++i) rep.mean_curve[i] += c.values[i];
    if (c.degenerate) {
      ++rep.degenerate;
      continue;
    }
    lo.push_back(c.lower);
    up.push_back(c.upper);
  }
  if (rep.trials == 0) return;
  for (auto& m : rep.mean_curve) m /= rep.trials;
  if (std::all_of(rep.mean_curve.begin(), rep.mean_curve.end(), [](double x) { return x > 0; })) {
    rep.mean_fit = slope_fit(rep.radii, rep.mean_curve);
    rep.mean_local = local_slopes(rep.radii, rep.mean_curve, rep.slope_options);
  }
  if (!lo.empty()) {
    rep.essinf_lower_min = *std::min_element(lo.begin(), lo.end());
    rep.essinf_upper_min = *std::min_element(up.begin(), up.end());
    rep.essinf_lower_p5 = low_quantile(lo);
    rep.essinf_upper_p5 = low_quantile(up);
  }
}

}  // namespace detail

inline TrialCurve trial_curve(const SpaceModel& model, const WeightSpec& weight, std::span<const double> radii,
                              std::uint64_t trial, std::uint64_t seed, LocalSlopeOptions opt = {}) {
  TrialCurve c;
  c.trial = trial;
  try {
    auto w = model.sample(trial, radii.back());
    if (w.truncation_events() > 0) {
      c.truncated = true;
      return c;
    }
    auto wa = weight(w, RngStream(seed).derive("weight", trial));
    c.values = w.root_profile(wa, radii);
    c.root_weight = wa[w.root()];
  } catch (const TruncationError&) {
    c.truncated = true;
    return c;
  }
  c.degenerate = std::any_of(c.values.begin(), c.values.end(), [](double x) { return !(x > 0); });
  if (!c.degenerate) {
    auto ls = local_slopes(radii, c.values, opt);
    c.lower = ls.lower;
    c.upper = ls.upper;
    c.ols = slope_fit(radii, c.values).slope;
  }
  return c;
}

// Per-trial root growth curves w(N_r(o)) with slope proxies, for the given
// trial indices.
inline GrowthReport growth_report_for(const SpaceModel& model, const WeightSpec& weight, std::vector<double> radii,
                                      std::vector<std::uint64_t> trial_ids, std::uint64_t seed, int jobs = 1,
                                      LocalSlopeOptions opt = {}) {
  if (radii.size() < 2) throw std::invalid_argument("growth_report: grid needs two radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw std::invalid_argument("growth_report: grid must increase");
  GrowthReport rep;
  rep.space = model.kind();
  rep.weight = weight.name;
  rep.radii = std::move(radii);
  rep.slope_options = opt;
  rep.curves.resize(trial_ids.size());
  parallel_for(rep.curves.size(), jobs, [&](std::size_t i) {
    rep.curves[i] = trial_curve(model, weight, rep.radii, trial_ids[i], seed, opt);
  });
  detail::reduce_report(rep);
  return rep;
}

inline GrowthReport growth_report(const SpaceModel& model, const WeightSpec& weight, std::vector<double> radii,
                                  int trials, std::uint64_t seed, int jobs = 1, LocalSlopeOptions opt = {}) {
  std::vector<std::uint64_t> ids(static_cast<std::size_t>(trials));
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  return growth_report_for(model, weight, std::move(radii), std::move(ids), seed, jobs, opt);
}

// Concatenate two reports on the same grid.
inline GrowthReport merge_reports(GrowthReport a, const GrowthReport& b) {
  if (a.radii != b.radii) throw std::invalid_argument("merge_reports: grids differ");
  a.curves.insert(a.curves.end(), b.curves.begin(), b.curves.end());
  std::sort(a.curves.begin(), a.curves.end(), [](const auto& x, const auto& y) { return x.trial < y.trial; });
  detail::reduce_report(a);
  return a;
}

// Bootstrap CI of the mean-curve OLS slope.
inline Interval mean_slope_ci(const GrowthReport& rep, RngStream rng, int reps = 200) {
  std::vector<const TrialCurve*> ok;
  for (const auto& c : rep.curves)
    if (!c.truncated) ok.push_back(&c);
  if (ok.size() < 2) return {NAN, NAN};
  return bootstrap_ci(
      ok.size(),
      [&](std::span<const std::size_t> idx) {
        std::vector<double> m(rep.radii.size(), 0);
        for (auto i : idx)
          for (std::size_t j = 0; j < m.size(); ++j) m[j] += ok[i]->values[j];
        if (std::any_of(m.begin(), m.end(), [](double x) { return !(x > 0); })) return std::numeric_limits<double>::quiet_NaN();
        return slope_fit(rep.radii, m).slope;
      },
      rng, reps);
}

struct BillingsleyInterval {
  double lower = NAN;  // 5th percentile of per-trial liminf proxies
  double upper = NAN;  // 5th percentile of per-trial limsup proxies
  double lower_min = NAN;
  double upper_min = NAN;
  Interval lower_ci, upper_ci;
};

inline BillingsleyInterval billingsley_interval(const GrowthReport& rep, RngStream rng, int reps = 200) {
  if (!rep.valid()) throw std::invalid_argument("billingsley_interval: report has truncated trials");
  auto ok = rep.usable();
  if (ok.empty()) throw std::invalid_argument("billingsley_interval: no usable trials");
  BillingsleyInterval b;
  b.lower = rep.essinf_lower_p5;
  b.upper = rep.essinf_upper_p5;
  b.lower_min = rep.essinf_lower_min;
  b.upper_min = rep.essinf_upper_min;
  auto q = [&](bool upper) {
    return [&, upper](std::span<const std::size_t> idx) {
      std::vector<double> v;
      for (auto i : idx) v.push_back(upper ? ok[i]->upper : ok[i]->lower);
      return detail::low_quantile(std::move(v));
    };
  };
  b.lower_ci = bootstrap_ci(ok.size(), q(false), rng.derive("lo"), reps);
  b.upper_ci = bootstrap_ci(ok.size(), q(true), rng.derive("up"), reps);
  return b;
}

// Per-trial limsup proxy against the mean curve's, as in the monotone
// sequence lemma; `ols` compares whole-grid OLS slopes instead.
struct MonotoneCheck {
  double fraction_ok = NAN;
  double fraction_ordered = NAN;  // liminf <= limsup
  int trials = 0;
};

inline MonotoneCheck monotone_check(const GrowthReport& rep, double tol, bool ols = false) {
  auto ok = rep.usable();
  MonotoneCheck m;
  m.trials = static_cast<int>(ok.size());
  if (ok.empty()) return m;
  double ref = ols ? rep.mean_fit.slope : rep.mean_local.upper;
  int good = 0, ordered = 0;
  for (const auto* c : ok) {
    good += (ols ? c->ols : c->upper) <= ref + tol;
    ordered += c->lower <= c->upper + 1e-12;
  }
  m.fraction_ok = double(good) / double(ok.size());
  m.fraction_ordered = double(ordered) / double(ok.size());
  return m;
}

}  // namespace unidim
