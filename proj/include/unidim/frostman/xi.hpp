#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "../core/finite_space.hpp"
#include "../coverings/covering.hpp"
#include "simplex.hpp"

namespace unidim {

struct FrostmanInstance {
  FiniteMetricSpace space;
  double alpha = 1;
  double M = 1;
  std::vector<double> grid;            // radii, all >= M
  std::vector<double> h;               // target, one per vertex
  std::vector<std::uint8_t> active;    // empty = all; otherwise constraint centres and objective
  bool grid_capped = false;
  bool boundary_bias = false;

  bool is_active(VertexId v) const { return active.empty() || active[v]; }
  std::size_t population() const {
    return active.empty() ? space.n : static_cast<std::size_t>(std::count(active.begin(), active.end(), 1));
  }

  void validate() const {
    if (!(alpha >= 0)) throw ParameterError("frostman: alpha must be >= 0");
    if (!(M >= 1)) throw ParameterError("frostman: M must be >= 1");
    if (grid.empty()) throw ParameterError("frostman: empty radius grid");
    for (double r : grid)
      if (r < M - kDistEps) throw ParameterError("frostman: grid radius below M");
    if (h.size() != space.n) throw ParameterError("frostman: h must have one value per vertex");
    for (double x : h)
      if (!(x >= 0)) throw ParameterError("frostman: h must be nonnegative");
    if (!active.empty() && active.size() != space.n) throw ParameterError("frostman: active mask size");
    if (population() == 0) throw ParameterError("frostman: no active vertices");
  }
};

inline constexpr std::size_t kMaxGridRadii = 10000;

// Integer metrics: the integers in [M, r_max]. Otherwise the distinct
// pairwise distances in [M, r_max] together with M, capped.
inline std::vector<double> radius_grid(const FiniteMetricSpace& s, double M, double r_max, bool* capped = nullptr) {
  bool integral = std::all_of(s.dist.begin(), s.dist.end(), [](double d) { return d == std::floor(d); });
  std::vector<double> g;
  if (capped) *capped = false;
  if (integral) {
    for (double r = std::ceil(M - kDistEps); r <= r_max + kDistEps; ++r) g.push_back(std::max(r, M));
  } else {
    std::set<double> d{M};
    for (double x : s.dist)
      if (x >= M && x <= r_max) d.insert(x);
    g.assign(d.begin(), d.end());
  }
  if (g.size() > kMaxGridRadii) {
    g.resize(kMaxGridRadii);
    if (capped) *capped = true;
  }
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

inline FrostmanInstance make_instance(FiniteMetricSpace s, double alpha, double M, double r_max,
                                      std::vector<double> h = {}) {
  FrostmanInstance in;
  if (h.empty()) h.assign(s.n, 1.0);
  in.grid = radius_grid(s, M, r_max, &in.grid_capped);
  in.space = std::move(s);
  in.alpha = alpha;
  in.M = M;
  in.h = std::move(h);
  in.validate();
  return in;
}

struct FrostmanSolution {
  std::vector<double> w;
  WeightedBallCollection dual;
  double primal = 0, dual_value = 0, gap = 0;
  double primal_residual = 0;  // max over (v, r) of w(N_r(v)) - r^alpha, positive part
  double dual_residual = 0;    // max over v of h(v) - coverage(v), positive part
  long iterations = 0;

  bool certified(double tol = 1e-6) const {
    double s = tol * std::max(1.0, std::abs(dual_value));
    return primal_residual <= 1e-9 && dual_residual <= 1e-9 && std::abs(gap) <= s;
  }
};

inline double ball_bound(double r, double alpha) { return alpha == 0 ? 1.0 : std::pow(r, alpha); }

// Certificates by direct substitution over every centre and grid radius.
inline double primal_residual(const FrostmanInstance& in, const std::vector<double>& w) {
  double worst = 0;
  for (VertexId v = 0; v < in.space.n; ++v) {
    if (!in.is_active(v)) continue;
    for (double r : in.grid) {
      long double s = 0;
      for (VertexId u = 0; u < in.space.n; ++u)
        if (in.space.distance(v, u) <= r + kDistEps) s += w[u];
      worst = std::max(worst, static_cast<double>(s) - ball_bound(r, in.alpha));
    }
  }
  return std::max(0.0, worst);
}

inline double dual_residual(const FrostmanInstance& in, const WeightedBallCollection& coll) {
  std::vector<long double> cover(in.space.n, 0);
  for (const auto& e : coll.entries)
    for (VertexId u = 0; u < in.space.n; ++u)
      if (in.space.distance(e.center, u) <= e.radius + kDistEps) cover[u] += e.cost;
  double worst = 0;
  for (VertexId v = 0; v < in.space.n; ++v)
    if (in.is_active(v)) worst = std::max(worst, in.h[v] - static_cast<double>(cover[v]));
  return std::max(0.0, worst);
}

// max (1/|V|) sum_v w(v) h(v) over w >= 0 with w(N_r(v)) <= r^alpha; the dual
// is a weighted ball cover of h minimising (1/|V|) sum c_r(u) r^alpha.
inline FrostmanSolution xi_lp(const FrostmanInstance& in) {
  in.validate();
  const auto n = in.space.n;
  const double pop = static_cast<double>(in.population());
  // one row per distinct (ball, bound); keep the smallest bound per ball
  struct Row {
    VertexId center;
    double radius, bound;
  };
  std::map<std::vector<std::uint8_t>, Row> rows;
  for (VertexId v = 0; v < n; ++v) {
    if (!in.is_active(v)) continue;
    for (double r : in.grid) {
      std::vector<std::uint8_t> mask(n, 0);
      for (VertexId u = 0; u < n; ++u) mask[u] = in.space.distance(v, u) <= r + kDistEps;
      Row row{v, r, ball_bound(r, in.alpha)};
      auto [it, fresh] = rows.emplace(std::move(mask), row);
      if (!fresh && row.bound < it->second.bound) it->second = row;
    }
  }
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  std::vector<Row> meta;
  for (const auto& [mask, row] : rows) {
    A.emplace_back(mask.begin(), mask.end());
    b.push_back(row.bound);
    meta.push_back(row);
  }
  std::vector<double> c(n, 0);
  for (VertexId v = 0; v < n; ++v)
    if (in.is_active(v)) c[v] = in.h[v] / pop;
  auto res = simplex_max(A, b, c);

  FrostmanSolution sol;
  sol.iterations = res.iterations;
  sol.w = res.x;
  long double p = 0;
  for (VertexId v = 0; v < n; ++v) p += c[v] * sol.w[v];
  sol.primal = static_cast<double>(p);
  long double d = 0;
  for (std::size_t i = 0; i < meta.size(); ++i) {
    double cost = res.y[i] * pop;
    if (cost <= 1e-14) continue;
    sol.dual.add(meta[i].center, meta[i].radius, cost);
    d += static_cast<long double>(cost) * meta[i].bound / pop;
  }
  sol.dual_value = static_cast<double>(d);
  sol.gap = sol.dual_value - sol.primal;
  sol.primal_residual = primal_residual(in, sol.w);
  sol.dual_residual = dual_residual(in, sol.dual);
  if (sol.primal_residual > 1e-7 || sol.dual_residual > 1e-7)
    throw SolverError("xi_lp: certificate failed, primal residual " + std::to_string(sol.primal_residual) +
                      ", dual residual " + std::to_string(sol.dual_residual));
  return sol;
}

struct SymmetryReport {
  double general = 0, constant = 0, constant_weight = 0;
  double ball_M = 0;       // |N_M(e)|
  bool match = false;      // constant optimum equals the general optimum
  bool inequality = false; // xi |N_M(e)| <= M^alpha
};

// Vertex-transitive instances: the best constant weight is
// min_r r^alpha / |N_r(e)| and should already be optimal.
inline SymmetryReport xi_symmetry_check(const FrostmanInstance& in, double tol = 1e-6) {
  if (!in.space.transitive) throw std::invalid_argument("xi_symmetry_check: space is not vertex-transitive");
  SymmetryReport rep;
  rep.general = xi_lp(in).primal;
  double t = std::numeric_limits<double>::infinity();
  auto ball = [&](double r) {
    double k = 0;
    for (VertexId u = 0; u < in.space.n; ++u) k += in.space.distance(0, u) <= r + kDistEps;
    return k;
  };
  for (double r : in.grid) t = std::min(t, ball_bound(r, in.alpha) / ball(r));
  rep.constant_weight = t;
  long double hs = 0;
  for (double x : in.h) hs += x;
  rep.constant = t * static_cast<double>(hs) / static_cast<double>(in.space.n);
  rep.match = std::abs(rep.general - rep.constant) <= tol * std::max(1.0, rep.general);
  rep.ball_M = ball(in.M);
  double hmax = *std::max_element(in.h.begin(), in.h.end());
  // with h <= 1 the optimum is at most the constant weight bound M^alpha/|N_M|
  rep.inequality = hmax > 1 + 1e-12 || rep.general * rep.ball_M <= ball_bound(in.M, in.alpha) * (1 + tol);
  return rep;
}

struct ContentSandwich {
  double b = 0, upper = 0;
  double part_ii = 0, best_a = 0;  // inf over the a-grid of M^alpha mean e^{-a h} + a xi
};

inline ContentSandwich content_sandwich(const FrostmanInstance& in, const std::vector<double>& a_grid = {}) {
  if (std::abs(in.M - 1) > 1e-12) throw std::invalid_argument("content_sandwich: requires M = 1");
  for (double x : in.h)
    if (x != 1) throw std::invalid_argument("content_sandwich: requires h = 1");
  ContentSandwich s;
  s.b = xi_lp(in).primal;
  s.upper = s.b > 0 ? s.b + s.b * std::abs(std::log(s.b)) : 0;
  std::vector<double> grid = a_grid;
  if (grid.empty())
    for (int i = 0; i <= 400; ++i) grid.push_back(i * 0.025);
  s.part_ii = std::numeric_limits<double>::infinity();
  for (double a : grid) {
    long double m = 0;
    for (double x : in.h) m += std::exp(-a * x);
    double val = ball_bound(in.M, in.alpha) * static_cast<double>(m) / static_cast<double>(in.space.n) + a * s.b;
    if (val < s.part_ii) s.part_ii = val, s.best_a = a;
  }
  return s;
}

}  // namespace unidim
