// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>

#include "flow_oracle.hpp"
#include "unidim/core.hpp"
#include "unidim/coverings.hpp"
#include "unidim/dimension.hpp"
#include "unidim/flows.hpp"
#include "unidim/frostman.hpp"
#include "unidim/spaces.hpp"

using namespace unidim;

namespace {

const int kJobs = std::max(1u, std::thread::hardware_concurrency());

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [fails: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double time_limit, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " exception: " << e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit > 0 && secs > time_limit) {
    o.pass = false;
    o.detail << " [fails: runtime over " << time_limit << " s]";
  }
  failures += !o.pass;
  std::printf("%s %2d %s:%s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.str().c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(double x, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, x);
  return buf;
}

// iid Bernoulli(p) subset of Z^k in the sup-ball of radius R, origin forced in.
RootedWindow bernoulli_pattern(int k, int R, double p, RngStream rng) {
  std::vector<double> coords;
  VertexId root = 0;
  std::size_t n = 0;
  std::vector<int> x(static_cast<std::size_t>(k), -R);
  for (;;) {
    bool origin = std::all_of(x.begin(), x.end(), [](int v) { return v == 0; });
    if (origin || rng.uniform() < p) {
      if (origin) root = n;
      for (int v : x) coords.push_back(v);
      ++n;
    }
    int i = 0;
    while (i < k && ++x[static_cast<std::size_t>(i)] > R) x[static_cast<std::size_t>(i++)] = -R;
    if (i == k) break;
  }
  return RootedWindow::from_coords(k, std::move(coords), Norm::Sup, root, R);
}

// Max flow against the augmenting-path oracle and the pruned cut, per component.
struct TreeAudit {
  double worst_oracle = 0, worst_cut = 0, worst_residual = 0;
  bool cuts_ok = true;
  int components = 0;
};

void audit_tree(FlowTree& t, TreeAudit& a) {
  auto fr = tree_maxflow(t);
  a.worst_residual = std::max(a.worst_residual, flow_residual(t));
  auto cut = cut_minimality_prune(t, tree_mincut(t, fr));
  a.cuts_ok = a.cuts_ok && is_cutset(t, cut);
  for (auto top : t.tops()) {
    if (t.children[top].empty()) continue;
    double v = fr.value[top];
    double scale = std::max(1.0, v);
    a.worst_oracle = std::max(a.worst_oracle, std::abs(v - testing::augmenting_path_value(t, top)) / scale);
    a.worst_cut = std::max(a.worst_cut, std::abs(v - cut_conductance(t, cut, static_cast<std::int64_t>(top))) / scale);
    ++a.components;
  }
}

double exp_mark(std::uint64_t tree, VertexId v) { return RngStream(99).derive("cond", static_cast<std::int64_t>(tree), static_cast<std::int64_t>(v)).exponential(); }

}  // namespace

int main() {
  std::printf("acceptance run with %d worker thread(s)\n", kJobs);

  criterion(1, "drainage network growth slope", 120, [](Outcome& o) {
    auto rep = growth_report(Drainage(1), weights::counting(), {8, 16, 32, 64, 128}, 2000, 1, kJobs);
    double s = rep.mean_fit.slope;
    o.detail << " slope " << fmt(s) << " over 2000 trials, target 1.5 +- 0.1";
    o.require(rep.valid(), "truncated trials");
    o.require(std::abs(s - 1.5) <= 0.1, "slope");
  });

  criterion(2, "SRW zero set growth slope", 120, [](Outcome& o) {
    auto rep = growth_report(WalkZeros(2), weights::counting(), dyadic_grid(4, 12), 2000, 2, kJobs);
    double s = rep.mean_fit.slope;
    o.detail << " slope " << fmt(s) << " over 2000 trials, target 0.5 +- 0.07";
    o.require(rep.valid(), "truncated trials");
    o.require(std::abs(s - 0.5) <= 0.07, "slope");
  });

  criterion(3, "EGW Poisson(1) growth and quadratic mean bound", 180, [](Outcome& o) {
    auto rep = growth_report(EternalGW(OffspringDistribution::poisson(1), 3), weights::counting(), log_grid(16, 128, 4),
                             2000, 3, kJobs);
    double s = rep.mean_fit.slope, worst = 0;
    for (std::size_t i = 0; i < rep.radii.size(); ++i)
      worst = std::max(worst, rep.mean_curve[i] / (2 * rep.radii[i] * rep.radii[i]));
    o.detail << " slope " << fmt(s) << " (target 2 +- 0.15), max mean/(2n^2) " << fmt(worst) << " (limit 1.05)";
    o.require(rep.valid(), "truncated trials");
    o.require(std::abs(s - 2) <= 0.15, "slope");
    o.require(worst <= 1.05, "mean bound");
  });

  criterion(4, "digit restriction Billingsley intervals", 0, [](Outcome& o) {
    auto grid = log_grid(16, 16384, 4);
    auto even = growth_report(DigitRestriction(DigitSet::even(), 4), weights::counting(), grid, 1000, 4, kJobs);
    auto be = billingsley_interval(even, RngStream(4).derive("boot"));
    o.detail << " even J: [" << fmt(be.lower) << ", " << fmt(be.upper) << "] (target 0.5 +- 0.07)";
    o.require(std::abs(be.lower - 0.5) <= 0.07 && std::abs(be.upper - 0.5) <= 0.07, "even J endpoints");
    auto block = growth_report(DigitRestriction(DigitSet::tower({0, 4, 9, 27}), 5), weights::counting(), grid, 1000, 5, kJobs);
    auto bb = billingsley_interval(block, RngStream(5).derive("boot"));
    o.detail << "; block J: lower " << fmt(bb.lower) << " (<= 0.2), upper " << fmt(bb.upper) << " (>= 0.8)";
    o.require(bb.lower <= 0.2 && bb.upper >= 0.8, "block J proxies");
  });

  criterion(5, "randomized Cantor set", 0, [](Outcome& o) {
    auto rep = growth_report(RandomizedCantor(2, 0.8, 1, 6), weights::counting(), log_grid(16, 4096, 4), 2000, 6, kJobs);
    double target = 1 + std::log2(0.8), s = rep.mean_fit.slope;
    o.detail << " p=0.8 slope " << fmt(s) << " (target " << fmt(target) << " +- 0.08)";
    o.require(rep.valid() && std::abs(s - target) <= 0.08, "slope");
    RandomizedCantor crit(2, 0.5, 1, 7);
    int empty = 0, more = 0;
    const int T = 2000;
    for (int t = 0; t < T; ++t) {
      auto w = crit.sample(static_cast<std::uint64_t>(t), 4096);
      empty += w.size() == 0;
      more += w.size() > 1;
    }
    o.detail << "; p=0.5: " << T - empty << "/" << T << " windows nonempty, " << more << " with a second point";
    o.require(empty == 0, "empty window");
  });

  criterion(6, "Cayley graph growth", 300, [](Outcome& o) {
    auto z = Cayley(Cayley::Preset::Zk, 2).sphere_counts(512);
    std::vector<double> r, v;
    for (double x : log_grid(32, 512, 4)) {
      r.push_back(std::floor(x));
      v.push_back(static_cast<double>(z[static_cast<std::size_t>(x)]));
    }
    for (std::size_t i = 0; i < r.size(); ++i)
      o.require(v[i] == 2 * r[i] * r[i] + 2 * r[i] + 1, "Z^2 ball count at r=" + fmt(r[i]));
    double sz = slope_fit(r, v).slope;
    auto h = Cayley(Cayley::Preset::Heisenberg).sphere_counts(40);
    std::vector<double> hr, hv;
    for (int x : {10, 14, 20, 28, 40}) {
      hr.push_back(x);
      hv.push_back(static_cast<double>(h[static_cast<std::size_t>(x)]));
    }
    double sh = slope_fit(hr, hv).slope;
    o.detail << " Z^2 slope " << fmt(sz) << " (2 +- 0.02), Heisenberg slope " << fmt(sh) << " on r in [10,40] (4 +- 0.3)";
    o.require(std::abs(sz - 2) <= 0.02, "Z^2 slope");
    o.require(std::abs(sh - 4) <= 0.3, "Heisenberg slope");
  });

  criterion(7, "max flow equals min cut on truncated trees", 0, [](Outcome& o) {
    GeneralizedCanopy canopy(LevelSequence::linear(1), 11);
    EternalGW egw(OffspringDistribution::poisson(1), 12);
    WalkImage img(0.5, 13);
    TreeAudit a;
    int kinds[3] = {0, 0, 0};
    for (std::uint64_t i = 0; i < 1000; ++i) {
      auto cond = [i](VertexId v) { return exp_mark(i, v); };
      FlowTree t;
      switch (i % 3) {
        case 0: t = truncate_forest(canopy.sample(i, 14), 1 + static_cast<std::int64_t>(i % 5), cond); break;
        case 1: t = truncate_forest(egw.sample(i, 16), 1 + static_cast<std::int64_t>(i % 6), cond); break;
        default: {
          auto w = img.sample(i, 2 * 64 + 2);
          auto bt = build_badic_tree(w, 2, 6, 0.7, RngStream(13).derive("shift", static_cast<std::int64_t>(i)));
          t = bt.tree;
          for (std::size_t v = 0; v < t.size(); ++v)
            if (!t.is_top(v)) t.c[v] = exp_mark(i, v);
        }
      }
      ++kinds[i % 3];
      audit_tree(t, a);
    }
    o.detail << " " << kinds[0] << " canopy, " << kinds[1] << " EGW, " << kinds[2] << " b-adic trees, " << a.components
             << " components; max rel |flow-oracle| " << fmt(a.worst_oracle, 3) << ", |flow-cut| " << fmt(a.worst_cut, 3)
             << ", residual " << fmt(a.worst_residual, 3);
    o.require(a.worst_oracle <= 1e-9, "oracle mismatch");
    o.require(a.worst_cut <= 1e-9, "cut mismatch");
    o.require(a.worst_residual <= 1e-9, "residual");
    o.require(a.cuts_ok, "pruned cut is not a cut-set");
  });

  criterion(8, "Frostman LP on cycles and tori", 0, [](Outcome& o) {
    auto in = make_instance(cycle(41), 1, 2, 10);
    auto sol = xi_lp(in);
    o.detail << " Z_41: primal " << fmt(sol.primal, 12) << ", dual " << fmt(sol.dual_value, 12) << ", gap " << fmt(sol.gap, 3);
    o.require(std::abs(sol.primal - 0.4) <= 1e-6 && std::abs(sol.dual_value - 0.4) <= 1e-6, "value 2/5");
    o.require(sol.gap <= 1e-6 && sol.certified(), "certificate");
    bool sym = true;
    for (const auto& s : {cycle(17), cycle(41), torus(7, 2), torus(6, 2, true)}) {
      auto rep = xi_symmetry_check(make_instance(s, 1, 2, 6));
      sym = sym && rep.match && rep.inequality;
    }
    o.detail << "; symmetry check on Z_17, Z_41, Z_7^2, Z_6^2 " << (sym ? "passes" : "fails");
    o.require(sym, "symmetry");
  });

  criterion(9, "Frostman point-process weight bound", 0, [](Outcome& o) {
    WalkImage img(0.5, 21);
    Lattice line(1);
    std::size_t checked = 0, viol = 0, flow_bad = 0;
    int windows = 0;
    const double horizon = 2 * 1024 + 2;
    for (int t = 0; t < 100; ++t)
      for (int which = 0; which < 2; ++which) {
        double alpha = t % 2 ? 1.0 : 0.5;
        auto w = which ? line.sample(static_cast<std::uint64_t>(t), horizon) : img.sample(static_cast<std::uint64_t>(t), horizon);
        auto pp = frostman_weight_pp(w, alpha, 2, 10, RngStream(22).derive("pp", which, t));
        checked += pp.checked;
        viol += pp.violations.size();
        flow_bad += !pp.flow_ok;
        ++windows;
      }
    o.detail << " " << windows << " windows (100 walk image, 100 lattice, alpha in {0.5, 1}), " << checked
             << " (v, r) pairs checked, " << viol << " violations";
    o.require(viol == 0, "ball bound violated");
    o.require(flow_bad == 0, "flow solve");
  });

  criterion(10, "offspring generating functions", 0, [](Outcome& o) {
    const int N = 40000;
    double worst_z = 0, worst_closed = 0;
    for (int law = 0; law < 2; ++law) {
      auto mu = law == 0 ? OffspringDistribution::poisson(1) : OffspringDistribution::fractional_linear(2);
      for (int n : {2, 5, 8}) {
        std::vector<std::int64_t> d(N);
        for (int i = 0; i < N; ++i) d[static_cast<std::size_t>(i)] = gw_generation_size(mu, n, RngStream(31).derive("gw", law * 10 + n, i));
        for (double s : {0.3, 0.7}) {
          std::vector<double> x(N);
          for (int i = 0; i < N; ++i) x[static_cast<std::size_t>(i)] = std::pow(s, static_cast<double>(d[static_cast<std::size_t>(i)]));
          double z = std::abs(mean_of(x) - gf_iterate(mu, n, s)) / sem_of(x);
          worst_z = std::max(worst_z, z);
        }
      }
    }
    for (double a : {0.5, 1.0, 2.0, 3.0})
      for (int n : {1, 2, 5, 8})
        for (double s : {0.0, 0.3, 0.7, 1.0})
          worst_closed = std::max(worst_closed, std::abs(fractional_linear_closed_form(a, n, s) -
                                                         gf_iterate(OffspringDistribution::fractional_linear(a), n, s)));
    o.detail << " max |MC - f^(n)| / se " << fmt(worst_z, 3) << " (limit 3), max |closed form - iterate| "
             << fmt(worst_closed, 3) << " (limit 1e-12)";
    o.require(worst_z <= 3, "Monte Carlo");
    o.require(worst_closed <= 1e-12, "closed form");
  });

  criterion(11, "covering properties", 0, [](Outcome& o) {
    RngStream rng(41);
    int worst_excess = -100, invalid = 0;
    for (int t = 0; t < 10000; ++t) {
      int k = 1 + t % 3;
      int R = k == 3 ? 4 : k == 2 ? 7 : 12;
      auto pr = rng.derive("pat", t);
      auto w = bernoulli_pattern(k, R, pr.uniform(), pr.derive("pts"));
      double r = 1 + std::floor(pr.uniform() * 4) + (t % 2 ? 0.5 : 0.0);
      auto rule = t % 4 < 2 ? CubeRule::LexicographicLeast : CubeRule::WeightProportional;
      auto rep = covering_validate(w, cube_covering(w, r, rule, pr.derive("cov")));
      invalid += !rep.valid;
      worst_excess = std::max(worst_excess, rep.max_multiplicity - static_cast<int>(std::pow(3, k)));
    }
    o.detail << " 10^4 windows: " << invalid << " invalid, max multiplicity - 3^k = " << worst_excess;
    o.require(invalid == 0 && worst_excess <= 0, "multiplicity");
    double worst_z = 0;
    for (double r : {1.0, 2.0, 3.0, 5.0, 8.0, 13.0}) {
      const int T = 20000;
      auto est = covering_intensity(Lattice(1), cube_root_radius(r, CubeRule::LexicographicLeast), r, r, T, 42, false, kJobs);
      double sd = std::sqrt((1 / r) * (1 - 1 / r) / T);
      double z = sd > 0 ? std::abs(est.estimate - 1 / r) / sd : (est.estimate == 1 ? 0 : 1e9);
      worst_z = std::max(worst_z, z);
    }
    o.detail << "; Z intensity max |est - 1/r| / sd " << fmt(worst_z, 3) << " (limit 3)";
    o.require(worst_z <= 3, "Z intensity");
    double worst_mtp = 0;
    RngStream g(43);
    for (const auto& s : {cycle(9), cycle(41), torus(5, 2), torus(4, 3, true), heisenberg_quotient(3), heisenberg_quotient(4)}) {
      std::vector<double> f(s.size() * s.size());
      for (auto& x : f) x = g.uniform() * 10 - 3;
      worst_mtp = std::max(worst_mtp, mtp_residual(s, [&](const FiniteMetricSpace& sp, VertexId u, VertexId v) {
                             return f[u * sp.size() + v];
                           }));
    }
    o.detail << "; max mtp residual " << fmt(worst_mtp, 3);
    o.require(worst_mtp <= 1e-12, "mtp residual");
  });

  criterion(12, "inequality suites", 0, [](Outcome& o) {
    struct Gen {
      std::string name;
      ModelPtr model;
      std::vector<double> grid;
      int trials;
    };
    auto big = log_grid(16, 4096, 4), small = log_grid(2, 256, 4);
    std::vector<Gen> gens = {
        {"lattice Z", std::make_shared<Lattice>(1), big, 50},
        {"lattice Z^2", std::make_shared<Lattice>(2), log_grid(8, 512, 4), 10},
        {"drainage", std::make_shared<Drainage>(51), small, 400},
        {"ugw poisson(1)", std::make_shared<UnimodularGW>(OffspringDistribution::poisson(1), false, 5, 52), small, 400},
        {"egw poisson(1)", std::make_shared<EternalGW>(OffspringDistribution::poisson(1), 53), small, 400},
        {"srw_image 0.5", std::make_shared<WalkImage>(0.5, 54), big, 400},
        {"srw_zeros", std::make_shared<WalkZeros>(55), big, 400},
        {"srw_graph", std::make_shared<WalkGraph>(true, 56), log_grid(2, 128, 4), 100},
        {"digits even", std::make_shared<DigitRestriction>(DigitSet::even(), 57), big, 400},
        {"cantor 0.8", std::make_shared<RandomizedCantor>(2, 0.8, 1, 58), big, 400},
    };
    bool chain = true;
    o.detail << " Billingsley chain (fraction ordered / fraction limsup <= mean + 0.05):";
    for (const auto& g : gens) {
      auto rep = growth_report(*g.model, weights::counting(), g.grid, g.trials, 60, kJobs);
      auto m = monotone_check(rep, 0.05);
      bool ok = rep.valid() && m.fraction_ordered == 1.0 && m.fraction_ok >= 0.95;
      chain = chain && ok;
      o.detail << " " << g.name << " " << fmt(m.fraction_ordered, 3) << "/" << fmt(m.fraction_ok, 3);
    }
    o.require(chain, "Billingsley chain below 95%");

    auto mk = euclidean_minkowski_estimate(WalkImage(0.5, 61), weights::counting(), log_grid(16, 1024, 2), 400, 61, kJobs);
    o.detail << "; Minkowski chain cube " << fmt(mk.decay_cube) << " <= ball " << fmt(mk.decay_ball) << " <= growth "
             << fmt(mk.growth_mean);
    o.require(mk.chain_ok, "Minkowski chain");

    auto unit = [](const RootedWindow&, VertexId) { return 1.0; };
    int chain_bad = 0, flow_trials = 0;
    for (std::int64_t n : {1, 2, 4, 8}) {
      auto a = flow_norm_estimate(EternalGW(OffspringDistribution::poisson(1), 62), n, 1000, unit, kJobs);
      auto b = flow_norm_estimate(Drainage(63), n, 1000, unit, kJobs);
      auto c = flow_norm_estimate(GeneralizedCanopy(LevelSequence::linear(1), 64), n, 1000, unit, kJobs);
      chain_bad += a.chain_violations + b.chain_violations + c.chain_violations;
      flow_trials += a.trials + b.trials + c.trials;
    }
    auto bn = badic_flow_norm(WalkImage(0.5, 65), 2, 6, 0.5, 1000, 65, kJobs);
    chain_bad += bn.chain_violations;
    flow_trials += bn.trials;
    o.detail << "; flow chain violations " << chain_bad << " in " << flow_trials << " trials";
    o.require(chain_bad == 0, "flow norm above cut");

    auto z = std::make_shared<Lattice>(1);
    auto zeros = std::make_shared<WalkZeros>(66);
    auto grid = log_grid(16, 4096, 4);
    auto r1 = growth_report(*z, weights::counting(), grid, 1, 66, kJobs);
    auto r2 = growth_report(*zeros, weights::counting(), grid, 1000, 66, kJobs);
    auto rp = growth_report(Product(z, zeros), weights::counting(), grid, 1000, 66, kJobs);
    double lo = r1.mean_fit.slope + r2.mean_fit.slope, hi = lo, sp = rp.mean_fit.slope;
    o.detail << "; product Z x zeros slope " << fmt(sp) << " vs sum of factors " << fmt(lo);
    o.require(rp.valid() && sp >= lo - 0.15 && sp <= hi + 0.15, "product bounds");
  });

  std::printf("%s: %d criterion(s) failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
