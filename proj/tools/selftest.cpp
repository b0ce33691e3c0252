#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "runner.hpp"
#include "unidim/coverings.hpp"
#include "unidim/flows.hpp"
#include "unidim/frostman.hpp"
#include "unidim/spaces.hpp"

namespace unidim::cli {

namespace {

struct Check {
  std::string name;
  std::function<std::string()> run;  // empty string on success
};

double field(const RunResult& r, const char* key) {
  const auto& s = r.summary;
  if (s.contains(key) && s[key].is_number()) return s[key].get<double>();
  if (s.contains("details") && s["details"].contains(key) && s["details"][key].is_number()) return s["details"][key].get<double>();
  return NAN;
}

std::string run_config(const std::string& text, int jobs, RunResult& out) {
  RunOptions opt;
  opt.jobs = jobs;
  opt.write_files = false;
  out = run_experiment(Config::parse(text, "<selftest>"), opt);
  if (out.summary.contains("error")) return out.summary["error"]["message"].get<std::string>();
  return "";
}

std::string near(double got, double want, double tol) {
  if (std::abs(got - want) <= tol) return "";
  return "got " + std::to_string(got) + ", want " + std::to_string(want) + " +- " + std::to_string(tol);
}

}  // namespace

int run_selftest(std::ostream& out, int jobs) {
  std::vector<Check> checks = {
      {"lattice growth slope", [&] {
         RunResult r;
         auto e = run_config("space.kind = lattice\nspace.k = 2\nestimator.kind = growth\ntrials = 2\nradii = 8,16,32,64\n", jobs, r);
         return e.empty() ? near(field(r, "slope"), 2.0, 0.1) : e;
       }},
      {"cycle frostman value", [&] {
         RunResult r;
         auto e = run_config("space.kind = cycle\nspace.n = 41\nestimator.kind = frostman-lp\nestimator.alpha = 1\n"
                             "estimator.M = 2\nestimator.rmax = 10\n",
                             jobs, r);
         return e.empty() ? near(field(r, "primal"), 0.4, 1e-6) : e;
       }},
      {"drainage max flow equals min cut", [&] {
         RunResult r;
         auto e = run_config("space.kind = drainage\nestimator.kind = maxflow\nestimator.levels = 0,2,4\ntrials = 50\n", jobs, r);
         if (!e.empty()) return e;
         return r.exit_code == kExitOk ? std::string() : "exit code " + std::to_string(r.exit_code);
       }},
      {"edge list round trip", [] {
         FlowTree t;
         auto top = t.add(-1, 0, 2, -1);
         auto a = t.add(static_cast<std::int64_t>(top), 1.5, 1, -1);
         t.add(static_cast<std::int64_t>(a), 1, 0, -1);
         t.add(static_cast<std::int64_t>(a), 0.25, 0, -1);
         tree_maxflow(t);
         std::stringstream ss;
         write_edge_list(ss, t);
         auto back = read_edge_list(ss);
         tree_maxflow(back);
         for (std::size_t v = 0; v < t.size(); ++v)
           if (std::abs(t.f[v] - back.f[v]) > 1e-12 || t.c[v] != back.c[v]) return std::string("mismatch at vertex ") + std::to_string(v);
         return std::string();
       }},
      {"random trees: max flow equals pruned cut", [] {
         RngStream rng(3);
         for (int i = 0; i < 200; ++i) {
           FlowTree t;
           t.add(-1, 0, 0);
           auto r = rng.derive("tree", i);
           for (int e = 0; e < 1 + i % 40; ++e) t.add(r.below(static_cast<std::int64_t>(t.size())), r.exponential(), 0);
           auto fr = tree_maxflow(t);
           auto cut = cut_minimality_prune(t, tree_mincut(t, fr));
           if (std::abs(cut_conductance(t, cut) - fr.value[0]) > 1e-9 * std::max(1.0, fr.value[0]) || flow_residual(t) > 1e-9)
             return "tree " + std::to_string(i);
         }
         return std::string();
       }},
      {"cube covering multiplicity <= 3^k", [] {
         for (int k = 1; k <= 2; ++k)
           for (std::uint64_t t = 0; t < 20; ++t) {
             auto w = RandomizedCantor(2, 0.7, k, 5).sample(t, 24);
             auto rep = covering_validate(w, cube_covering(w, 3, CubeRule::LexicographicLeast, RngStream(t)));
             if (!rep.valid || rep.max_multiplicity > (k == 1 ? 3 : 9)) return "k=" + std::to_string(k) + " trial " + std::to_string(t);
           }
         return std::string();
       }},
      {"mass transport on finite transitive spaces", [] {
         RngStream g(4);
         for (const auto& s : {cycle(11), torus(4, 2), heisenberg_quotient(3)}) {
           std::vector<double> f(s.size() * s.size());
           for (auto& x : f) x = g.uniform();
           double res = mtp_residual(s, [&](const FiniteMetricSpace& sp, VertexId u, VertexId v) { return f[u * sp.size() + v]; });
           if (res > 1e-12) return s.name + " residual " + std::to_string(res);
         }
         return std::string();
       }},
      {"fractional-linear generating function", [] {
         for (double a : {0.5, 2.0})
           for (int n : {1, 4, 8})
             for (double s : {0.3, 0.7})
               if (std::abs(fractional_linear_closed_form(a, n, s) - gf_iterate(OffspringDistribution::fractional_linear(a), n, s)) > 1e-12)
                 return std::string("closed form disagrees");
         return std::string();
       }},
      {"point-process Frostman weight bound", [] {
         auto w = WalkImage(0.5, 6).sample(0, 2 * 256 + 2);
         auto pp = frostman_weight_pp(w, 0.5, 2, 8, RngStream(6));
         if (!pp.flow_ok) return std::string("flow solve failed");
         return pp.violations.empty() ? std::string() : std::to_string(pp.violations.size()) + " violations";
       }},
      {"unknown key rejected", [&] {
         RunResult r;
         auto e = run_config("space.kind = lattice\nestimator.kind = growth\nradii = 2,4\nspace.bogus = 1\n", jobs, r);
         return r.exit_code == kExitError && e.find("space.bogus") != std::string::npos ? "" : "accepted an unknown key";
       }},
  };
  int failed = 0;
  for (const auto& c : checks) {
    std::string msg;
    try {
      msg = c.run();
    } catch (const std::exception& e) {
      msg = e.what();
    }
    out << (msg.empty() ? "PASS " : "FAIL ") << c.name << (msg.empty() ? "" : ": " + msg) << "\n";
    failed += !msg.empty();
  }
  return failed ? kExitHypothesis : kExitOk;
}

}  // namespace unidim::cli
