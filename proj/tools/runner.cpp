#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "registry.hpp"
#include "unidim/core.hpp"
#include "unidim/dimension.hpp"
#include "unidim/flows.hpp"
#include "unidim/frostman.hpp"

namespace unidim::cli {

namespace {

using Json = nlohmann::ordered_json;
using Exec = std::function<void(RunResult&)>;

struct Common {
  std::string estimator;
  std::uint64_t seed = 1;
  int trials = 1000;
  int jobs = 1;
  std::optional<double> check_slope, check_value;
  double slope_tol = 0.1, value_tol = 1e-6;
};

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json interval(double lo, double hi) { return Json::array({number(lo), number(hi)}); }

void add_flag(RunResult& r, const std::string& f) { r.summary["flags"].push_back(f); }

std::vector<double> read_radii(const Config& cfg) {
  std::vector<double> g;
  if (cfg.has("radii")) {
    g = cfg.list("radii");
  } else {
    double lo = cfg.num("grid.lo", 16), hi = cfg.num("grid.hi", 1024);
    auto per = cfg.integer("grid.per_octave", 1);
    if (!(lo > 0) || !(hi > lo) || per < 1) throw ConfigError("grid: need 0 < grid.lo < grid.hi and grid.per_octave >= 1");
    g = log_grid(lo, hi, static_cast<int>(per));
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] > 0)) throw ConfigError("radii must be positive");
    if (i > 0 && !(g[i] > g[i - 1])) throw ConfigError("radii must be strictly increasing");
  }
  if (g.size() < 2) throw ConfigError("radii: need at least two radii");
  return g;
}

WeightSpec read_weight(const Config& cfg, const std::string& key, const std::string& fallback) {
  auto name = cfg.str(key, fallback);
  try {
    return weights::by_name(name);
  } catch (const std::invalid_argument& e) {
    std::string all;
    for (const auto& n : weights::names()) all += (all.empty() ? "" : ", ") + n;
    throw ConfigError(key + ": unknown weight '" + name + "' (" + all + ")");
  }
}

void curve_rows(RunResult& res, const GrowthReport& rep) {
  for (const auto& c : rep.curves) {
    if (c.truncated) continue;
    for (std::size_t i = 0; i < c.values.size(); ++i)
      res.rows.push_back({static_cast<std::int64_t>(c.trial), rep.radii[i], c.values[i]});
  }
}

void growth_fields(RunResult& res, const GrowthReport& rep, std::uint64_t seed) {
  auto& s = res.summary;
  s["slope"] = number(rep.mean_fit.slope);
  auto ci = mean_slope_ci(rep, RngStream(seed).derive("ci"));
  s["slope_ci"] = interval(ci.lo, ci.hi);
  s["essinf_lower"] = number(rep.essinf_lower_p5);
  s["essinf_upper"] = number(rep.essinf_upper_p5);
  s["trials"] = rep.trials;
  s["truncations"] = rep.truncations;
  auto& d = s["details"];
  d["weight"] = rep.weight;
  d["radii"] = rep.radii;
  d["mean_curve"] = rep.mean_curve;
  d["mean_local_lower"] = number(rep.mean_local.lower);
  d["mean_local_upper"] = number(rep.mean_local.upper);
  d["essinf_lower_min"] = number(rep.essinf_lower_min);
  d["essinf_upper_min"] = number(rep.essinf_upper_min);
  d["degenerate_trials"] = rep.degenerate;
  if (rep.truncations > 0) {
    add_flag(res, "truncated");
    res.exit_code = kExitError;
  }
  if (rep.degenerate > 0) add_flag(res, "degenerate_trials");
  curve_rows(res, rep);
}

Exec prepare_growth(const Config& cfg, const Common& c, bool billingsley) {
  auto model = make_space(cfg, c.seed);
  auto weight = read_weight(cfg, "weight", "counting");
  auto radii = read_radii(cfg);
  LocalSlopeOptions lo;
  lo.smooth_octaves = cfg.num("estimator.smooth_octaves", lo.smooth_octaves);
  lo.window_octaves = cfg.num("estimator.window_octaves", lo.window_octaves);
  int boot = billingsley ? static_cast<int>(cfg.integer("estimator.bootstrap", 200)) : 0;
  return [=](RunResult& res) {
    auto rep = growth_report(*model, weight, radii, c.trials, c.seed, c.jobs, lo);
    growth_fields(res, rep, c.seed);
    if (billingsley && rep.valid() && !rep.usable().empty()) {
      auto b = billingsley_interval(rep, RngStream(c.seed).derive("billingsley"), boot);
      res.summary["essinf_lower"] = number(b.lower);
      res.summary["essinf_upper"] = number(b.upper);
      res.summary["details"]["essinf_lower_ci"] = interval(b.lower_ci.lo, b.lower_ci.hi);
      res.summary["details"]["essinf_upper_ci"] = interval(b.upper_ci.lo, b.upper_ci.hi);
    }
  };
}

Exec prepare_minkowski(const Config& cfg, const Common& c) {
  auto model = make_space(cfg, c.seed);
  if (!space_info(cfg.str("space.kind")).coordinates) throw ConfigError("minkowski-euclidean needs a coordinate pattern");
  auto weight = read_weight(cfg, "weight", "counting");
  auto radii = read_radii(cfg);
  int boot = static_cast<int>(cfg.integer("estimator.bootstrap", 200));
  return [=](RunResult& res) {
    auto e = euclidean_minkowski_estimate(*model, weight, radii, c.trials, c.seed, c.jobs, boot);
    auto& s = res.summary;
    s["slope"] = number(e.decay_cube);
    s["slope_ci"] = interval(e.decay_cube - 2 * e.sd_cube, e.decay_cube + 2 * e.sd_cube);
    s["trials"] = e.trials;
    s["truncations"] = e.truncations;
    auto& d = s["details"];
    d["radii"] = e.radii;
    d["cube_share"] = e.cube_share;
    d["ball_share"] = e.ball_share;
    d["mean_mass"] = e.mean_mass;
    d["decay_ball"] = number(e.decay_ball);
    d["growth_mean"] = number(e.growth_mean);
    d["sd"] = {{"cube", number(e.sd_cube)}, {"ball", number(e.sd_ball)}, {"growth", number(e.sd_growth)}};
    d["chain_ok"] = e.chain_ok;
    if (!e.chain_ok) add_flag(res, "chain_outside_2sd");
    if (e.truncations > 0) {
      add_flag(res, "truncated");
      res.exit_code = kExitError;
    }
    for (std::size_t t = 0; t < e.trial_ids.size(); ++t)
      for (std::size_t i = 0; i < radii.size(); ++i)
        res.rows.push_back({static_cast<std::int64_t>(e.trial_ids[t]), radii[i], e.trial_cube[t][i]});
  };
}

Exec prepare_mdp(const Config& cfg, const Common& c) {
  auto model = make_space(cfg, c.seed);
  auto weight = read_weight(cfg, "weight", "counting");
  auto radii = read_radii(cfg);
  double alpha = cfg.num("estimator.alpha"), cst = cfg.num("estimator.c"), M = cfg.num("estimator.M", 1);
  if (!(alpha >= 0) || !(cst > 0) || !(M >= 1)) throw ConfigError("mdp: need alpha >= 0, c > 0, M >= 1");
  return [=](RunResult& res) {
    auto m = mdp_content_bound(*model, weight, alpha, cst, M, radii, c.trials, c.seed, c.jobs);
    auto& s = res.summary;
    s["trials"] = m.trials;
    s["truncations"] = m.truncations;
    auto& d = s["details"];
    d["hypothesis_ok"] = m.hypothesis_ok;
    d["bound"] = number(m.bound);
    d["bound_sem"] = number(m.bound_sem);
    d["limsup_bound"] = number(m.limsup_bound);
    d["mean_root_weight"] = number(m.mean_root_weight);
    d["violations"] = m.violations.size();
    if (!m.violations.empty()) {
      const auto& v = m.violations.front();
      d["first_violation"] = {{"trial", v.trial}, {"r", v.r}, {"weight", v.weight}, {"limit", v.limit}};
    }
    if (m.truncations > 0) {
      add_flag(res, "truncated");
      res.exit_code = kExitError;
    } else if (!m.hypothesis_ok) {
      add_flag(res, "hypothesis_failed");
      res.exit_code = kExitHypothesis;
    }
    for (const auto& tc : m.curves) {
      if (tc.truncated) continue;
      for (std::size_t i = 0; i < tc.values.size(); ++i)
        res.rows.push_back({static_cast<std::int64_t>(tc.trial), m.radii[i], tc.values[i]});
    }
  };
}

Exec prepare_birkhoff(const Config& cfg, const Common& c) {
  auto model = make_space(cfg, c.seed);
  auto w1 = read_weight(cfg, "weight", "counting");
  auto w2 = read_weight(cfg, "estimator.weight2", "iid-uniform");
  auto radii = read_radii(cfg);
  double tol = cfg.num("estimator.tol", 0.05);
  return [=](RunResult& res) {
    auto b = birkhoff_compare(*model, w1, w2, radii, c.trials, c.seed, tol, c.jobs);
    growth_fields(res, b.first, c.seed);
    auto& d = res.summary["details"];
    d["weight2"] = w2.name;
    d["violation_rate"] = number(b.violation_rate);
    d["tol"] = tol;
    d["second_slope"] = number(b.second.mean_fit.slope);
    d["second_essinf_upper"] = number(b.second.essinf_upper_p5);
    if (b.second.truncations > 0 && res.exit_code == kExitOk) {
      add_flag(res, "truncated");
      res.exit_code = kExitError;
    }
    if (b.violation_rate > 0.05) add_flag(res, "inequality_violated");
  };
}

Exec prepare_frostman_lp(const Config& cfg, const Common& c) {
  auto space = make_finite_space(cfg);
  double alpha = cfg.num("estimator.alpha", 1), M = cfg.num("estimator.M", 1);
  double rmax = cfg.num("estimator.rmax", M + 4);
  auto target = cfg.str("estimator.target", "ones");
  if (target != "ones") throw ConfigError("estimator.target: only 'ones' is supported");
  bool symmetry = cfg.flag("estimator.symmetry", space.transitive);
  auto instance = make_instance(space, alpha, M, rmax);
  return [=](RunResult& res) {
    auto sol = xi_lp(instance);
    auto& s = res.summary;
    s["trials"] = 1;
    s["truncations"] = 0;
    auto& d = s["details"];
    d["primal"] = sol.primal;
    d["dual"] = sol.dual_value;
    d["gap"] = sol.gap;
    d["primal_residual"] = sol.primal_residual;
    d["dual_residual"] = sol.dual_residual;
    d["certified"] = sol.certified();
    d["grid"] = instance.grid;
    d["grid_capped"] = instance.grid_capped;
    d["instance"] = to_json(instance);
    d["solution"] = to_json(sol);
    if (instance.grid_capped) add_flag(res, "grid_capped");
    if (symmetry) {
      auto rep = xi_symmetry_check(instance);
      d["symmetry"] = {{"general", rep.general},
                       {"constant", rep.constant},
                       {"constant_weight", rep.constant_weight},
                       {"ball_M", rep.ball_M},
                       {"match", rep.match},
                       {"inequality", rep.inequality}};
      if (!rep.match || !rep.inequality) {
        add_flag(res, "symmetry_failed");
        res.exit_code = kExitHypothesis;
      }
    }
    if (!sol.certified()) {
      add_flag(res, "not_certified");
      res.exit_code = kExitError;
    }
    // per grid radius: the largest load w(N_r(v)) / r^alpha
    for (double r : instance.grid) {
      double worst = 0;
      for (VertexId v = 0; v < instance.space.n; ++v) {
        double m = 0;
        for (VertexId u = 0; u < instance.space.n; ++u)
          if (instance.space.distance(v, u) <= r + kDistEps) m += sol.w[u];
        worst = std::max(worst, m / ball_bound(r, alpha));
      }
      res.rows.push_back({0, r, worst});
    }
  };
}

// A single tree read from an edge-list file (space.kind = edges).
Exec prepare_edge_file(const Config& cfg) {
  auto path = cfg.str("space.file");
  std::ifstream in(path);
  if (!in) throw ConfigError("space.file: cannot open " + path);
  auto tree = std::make_shared<FlowTree>(read_edge_list(in));
  return [tree](RunResult& res) {
    auto& t = *tree;
    auto solved = solve_forest(t);
    Json comps = Json::array();
    bool ok = true;
    auto tops = t.tops();
    for (std::size_t i = 0; i < solved.checks.size(); ++i) {
      const auto& ch = solved.checks[i];
      auto top = tops[i];
      comps.push_back({{"top", top}, {"value", ch.value}, {"leaf_flow", ch.leaf_flow}, {"cut_capacity", ch.cut_capacity}});
      res.rows.push_back({static_cast<std::int64_t>(top), 0.0, ch.value});
      ok = ok && ch.ok();
    }
    res.summary["trials"] = 1;
    res.summary["details"]["components"] = comps;
    res.summary["details"]["residual"] = flow_residual(t);
    std::ostringstream edges, cut;
    write_edge_list(edges, t);
    for (std::size_t v = 0; v < t.size(); ++v)
      if (solved.cut[v]) cut << v << "\n";
    res.extra_files.emplace_back("flow.edges", edges.str());
    res.extra_files.emplace_back("cut.txt", cut.str());
    if (!ok) {
      add_flag(res, "flow_cut_chain_failed");
      res.exit_code = kExitHypothesis;
    }
  };
}

Exec prepare_maxflow(const Config& cfg, const Common& c) {
  auto kind = cfg.str("space.kind");
  if (kind == "edges") return prepare_edge_file(cfg);
  if (!space_info(kind).tree) throw ConfigError("maxflow needs a tree space (canopy, ugw, egw, pwit, drainage)");
  auto model = make_space(cfg, c.seed);
  auto levels = cfg.list("estimator.levels");
  for (double n : levels)
    if (n < 0 || n != std::floor(n)) throw ConfigError("estimator.levels: nonnegative integers");
  auto cond = cfg.str("estimator.conductance", "unit");
  ConductanceFn fn;
  if (cond == "unit") {
    fn = [](const RootedWindow&, VertexId) { return 1.0; };
  } else if (cond == "inverse-children") {
    fn = [](const RootedWindow& w, VertexId v) {
      double kids = 0;
      for (auto p : w.parents()) kids += p == static_cast<std::int64_t>(v);
      return 1.0 / (1.0 + kids);
    };
  } else {
    throw ConfigError("estimator.conductance: unit or inverse-children");
  }
  return [=](RunResult& res) {
    auto& s = res.summary;
    Json per = Json::array();
    int trials = 0, trunc = 0, bad = 0;
    std::vector<double> nx, norms;
    for (double n : levels) {
      auto e = flow_norm_estimate(*model, static_cast<std::int64_t>(n), c.trials, fn, c.jobs);
      per.push_back({{"n", n},
                     {"norm", number(e.norm)},
                     {"norm_sem", number(e.norm_sem)},
                     {"cut", number(e.cut)},
                     {"cut_sem", number(e.cut_sem)},
                     {"chain_violations", e.chain_violations}});
      trials += e.trials;
      trunc += e.truncations;
      bad += e.chain_violations;
      for (std::size_t t = 0; t < e.per_trial_norm.size(); ++t)
        res.rows.push_back({static_cast<std::int64_t>(t), n, e.per_trial_norm[t]});
    }
    s["trials"] = trials;
    s["truncations"] = trunc;
    s["details"]["levels"] = per;
    s["details"]["conductance"] = cond;
    if (trunc > 0) {
      add_flag(res, "truncated");
      res.exit_code = kExitError;
    } else if (bad > 0) {
      add_flag(res, "flow_cut_chain_failed");
      res.exit_code = kExitHypothesis;
    }
  };
}

Exec prepare_frostman_pp(const Config& cfg, const Common& c) {
  if (!space_info(cfg.str("space.kind")).coordinates) throw ConfigError("frostman-pp needs a coordinate pattern");
  auto model = make_space(cfg, c.seed);
  double alpha = cfg.num("estimator.alpha", 1);
  auto b = cfg.integer("estimator.b", 2), N = cfg.integer("estimator.levels", 10);
  if (alpha < 0 || b < 2 || N < 0 || N > 30) throw ConfigError("frostman-pp: need alpha >= 0, b >= 2, 0 <= levels <= 30");
  double side = std::pow(static_cast<double>(b), static_cast<double>(N));
  double horizon = cfg.num("estimator.horizon", 2 * side + 2);
  return [=](RunResult& res) {
    std::vector<double> root(static_cast<std::size_t>(c.trials), 0);
    std::vector<std::size_t> viol(root.size(), 0), checked(root.size(), 0);
    std::vector<std::uint8_t> trunc(root.size(), 0), flow_bad(root.size(), 0);
    std::vector<std::vector<double>> profile(root.size());
    std::vector<double> radii;
    std::vector<double> deltas(root.size(), NAN);
    for (double r = 1; r <= side + 1e-9; r *= static_cast<double>(b)) radii.push_back(r);
    parallel_for(root.size(), c.jobs, [&](std::size_t t) {
      try {
        auto w = model->sample(t, horizon);
        auto pp = frostman_weight_pp(w, alpha, static_cast<int>(b), static_cast<int>(N),
                                     RngStream(c.seed).derive("badic", static_cast<std::int64_t>(t)));
        root[t] = pp.root_weight;
        deltas[t] = pp.delta;
        viol[t] = pp.violations.size();
        checked[t] = pp.checked;
        flow_bad[t] = !pp.flow_ok;
        for (double r : radii) profile[t].push_back(w.ball_is_safe(w.root(), r) ? w.weight_of_ball(pp.weight, w.root(), r) : NAN);
      } catch (const TruncationError&) {
        trunc[t] = 1;
      }
    });
    std::vector<double> ok_root;
    std::size_t nviol = 0, nchecked = 0;
    int ntrunc = 0, nbad = 0;
    for (std::size_t t = 0; t < root.size(); ++t) {
      if (trunc[t]) {
        ++ntrunc;
        continue;
      }
      ok_root.push_back(root[t]);
      nviol += viol[t];
      nchecked += checked[t];
      nbad += flow_bad[t];
      for (std::size_t i = 0; i < radii.size(); ++i)
        res.rows.push_back({static_cast<std::int64_t>(t), radii[i], profile[t][i]});
    }
    auto& s = res.summary;
    s["trials"] = static_cast<int>(ok_root.size());
    s["truncations"] = ntrunc;
    auto& d = s["details"];
    auto known = std::find_if(deltas.begin(), deltas.end(), [](double x) { return !std::isnan(x); });
    d["delta"] = number(known == deltas.end() ? NAN : *known);
    d["mean_root_weight"] = number(mean_of(ok_root));
    d["root_weight_sem"] = number(sem_of(ok_root));
    d["checked_pairs"] = nchecked;
    d["violations"] = nviol;
    d["flow_failures"] = nbad;
    if (ntrunc > 0) {
      add_flag(res, "truncated");
      res.exit_code = kExitError;
    } else if (nviol > 0 || nbad > 0) {
      add_flag(res, "hypothesis_failed");
      res.exit_code = kExitHypothesis;
    }
  };
}

void apply_checks(RunResult& res, const Common& c) {
  auto& s = res.summary;
  if (c.check_slope) {
    bool ok = s["slope"].is_number() && std::abs(s["slope"].get<double>() - *c.check_slope) <= c.slope_tol;
    s["details"]["check_slope"] = {{"target", *c.check_slope}, {"tol", c.slope_tol}, {"ok", ok}};
    if (!ok) {
      add_flag(res, "check_failed");
      if (res.exit_code == kExitOk) res.exit_code = kExitHypothesis;
    }
  }
  if (c.check_value) {
    const auto& d = s["details"];
    double v = d.contains("primal") ? d["primal"].get<double>()
               : d.contains("bound") && d["bound"].is_number() ? d["bound"].get<double>()
               : d.contains("mean_root_weight") && d["mean_root_weight"].is_number() ? d["mean_root_weight"].get<double>()
                                                                                    : NAN;
    bool ok = std::abs(v - *c.check_value) <= c.value_tol;
    s["details"]["check_value"] = {{"target", *c.check_value}, {"tol", c.value_tol}, {"ok", ok}};
    if (!ok) {
      add_flag(res, "check_failed");
      if (res.exit_code == kExitOk) res.exit_code = kExitHypothesis;
    }
  }
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

}  // namespace

const std::vector<std::string>& estimator_names() {
  static const std::vector<std::string> names = {"growth", "minkowski-euclidean", "mdp", "billingsley",
                                                 "birkhoff", "frostman-lp", "maxflow", "frostman-pp"};
  return names;
}

std::string trials_csv(const std::vector<TrialRow>& rows) {
  std::string out = "trial,r,value\n";
  for (const auto& r : rows) out += std::to_string(r.trial) + "," + fmt(r.r) + "," + fmt(r.value) + "\n";
  return out;
}

RunResult run_experiment(const Config& cfg, const RunOptions& opt) {
  RunResult res;
  Common c;
  auto& s = res.summary;
  s["space"] = nullptr;
  s["estimator"] = nullptr;
  s["slope"] = nullptr;
  s["slope_ci"] = nullptr;
  s["essinf_lower"] = nullptr;
  s["essinf_upper"] = nullptr;
  s["trials"] = 0;
  s["truncations"] = 0;
  s["flags"] = Json::array();
  std::string plot_title;
  bool plot = true;
  try {
    c.estimator = cfg.str("estimator.kind");
    s["space"] = cfg.str("space.kind");
    s["estimator"] = c.estimator;
    auto seed = cfg.integer("seed", 1);
    if (seed < 0) throw ConfigError("seed must be nonnegative");
    c.seed = opt.seed ? *opt.seed : static_cast<std::uint64_t>(seed);
    c.trials = static_cast<int>(cfg.integer("trials", 1000));
    if (c.trials < 1) throw ConfigError("trials must be positive");
    c.jobs = std::max(1, opt.jobs);
    c.check_slope = cfg.maybe_num("check.slope");
    c.slope_tol = cfg.num("check.slope_tol", 0.1);
    c.check_value = cfg.maybe_num("check.value");
    c.value_tol = cfg.num("check.value_tol", 1e-6);
    res.out_dir = opt.out_dir ? *opt.out_dir : cfg.str("output.dir", "out");
    plot = cfg.flag("output.plot", true);
    plot_title = cfg.str("space.kind") + " / " + c.estimator;

    Exec exec;
    if (c.estimator == "growth") exec = prepare_growth(cfg, c, false);
    else if (c.estimator == "billingsley") exec = prepare_growth(cfg, c, true);
    else if (c.estimator == "minkowski-euclidean") exec = prepare_minkowski(cfg, c);
    else if (c.estimator == "mdp") exec = prepare_mdp(cfg, c);
    else if (c.estimator == "birkhoff") exec = prepare_birkhoff(cfg, c);
    else if (c.estimator == "frostman-lp") exec = prepare_frostman_lp(cfg, c);
    else if (c.estimator == "maxflow") exec = prepare_maxflow(cfg, c);
    else if (c.estimator == "frostman-pp") exec = prepare_frostman_pp(cfg, c);
    else throw ConfigError("unknown estimator '" + c.estimator + "'");
    cfg.reject_unused();

    s["seed"] = c.seed;
    Json echo;
    for (const auto& [k, v] : cfg.values()) echo[k] = v;
    echo["seed"] = std::to_string(c.seed);
    s["config"] = echo;
    s["details"] = Json::object();
    exec(res);
    apply_checks(res, c);
  } catch (const std::exception& e) {
    res.exit_code = kExitError;
    s["error"] = {{"type", dynamic_cast<const ConfigError*>(&e)         ? "config"
                           : dynamic_cast<const TruncationError*>(&e)   ? "truncation"
                           : dynamic_cast<const SolverError*>(&e)       ? "solver"
                           : dynamic_cast<const ParameterError*>(&e)    ? "parameter"
                                                                        : "runtime"},
                  {"message", e.what()}};
  }
  if (opt.write_files && !res.out_dir.empty()) {
    std::filesystem::create_directories(res.out_dir);
    std::filesystem::path dir(res.out_dir);
    write_file(dir / "summary.json", s.dump(2) + "\n");
    if (!s.contains("error")) {
      for (const auto& [name, text] : res.extra_files) write_file(dir / name, text);
      write_file(dir / "trials.csv", trials_csv(res.rows));
      if (plot) write_file(dir / "plot.svg", plot_svg(res.rows, plot_title));
    }
  }
  return res;
}

// Log-log chart of the per-radius mean of the trial values, with an OLS line.
std::string plot_svg(const std::vector<TrialRow>& rows, const std::string& title) {
  std::map<double, std::pair<double, int>> acc;
  for (const auto& r : rows)
    if (r.r > 0 && r.value > 0 && std::isfinite(r.value)) {
      acc[r.r].first += r.value;
      ++acc[r.r].second;
    }
  std::vector<std::pair<double, double>> pts;
  for (const auto& [r, sv] : acc) pts.emplace_back(std::log10(r), std::log10(sv.first / sv.second));
  const double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  if (pts.size() < 2) {
    os << "<text x=\"" << W / 2 << "\" y=\"" << H / 2 << "\" text-anchor=\"middle\">not enough positive data</text>\n</svg>\n";
    return os.str();
  }
  double x0 = pts.front().first, x1 = pts.back().first, y0 = 1e300, y1 = -1e300;
  for (auto [x, y] : pts) y0 = std::min(y0, y), y1 = std::max(y1, y);
  if (y1 - y0 < 1e-9) y0 -= 0.5, y1 += 0.5;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">log10 r</text>\n";
  os << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 16," << (T + H - B) / 2
     << ")\" text-anchor=\"middle\">log10 mean value</text>\n";
  for (int i = 0; i <= 4; ++i) {
    double x = x0 + (x1 - x0) * i / 4, y = y0 + (y1 - y0) * i / 4;
    os << "<text x=\"" << px(x) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << fmt(std::round(x * 100) / 100) << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">" << fmt(std::round(y * 100) / 100) << "</text>\n";
  }
  os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (auto [x, y] : pts) os << px(x) << "," << py(y) << " ";
  os << "\"/>\n";
  for (auto [x, y] : pts) os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
  double n = static_cast<double>(pts.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) sx += x, sy += y, sxx += x * x, sxy += x * y;
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx), icpt = (sy - slope * sx) / n;
  os << "<line x1=\"" << px(x0) << "\" y1=\"" << py(icpt + slope * x0) << "\" x2=\"" << px(x1) << "\" y2=\""
     << py(icpt + slope * x1) << "\" stroke=\"#d62728\" stroke-dasharray=\"6,4\"/>\n";
  os << "<text x=\"" << W - R - 4 << "\" y=\"" << T + 14 << "\" text-anchor=\"end\" fill=\"#d62728\">slope " << fmt(std::round(slope * 1000) / 1000)
     << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace unidim::cli
