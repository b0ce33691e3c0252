#include "registry.hpp"

#include <sstream>

namespace unidim::cli {

namespace {

std::vector<double> split_numbers(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(what + ": bad number '" + item + "'");
    }
  }
  return out;
}

std::pair<std::string, std::string> head_tail(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) return {spec, ""};
  return {spec.substr(0, colon), spec.substr(colon + 1)};
}

}  // namespace

OffspringDistribution parse_offspring(const std::string& spec) {
  auto [name, args] = head_tail(spec);
  auto a = split_numbers(args, "offspring " + name);
  auto need = [&](std::size_t n) {
    if (a.size() != n) throw ConfigError("offspring " + name + ": expected " + std::to_string(n) + " argument(s)");
  };
  if (name == "poisson") return need(1), OffspringDistribution::poisson(a[0]);
  if (name == "dirac") return need(1), OffspringDistribution::dirac(static_cast<int>(a[0]));
  if (name == "geometric" || name == "fractional_linear") return need(1), OffspringDistribution::fractional_linear(a[0]);
  if (name == "binomial") return need(2), OffspringDistribution::binomial(static_cast<int>(a[0]), a[1]);
  if (name == "table") return OffspringDistribution::table(a);
  throw ConfigError("unknown offspring law '" + spec + "' (poisson:L, dirac:N, geometric:A, binomial:N,P, table:p0,p1,...)");
}

DigitSet parse_digits(const std::string& spec) {
  auto [name, args] = head_tail(spec);
  if (name == "even") return DigitSet::even();
  if (name == "odd") return DigitSet::odd();
  if (name == "all") return DigitSet::all();
  if (name == "none") return DigitSet::none();
  if (name == "set") {
    std::set<int> s;
    for (double x : split_numbers(args, "digits set")) s.insert(static_cast<int>(x));
    return DigitSet::finite(s);
  }
  if (name == "tower") {
    std::vector<std::int64_t> b;
    for (double x : split_numbers(args, "digits tower")) b.push_back(static_cast<std::int64_t>(x));
    return DigitSet::tower(b);
  }
  throw ConfigError("unknown digit set '" + spec + "' (even, odd, all, none, set:i,j,..., tower:t0,t1,...)");
}

const std::vector<SpaceInfo>& space_catalog() {
  static const std::vector<SpaceInfo> cat = {
      {"lattice", "integer lattice Z^k",
       "The integer lattice Z^k rooted at the origin, with the sup or Euclidean norm. Deterministic; |N_r| = (2r+1)^k "
       "under the sup norm.",
       {{"k", "int", "1", "dimension"}, {"norm", "sup|euclidean", "sup", "coordinate norm"}},
       true, false},
      {"cayley", "Cayley graph of Z^k or the discrete Heisenberg group",
       "Word-metric balls of a finitely generated group with polynomial growth, enumerated by BFS over group "
       "elements. Presets: zk (standard generators of Z^k) and heisenberg (H_3(Z), growth degree 4).",
       {{"preset", "zk|heisenberg", "zk", "group"}, {"k", "int", "2", "rank for zk"}},
       false, false},
      {"canopy", "generalized canopy tree",
       "One-ended tree with leaves at level 0 in which a level-n vertex has 2^(q_n - q_(n-1)) children. The root "
       "level is drawn with P(level = n) proportional to 2^(-q_n), which must be summable unless root_level is fixed.",
       {{"q", "linear|power|oscillating|constant", "linear", "level sequence q_n"},
        {"a", "real", "1", "sequence parameter"},
        {"b", "real", "a", "second parameter (oscillating)"},
        {"root_level", "int", "random", "fix the root level"}},
       false, true},
      {"ugw", "unimodular Galton-Watson tree",
       "Galton-Watson tree whose root has the size-biased offspring law and every other vertex the given law. "
       "Optionally conditioned on survival to depth R + margin (supercritical laws only).",
       {{"offspring", "law", "poisson:1", "offspring law"},
        {"condition", "bool", "false", "condition on survival"},
        {"margin", "int", "5", "extra survival depth"}},
       false, true},
      {"egw", "eternal Galton-Watson tree",
       "Eternal family tree with an infinite line of ancestors. The offspring law must be critical (mean exactly 1); "
       "each ancestor has extra children drawn from the size-biased-minus-one law, each starting an ordinary "
       "Galton-Watson subtree.",
       {{"offspring", "law", "poisson:1", "critical offspring law"}},
       false, true},
      {"pwit", "Poisson weighted infinite tree",
       "Each vertex has children at distances forming a Poisson process on [0, inf) with intensity x^k; the metric is "
       "the path length.",
       {{"k", "int", "1", "intensity exponent"}},
       false, true},
      {"srw_image", "range of a random walk with positive heavy-tailed jumps",
       "Two-sided walk S_n on the real line with iid Pareto jumps U^(-1/beta); the point pattern is its range.",
       {{"beta", "real", "0.5", "jump tail exponent"}},
       true, false},
      {"srw_zeros", "zero set of simple random walk",
       "Indices n in Z with S_n = 0 for a two-sided simple random walk, with the usual metric on Z.", {}, true, false},
      {"srw_graph", "graph of simple random walk",
       "Points (n, S_n) of a two-sided simple random walk with the metric max(sqrt|dx|, |dy|), or the sup metric.",
       {{"sqrt_time", "bool", "true", "use max(sqrt|dx|, |dy|)"}},
       false, false},
      {"drainage", "drainage network tree",
       "Vertices of the even sublattice of Z^2; each vertex points to one of the two vertices diagonally below it with "
       "a fair coin. The window is a ball in the resulting one-ended tree.",
       {},
       false, true},
      {"digits", "signed digit restriction set",
       "All finite sums sum_{i in A} e_i 2^(i+1) over subsets A of a digit set J with one fair sign per digit level.",
       {{"J", "digit set", "even", "even, odd, all, none, set:..., tower:..."},
        {"complement", "bool", "false", "use the complement of J"}},
       true, false},
      {"cantor", "randomized Cantor set in Z^k",
       "Points of Z^k surviving independent deletion (keep probability p) of the cubes of nested randomly shifted "
       "b-adic partitions that do not contain the origin.",
       {{"b", "int", "2", "base"}, {"p", "real", "0.8", "keep probability"}, {"k", "int", "1", "dimension"}},
       true, false},
  };
  return cat;
}

const SpaceInfo& space_info(const std::string& kind) {
  for (const auto& s : space_catalog())
    if (s.kind == kind) return s;
  throw ConfigError("unknown space '" + kind + "'; run 'unidim list-spaces'");
}

std::string describe_space(const std::string& kind) {
  const auto& s = space_info(kind);
  std::ostringstream os;
  os << s.kind << ": " << s.summary << "\n\n" << s.description << "\n";
  if (!s.params.empty()) {
    os << "\nparameters (space.<name>):\n";
    for (const auto& p : s.params) os << "  " << p.name << " [" << p.type << ", default " << p.fallback << "]  " << p.help << "\n";
  }
  os << "\nwindows: " << (s.coordinates ? "coordinate pattern" : "graph metric") << (s.tree ? ", with parent map" : "")
     << "\n";
  return os.str();
}

ModelPtr make_space(const Config& cfg, std::uint64_t seed) {
  auto kind = cfg.str("space.kind");
  space_info(kind);
  if (kind == "lattice") {
    auto norm = cfg.str("space.norm", "sup");
    if (norm != "sup" && norm != "euclidean") throw ConfigError("space.norm: sup or euclidean");
    return std::make_shared<Lattice>(static_cast<int>(cfg.integer("space.k", 1)), norm == "sup" ? Norm::Sup : Norm::Euclidean,
                                     seed);
  }
  if (kind == "cayley") {
    auto preset = cfg.str("space.preset", "zk");
    if (preset == "heisenberg") return std::make_shared<Cayley>(Cayley::Preset::Heisenberg, 3, seed);
    if (preset != "zk") throw ConfigError("space.preset: zk or heisenberg");
    return std::make_shared<Cayley>(Cayley::Preset::Zk, static_cast<int>(cfg.integer("space.k", 2)), seed);
  }
  if (kind == "canopy") {
    auto q = cfg.str("space.q", "linear");
    double a = cfg.num("space.a", 1), b = cfg.num("space.b", a);
    LevelSequence seq = q == "linear"        ? LevelSequence::linear(a)
                        : q == "power"       ? LevelSequence::power(a)
                        : q == "oscillating" ? LevelSequence::oscillating(a, b)
                        : q == "constant"    ? LevelSequence::constant(a)
                                             : throw ConfigError("space.q: linear, power, oscillating or constant");
    std::optional<std::int64_t> level;
    if (cfg.has("space.root_level")) level = cfg.integer("space.root_level");
    else cfg.str("space.root_level", "");
    return std::make_shared<GeneralizedCanopy>(seq, seed, level);
  }
  if (kind == "ugw")
    return std::make_shared<UnimodularGW>(parse_offspring(cfg.str("space.offspring", "poisson:1")),
                                          cfg.flag("space.condition", false), static_cast<int>(cfg.integer("space.margin", 5)),
                                          seed);
  if (kind == "egw") return std::make_shared<EternalGW>(parse_offspring(cfg.str("space.offspring", "poisson:1")), seed);
  if (kind == "pwit") return std::make_shared<Pwit>(static_cast<int>(cfg.integer("space.k", 1)), seed);
  if (kind == "srw_image") return std::make_shared<WalkImage>(cfg.num("space.beta", 0.5), seed);
  if (kind == "srw_zeros") return std::make_shared<WalkZeros>(seed);
  if (kind == "srw_graph") return std::make_shared<WalkGraph>(cfg.flag("space.sqrt_time", true), seed);
  if (kind == "drainage") return std::make_shared<Drainage>(seed);
  if (kind == "digits") {
    auto J = parse_digits(cfg.str("space.J", "even"));
    if (cfg.flag("space.complement", false)) J = J.complement();
    return std::make_shared<DigitRestriction>(J, seed);
  }
  // cantor
  return std::make_shared<RandomizedCantor>(static_cast<int>(cfg.integer("space.b", 2)), cfg.num("space.p", 0.8),
                                            static_cast<int>(cfg.integer("space.k", 1)), seed);
}

FiniteMetricSpace make_finite_space(const Config& cfg) {
  auto kind = cfg.str("space.kind");
  if (kind == "cycle") {
    auto n = cfg.integer("space.n");
    if (n < 1) throw ConfigError("space.n must be positive");
    return cycle(static_cast<std::size_t>(n));
  }
  if (kind == "torus") {
    auto n = cfg.integer("space.n");
    auto k = cfg.integer("space.k", 2);
    if (n < 1 || k < 1) throw ConfigError("space.n and space.k must be positive");
    auto metric = cfg.str("space.metric", "sup");
    if (metric != "sup" && metric != "graph") throw ConfigError("space.metric: sup or graph");
    return torus(static_cast<std::size_t>(n), static_cast<int>(k), metric == "graph");
  }
  if (kind == "heisenberg") {
    auto m = cfg.integer("space.m", 4);
    if (m < 2) throw ConfigError("space.m must be >= 2");
    return heisenberg_quotient(m);
  }
  throw ConfigError("frostman-lp needs a finite space: cycle, torus or heisenberg");
}

}  // namespace unidim::cli
