#include <iostream>

#include "CLI11.hpp"
#include "registry.hpp"
#include "runner.hpp"

using namespace unidim::cli;

int main(int argc, char** argv) {
  CLI::App app{"unidim: dimension estimators for unimodular random discrete spaces"};
  app.require_subcommand(1);
  app.fallthrough();
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--out", out, "output directory");

  auto* run = app.add_subcommand("run", "run an experiment described by a config file");
  std::string config_path;
  run->add_option("config", config_path, "key = value config file")->required()->check(CLI::ExistingFile);
  auto* self = app.add_subcommand("selftest", "quick end-to-end checks");
  auto* list = app.add_subcommand("list-spaces", "list the space families and estimators");
  auto* describe = app.add_subcommand("describe", "describe one space family");
  std::string kind;
  describe->add_option("space", kind, "space kind")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*run) {
      RunOptions opt;
      opt.jobs = jobs;
      opt.seed = seed;
      opt.out_dir = out;
      auto res = run_experiment(Config::load(config_path), opt);
      std::cout << res.summary.dump(2) << "\n";
      if (res.summary.contains("error")) std::cerr << "error: " << res.summary["error"]["message"].get<std::string>() << "\n";
      return res.exit_code;
    }
    if (*self) return run_selftest(std::cout, jobs);
    if (*list) {
      for (const auto& s : space_catalog()) std::cout << s.kind << "\t" << s.summary << "\n";
      std::cout << "cycle\tcycle Z_n (frostman-lp)\ntorus\tdiscrete torus (frostman-lp)\n"
                   "heisenberg\tHeisenberg group mod m (frostman-lp)\nedges\ttree from an edge-list file (maxflow)\n";
      std::cout << "\nestimators:";
      for (const auto& e : estimator_names()) std::cout << " " << e;
      std::cout << "\n";
      return kExitOk;
    }
    if (*describe) {
      std::cout << describe_space(kind);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
