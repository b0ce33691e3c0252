#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "unidim/core/finite_space.hpp"
#include "unidim/spaces.hpp"

namespace unidim::cli {

struct ParamInfo {
  std::string name, type, fallback, help;
};

struct SpaceInfo {
  std::string kind, summary, description;
  std::vector<ParamInfo> params;
  bool coordinates = false;  // windows are point patterns with coordinates
  bool tree = false;         // windows expose a parent map
};

const std::vector<SpaceInfo>& space_catalog();
const SpaceInfo& space_info(const std::string& kind);  // throws ConfigError
std::string describe_space(const std::string& kind);

// Builds the model from the space.* keys of the config.
ModelPtr make_space(const Config& cfg, std::uint64_t seed);

// Finite spaces for the Frostman LP: cycle, torus, heisenberg.
FiniteMetricSpace make_finite_space(const Config& cfg);

OffspringDistribution parse_offspring(const std::string& spec);
DigitSet parse_digits(const std::string& spec);

}  // namespace unidim::cli
