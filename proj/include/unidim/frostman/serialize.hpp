#pragma once

#include <string>

#include "json.hpp"
#include "xi.hpp"

namespace unidim {

// Record layout: {"space": {name, n, transitive, dist}, "alpha", "M", "grid",
// "h", "active", "grid_capped", "boundary_bias"} for instances and {"w",
// "collection": [{center, radius, cost}], "primal", "dual", "gap",
// "primal_residual", "dual_residual", "iterations"} for solutions.
inline nlohmann::json to_json(const FrostmanInstance& in) {
  return {{"space", {{"name", in.space.name}, {"n", in.space.n}, {"transitive", in.space.transitive}, {"dist", in.space.dist}}},
          {"alpha", in.alpha},
          {"M", in.M},
          {"grid", in.grid},
          {"h", in.h},
          {"active", in.active},
          {"grid_capped", in.grid_capped},
          {"boundary_bias", in.boundary_bias}};
}

inline FrostmanInstance instance_from_json(const nlohmann::json& j) {
  FrostmanInstance in;
  const auto& s = j.at("space");
  in.space.name = s.at("name").get<std::string>();
  in.space.n = s.at("n").get<std::size_t>();
  in.space.transitive = s.value("transitive", false);
  in.space.dist = s.at("dist").get<std::vector<double>>();
  if (in.space.dist.size() != in.space.n * in.space.n) throw ParameterError("instance json: distance table size");
  in.alpha = j.at("alpha").get<double>();
  in.M = j.at("M").get<double>();
  in.grid = j.at("grid").get<std::vector<double>>();
  in.h = j.at("h").get<std::vector<double>>();
  in.active = j.value("active", std::vector<std::uint8_t>{});
  in.grid_capped = j.value("grid_capped", false);
  in.boundary_bias = j.value("boundary_bias", false);
  in.validate();
  return in;
}

inline nlohmann::json to_json(const FrostmanSolution& s) {
  auto coll = nlohmann::json::array();
  for (const auto& e : s.dual.entries) coll.push_back({{"center", e.center}, {"radius", e.radius}, {"cost", e.cost}});
  return {{"w", s.w},
          {"collection", coll},
          {"primal", s.primal},
          {"dual", s.dual_value},
          {"gap", s.gap},
          {"primal_residual", s.primal_residual},
          {"dual_residual", s.dual_residual},
          {"iterations", s.iterations}};
}

inline FrostmanSolution solution_from_json(const nlohmann::json& j) {
  FrostmanSolution s;
  s.w = j.at("w").get<std::vector<double>>();
  for (const auto& e : j.at("collection"))
    s.dual.add(e.at("center").get<VertexId>(), e.at("radius").get<double>(), e.at("cost").get<double>());
  s.primal = j.at("primal").get<double>();
  s.dual_value = j.at("dual").get<double>();
  s.gap = j.at("gap").get<double>();
  s.primal_residual = j.value("primal_residual", 0.0);
  s.dual_residual = j.value("dual_residual", 0.0);
  s.iterations = j.value("iterations", 0L);
  return s;
}

}  // namespace unidim
