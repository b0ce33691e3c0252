#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "model.hpp"

namespace unidim {

// Union of a coordinate pattern with an independently shifted lattice Z^k + U.
class Superposition : public SpaceModel {
 public:
  Superposition(ModelPtr base, std::uint64_t seed) : SpaceModel(seed), base_(std::move(base)) {}
  std::string kind() const override { return "superpose(" + base_->kind() + ")"; }

  RootedWindow sample(std::uint64_t trial, double horizon) const override {
    auto w = base_->sample(trial, horizon);
    const auto* cm = w.coords();
    if (!cm) throw std::invalid_argument("superpose: base pattern must have coordinates");
    int k = cm->dim;
    auto rng = trial_rng(trial).derive("lattice_shift");
    std::vector<double> u(static_cast<std::size_t>(k));
    for (auto& x : u) x = rng.uniform();
    std::vector<double> coords = cm->coords;
    const double* o = &cm->coords[w.root() * static_cast<std::size_t>(k)];
    auto R = static_cast<std::int64_t>(std::ceil(horizon)) + 1;
    std::vector<std::int64_t> z(static_cast<std::size_t>(k), -R);
    CoordMetric probe{k, {}, cm->norm};
    while (true) {
      std::vector<double> pt(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) pt[static_cast<std::size_t>(i)] = o[i] + static_cast<double>(z[static_cast<std::size_t>(i)]) + u[static_cast<std::size_t>(i)];
      probe.coords.assign(o, o + k);
      probe.coords.insert(probe.coords.end(), pt.begin(), pt.end());
      if (probe.distance(0, 1) <= horizon + kDistEps) coords.insert(coords.end(), pt.begin(), pt.end());
      int i = 0;
      while (i < k && z[static_cast<std::size_t>(i)] == R) z[static_cast<std::size_t>(i++)] = -R;
      if (i == k) break;
      ++z[static_cast<std::size_t>(i)];
    }
    return RootedWindow::from_coords(k, std::move(coords), cm->norm, w.root(), horizon);
  }

 private:
  ModelPtr base_;
};

// Independent product under the sup metric.
class Product : public SpaceModel {
 public:
  Product(ModelPtr first, ModelPtr second) : SpaceModel(0), first_(std::move(first)), second_(std::move(second)) {}
  std::string kind() const override { return "product(" + first_->kind() + "," + second_->kind() + ")"; }

  RootedWindow sample(std::uint64_t trial, double horizon) const override {
    auto a = std::make_shared<const RootedWindow>(first_->sample(trial, horizon));
    auto b = std::make_shared<const RootedWindow>(second_->sample(trial, horizon));
    auto w = RootedWindow::product(a, b);
    w.set_truncation_events(a->truncation_events() + b->truncation_events());
    return w;
  }

 private:
  ModelPtr first_, second_;
};

}  // namespace unidim
