#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "../core/rng.hpp"
#include "../core/window.hpp"

namespace unidim {

// A sampler of exact windows; sample(trial, R) is pure in (seed, trial, R).
class SpaceModel {
 public:
  explicit SpaceModel(std::uint64_t seed) : seed_(seed) {}
  virtual ~SpaceModel() = default;

  virtual std::string kind() const = 0;
  virtual RootedWindow sample(std::uint64_t trial, double horizon) const = 0;

  std::uint64_t seed() const { return seed_; }

 protected:
  RngStream trial_rng(std::uint64_t trial) const {
    return RngStream(seed_).derive(kind(), static_cast<std::int64_t>(trial));
  }

 private:
  std::uint64_t seed_;
};

using ModelPtr = std::shared_ptr<const SpaceModel>;

}  // namespace unidim
