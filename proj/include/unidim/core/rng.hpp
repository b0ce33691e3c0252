#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>

namespace unidim {

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Counter-based stream. The key encodes (seed, label path); draws are
// splitmix64(key + counter * gamma), so a stream is a pure function of its
// label path and derived streams never touch the parent's counter.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed) : key_(splitmix64(seed ^ 0x5eedULL)) {}

  RngStream derive(std::string_view name, std::int64_t index = 0) const {
    std::uint64_t k = key_ ^ splitmix64(fnv1a(name));
    k = splitmix64(k + splitmix64(static_cast<std::uint64_t>(index) ^ 0xa5a5a5a5a5a5a5a5ULL));
    return RngStream(k, tag{});
  }

  template <class... Ix>
  RngStream derive(std::string_view name, std::int64_t first, std::int64_t second, Ix... rest) const {
    return derive(name, first).derive("", second, static_cast<std::int64_t>(rest)...);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return at(counter_++); }

  // Pure access to the i-th draw of this stream.
  result_type at(std::uint64_t i) const { return splitmix64(key_ + (i + 1) * 0xd1b54a32d192ed03ULL); }

  // Uniform in [0,1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  // Uniform in (0,1).
  double uniform_open() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  double exponential() { return -std::log(uniform_open()); }
  std::int64_t below(std::int64_t n) { return static_cast<std::int64_t>(uniform() * static_cast<double>(n)); }

  std::uint64_t key() const { return key_; }

 private:
  struct tag {};
  RngStream(std::uint64_t key, tag) : key_(key) {}
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace unidim
