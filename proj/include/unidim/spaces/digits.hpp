#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "model.hpp"

namespace unidim {

// A set of binary digit positions J with known density structure.
class DigitSet {
 public:
  enum class Kind { Even, Odd, All, None, Finite, Tower };

  static DigitSet even() { return DigitSet(Kind::Even); }
  static DigitSet odd() { return DigitSet(Kind::Odd); }
  static DigitSet all() { return DigitSet(Kind::All); }
  static DigitSet none() { return DigitSet(Kind::None); }
  static DigitSet finite(std::set<int> digits) {
    DigitSet d(Kind::Finite);
    d.finite_ = std::move(digits);
    return d;
  }
  // Union of [t_0,t_1), [t_2,t_3), ...; after the given boundaries the sequence
  // continues with t_{j+1} = (j+1) t_j, so block lengths grow without bound
  // and the upper and lower densities are 1 and 0.
  static DigitSet tower(std::vector<std::int64_t> boundaries) {
    if (boundaries.size() < 2) throw ParameterError("tower digit set needs at least two boundaries");
    for (std::size_t i = 1; i < boundaries.size(); ++i)
      if (boundaries[i] <= boundaries[i - 1]) throw ParameterError("tower boundaries must increase");
    DigitSet d(Kind::Tower);
    d.bounds_ = std::move(boundaries);
    while (d.bounds_.back() < (std::int64_t{1} << 40))
      d.bounds_.push_back(d.bounds_.back() * static_cast<std::int64_t>(d.bounds_.size()));
    return d;
  }

  DigitSet complement() const {
    DigitSet d = *this;
    d.complement_ = !complement_;
    return d;
  }

  bool contains(std::int64_t i) const {
    if (i < 0) return false;
    bool in = false;
    switch (kind_) {
      case Kind::Even: in = i % 2 == 0; break;
      case Kind::Odd: in = i % 2 == 1; break;
      case Kind::All: in = true; break;
      case Kind::None: in = false; break;
      case Kind::Finite: in = finite_.count(static_cast<int>(i)) > 0; break;
      case Kind::Tower: {
        auto it = std::upper_bound(bounds_.begin(), bounds_.end(), i);
        auto idx = it - bounds_.begin();
        in = idx >= 1 && (idx - 1) % 2 == 0;
        break;
      }
    }
    return in != complement_;
  }

  // |J ∩ {0, ..., m-1}|
  std::int64_t count_below(std::int64_t m) const {
    std::int64_t c = 0;
    for (std::int64_t i = 0; i < m; ++i) c += contains(i);
    return c;
  }

  std::string describe() const {
    std::ostringstream os;
    if (complement_) os << "complement of ";
    switch (kind_) {
      case Kind::Even: os << "even"; break;
      case Kind::Odd: os << "odd"; break;
      case Kind::All: os << "all"; break;
      case Kind::None: os << "none"; break;
      case Kind::Finite: {
        os << "set:";
        bool first = true;
        for (int i : finite_) os << (first ? "" : ",") << i, first = false;
        break;
      }
      case Kind::Tower: os << "tower:" << bounds_[0] << "," << bounds_[1] << ",..."; break;
    }
    return os.str();
  }

 private:
  explicit DigitSet(Kind k) : kind_(k) {}
  Kind kind_;
  bool complement_ = false;
  std::set<int> finite_;
  std::vector<std::int64_t> bounds_;
};

// Signed binary expansions sum_{i in A} eps_i 2^{i+1} over finite A ⊆ J, one
// fair sign eps_i per digit level.
class DigitRestriction : public SpaceModel {
 public:
  static constexpr int kCapMargin = 40;
  static constexpr int kProbe = 8;

  DigitRestriction(DigitSet J, std::uint64_t seed) : SpaceModel(seed), J_(std::move(J)) {}
  std::string kind() const override { return "digits"; }
  const DigitSet& digits() const { return J_; }

  static int digit_cap(double horizon) {
    return static_cast<int>(std::ceil(std::log2(std::max(horizon, 2.0)))) + kCapMargin;
  }

  struct Realization {
    DigitSet J;
    std::vector<int> sign;  // per level, +-1

    // Residue peeling: recover the unique digit pattern of x.
    bool contains(std::int64_t x) const {
      if (x % 2 != 0) return false;
      std::int64_t y = x / 2;
      for (std::size_t i = 0; i < sign.size(); ++i) {
        if (y == 0) return true;
        if (y % 2 != 0) {
          if (!J.contains(static_cast<std::int64_t>(i))) return false;
          y -= sign[i];
        }
        y /= 2;
      }
      return y == 0;
    }
  };

  Realization realization(std::uint64_t trial, int levels) const {
    Realization r{J_, {}};
    auto key = trial_rng(trial).derive("sign");
    for (int i = 0; i < levels; ++i) r.sign.push_back((key.derive("", i).at(0) & 1) ? 1 : -1);
    return r;
  }

  RootedWindow sample(std::uint64_t trial, double horizon) const override {
    int cap = digit_cap(horizon);
    if (cap + kProbe + 2 > 120) throw ParameterError("digits: horizon too large for the digit cap");
    int top = cap + kProbe;
    auto real = realization(trial, top);
    // rem[i]: largest magnitude reachable with digits below i
    using Wide = __int128;
    std::vector<Wide> rem(static_cast<std::size_t>(top) + 1, 0);
    for (int i = 1; i <= top; ++i)
      rem[static_cast<std::size_t>(i)] = rem[static_cast<std::size_t>(i - 1)] + (J_.contains(i - 1) ? (Wide{2} << (i - 1)) : 0);
    auto R = static_cast<Wide>(std::floor(horizon + kDistEps));
    auto mag = [](Wide v) { return v < 0 ? -v : v; };
    std::vector<std::int64_t> found;
    int truncations = 0;
    struct Item {
      int level;  // digits >= level decided
      Wide s;
      bool high;
    };
    std::vector<Item> stack{{top, 0, false}};
    while (!stack.empty()) {
      auto it = stack.back();
      stack.pop_back();
      if (it.level == 0) {
        if (mag(it.s) <= R) {
          found.push_back(static_cast<std::int64_t>(it.s));
          truncations += it.high;
        }
        continue;
      }
      int i = it.level - 1;
      auto lim = R + rem[static_cast<std::size_t>(i)];
      if (mag(it.s) <= lim) stack.push_back({i, it.s, it.high});
      if (J_.contains(i)) {
        Wide s2 = it.s + real.sign[static_cast<std::size_t>(i)] * (Wide{2} << i);
        if (mag(s2) <= lim) stack.push_back({i, s2, it.high || i >= cap});
      }
    }
    std::sort(found.begin(), found.end());
    std::vector<double> pts(found.begin(), found.end());
    auto root = static_cast<VertexId>(std::lower_bound(found.begin(), found.end(), 0) - found.begin());
    auto w = RootedWindow::from_coords(1, std::move(pts), Norm::Sup, root, horizon);
    w.set_truncation_events(truncations);
    return w;
  }

 private:
  DigitSet J_;
};

}  // namespace unidim
