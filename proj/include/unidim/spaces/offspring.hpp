#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "../core/rng.hpp"
#include "../core/window.hpp"

namespace unidim {

class OffspringDistribution {
 public:
  enum class Family { Table, Dirac, Poisson, FractionalLinear, Binomial };

  static OffspringDistribution table(std::vector<double> pmf) {
    double s = std::accumulate(pmf.begin(), pmf.end(), 0.0);
    if (std::abs(s - 1) > 1e-12) throw ParameterError("offspring pmf sums to " + std::to_string(s));
    for (double p : pmf)
      if (p < 0) throw ParameterError("offspring pmf has a negative entry");
    OffspringDistribution d;
    d.pmf_ = std::move(pmf);
    d.finish("table");
    return d;
  }

  static OffspringDistribution dirac(int n) {
    std::vector<double> p(static_cast<std::size_t>(n) + 1, 0.0);
    p[static_cast<std::size_t>(n)] = 1;
    auto d = table(std::move(p));
    d.family_ = Family::Dirac;
    d.name_ = "dirac(" + std::to_string(n) + ")";
    return d;
  }

  static OffspringDistribution poisson(double lambda) {
    if (!(lambda > 0)) throw ParameterError("poisson: lambda must be positive");
    OffspringDistribution d;
    d.family_ = Family::Poisson;
    d.param_ = lambda;
    double p = std::exp(-lambda), cum = 0;
    for (int n = 0; cum < 1 - 1e-17 || n < lambda; ++n) {
      d.pmf_.push_back(p);
      cum += p;
      p *= lambda / (n + 1);
      if (n > 10000) break;
    }
    d.finish("poisson(" + fmt(lambda) + ")");
    return d;
  }

  // pgf g(s) = a s / (a + 1 - s): p_n = a (a+1)^{-n} for n >= 1.
  static OffspringDistribution fractional_linear(double a) {
    if (!(a > 0)) throw ParameterError("fractional_linear: a must be positive");
    OffspringDistribution d;
    d.family_ = Family::FractionalLinear;
    d.param_ = a;
    d.pmf_.push_back(0);
    double cum = 0;
    for (int n = 1; cum < 1 - 1e-17 && n < 100000; ++n) {
      double p = a * std::pow(a + 1, -n);
      d.pmf_.push_back(p);
      cum += p;
    }
    d.finish("fractional_linear(" + fmt(a) + ")");
    return d;
  }

  static OffspringDistribution binomial(int trials, double p) {
    if (trials < 0 || p < 0 || p > 1) throw ParameterError("binomial: bad parameters");
    OffspringDistribution d;
    d.family_ = Family::Binomial;
    d.param_ = p;
    d.trials_ = trials;
    for (int k = 0; k <= trials; ++k)
      d.pmf_.push_back(std::exp(std::lgamma(trials + 1.0) - std::lgamma(k + 1.0) - std::lgamma(trials - k + 1.0)) *
                       std::pow(p, k) * std::pow(1 - p, trials - k));
    d.finish("binomial(" + std::to_string(trials) + "," + fmt(p) + ")");
    return d;
  }

  const std::vector<double>& pmf() const { return pmf_; }
  double mean() const { return mean_; }
  const std::string& name() const { return name_; }
  Family family() const { return family_; }
  double parameter() const { return param_; }

  // n p_n / m
  OffspringDistribution size_biased() const {
    if (!(mean_ > 0)) throw ParameterError("size-biasing needs a positive mean");
    std::vector<double> q(pmf_.size(), 0.0);
    for (std::size_t n = 0; n < pmf_.size(); ++n) q[n] = static_cast<double>(n) * pmf_[n] / mean_;
    return renormalized(std::move(q), "sizebiased(" + name_ + ")");
  }

  // (n+1) p_{n+1} / m
  OffspringDistribution size_biased_minus_one() const {
    if (!(mean_ > 0)) throw ParameterError("size-biasing needs a positive mean");
    std::vector<double> q(pmf_.size() > 1 ? pmf_.size() - 1 : 1, 0.0);
    for (std::size_t n = 0; n + 1 < pmf_.size(); ++n) q[n] = static_cast<double>(n + 1) * pmf_[n + 1] / mean_;
    return renormalized(std::move(q), "sizebiased_minus_one(" + name_ + ")");
  }

  int sample(RngStream& rng) const {
    double u = rng.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) return static_cast<int>(cdf_.size() - 1);
    return static_cast<int>(it - cdf_.begin());
  }

  // Generating function f(s) = sum p_n s^n.
  double pgf(double s) const {
    switch (family_) {
      case Family::Poisson:
        return std::exp(param_ * (s - 1));
      case Family::FractionalLinear:
        return param_ * s / (param_ + 1 - s);
      case Family::Binomial:
        return std::pow(1 - param_ + param_ * s, trials_);
      default: {
        double acc = 0;
        for (std::size_t n = pmf_.size(); n-- > 0;) acc = acc * s + pmf_[n];
        return acc;
      }
    }
  }

 private:
  static std::string fmt(double x) {
    std::string s = std::to_string(x);
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }

  static OffspringDistribution renormalized(std::vector<double> q, std::string name) {
    double s = std::accumulate(q.begin(), q.end(), 0.0);
    for (auto& x : q) x /= s;
    OffspringDistribution d;
    d.pmf_ = std::move(q);
    d.finish(std::move(name));
    return d;
  }

  void finish(std::string name) {
    name_ = std::move(name);
    mean_ = 0;
    cdf_.clear();
    double c = 0;
    for (std::size_t n = 0; n < pmf_.size(); ++n) {
      mean_ += static_cast<double>(n) * pmf_[n];
      c += pmf_[n];
      cdf_.push_back(c);
    }
  }

  std::vector<double> pmf_, cdf_;
  double mean_ = 0;
  double param_ = 0;
  int trials_ = 0;
  Family family_ = Family::Table;
  std::string name_;
};

inline double gf_iterate(const OffspringDistribution& mu, int n, double s) {
  if (s < 0 || s > 1) throw std::domain_error("gf_iterate: s outside [0,1]");
  if (n < 0) throw std::domain_error("gf_iterate: negative n");
  for (int i = 0; i < n; ++i) s = mu.pgf(s);
  return s;
}

// n-fold composition of g(s) = a s / (a + 1 - s).
inline double fractional_linear_closed_form(double a, int n, double s) {
  double an = std::pow(a, n), bn = std::pow(a + 1, n);
  return an * s / (an * s + bn * (1 - s));
}

}  // namespace unidim

namespace unidim {

// Size of generation n of an ordinary Galton-Watson tree.
inline std::int64_t gw_generation_size(const OffspringDistribution& mu, int n, RngStream rng) {
  std::int64_t z = 1;
  for (int g = 0; g < n && z > 0; ++g) {
    std::int64_t next = 0;
    for (std::int64_t i = 0; i < z; ++i) next += mu.sample(rng);
    z = next;
  }
  return z;
}

}  // namespace unidim
