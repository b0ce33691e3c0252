#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "window.hpp"

namespace unidim {

// Finite metric space with a dense distance table.
struct FiniteMetricSpace {
  std::string name;
  std::size_t n = 0;
  std::vector<double> dist;  // n*n
  bool transitive = false;

  double distance(VertexId u, VertexId v) const { return dist[u * n + v]; }
  std::size_t size() const { return n; }
};

// Z_n^k with the sup metric (graph = false) or the word metric of the
// standard generators (graph = true).
inline FiniteMetricSpace torus(std::size_t side, int k, bool graph = false) {
  FiniteMetricSpace s;
  s.name = "torus Z_" + std::to_string(side) + "^" + std::to_string(k);
  s.n = 1;
  for (int i = 0; i < k; ++i) s.n *= side;
  s.transitive = true;
  s.dist.resize(s.n * s.n);
  for (std::size_t u = 0; u < s.n; ++u)
    for (std::size_t v = 0; v < s.n; ++v) {
      std::size_t a = u, b = v;
      double d = 0;
      for (int i = 0; i < k; ++i) {
        auto x = static_cast<std::int64_t>(a % side), y = static_cast<std::int64_t>(b % side);
        a /= side;
        b /= side;
        auto diff = std::abs(x - y);
        double c = static_cast<double>(std::min<std::int64_t>(diff, static_cast<std::int64_t>(side) - diff));
        d = graph ? d + c : std::max(d, c);
      }
      s.dist[u * s.n + v] = d;
    }
  return s;
}

inline FiniteMetricSpace cycle(std::size_t n) { return torus(n, 1); }

// Discrete Heisenberg group over Z_m with generators (±1,0,0), (0,±1,0);
// product (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
inline FiniteMetricSpace heisenberg_quotient(std::int64_t m) {
  FiniteMetricSpace s;
  s.name = "heisenberg H3(Z_" + std::to_string(m) + ")";
  s.n = static_cast<std::size_t>(m * m * m);
  s.transitive = true;
  auto id = [m](std::int64_t a, std::int64_t b, std::int64_t c) {
    auto md = [m](std::int64_t x) { return ((x % m) + m) % m; };
    return static_cast<std::size_t>((md(a) * m + md(b)) * m + md(c));
  };
  auto decode = [m](std::size_t x) {
    auto c = static_cast<std::int64_t>(x) % m;
    auto b = static_cast<std::int64_t>(x) / m % m;
    auto a = static_cast<std::int64_t>(x) / (m * m);
    return std::array<std::int64_t, 3>{a, b, c};
  };
  const std::array<std::array<std::int64_t, 2>, 4> gens{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
  std::vector<double> from_e(s.n, -1);
  std::vector<std::size_t> q{id(0, 0, 0)};
  from_e[q[0]] = 0;
  for (std::size_t h = 0; h < q.size(); ++h) {
    auto [a, b, c] = decode(q[h]);
    for (auto [ga, gb] : gens) {
      auto nx = id(a + ga, b + gb, c + a * gb);
      if (from_e[nx] < 0) {
        from_e[nx] = from_e[q[h]] + 1;
        q.push_back(nx);
      }
    }
  }
  s.dist.resize(s.n * s.n);
  for (std::size_t u = 0; u < s.n; ++u) {
    auto [a, b, c] = decode(u);
    // u^{-1} = (-a, -b, -c + ab)
    for (std::size_t v = 0; v < s.n; ++v) {
      auto [x, y, z] = decode(v);
      s.dist[u * s.n + v] = from_e[id(x - a, y - b, z - c + a * b - a * y)];
    }
  }
  return s;
}

// A complete finite window treated as the whole population.
inline FiniteMetricSpace finite_from_window(const RootedWindow& w) {
  FiniteMetricSpace s;
  s.name = "window";
  s.n = w.size();
  s.dist.resize(s.n * s.n);
  for (VertexId u = 0; u < s.n; ++u)
    for (VertexId v = 0; v < s.n; ++v) s.dist[u * s.n + v] = w.distance(u, v);
  return s;
}

inline FiniteMetricSpace from_distance_matrix(std::string name, std::size_t n, std::vector<double> d) {
  if (d.size() != n * n) throw std::invalid_argument("distance matrix size");
  return FiniteMetricSpace{std::move(name), n, std::move(d), false};
}

// |sum of mass sent - sum of mass received| for a transport g(u, v).
inline double mtp_residual(const FiniteMetricSpace& s,
                           const std::function<double(const FiniteMetricSpace&, VertexId, VertexId)>& g) {
  long double sent = 0, received = 0;
  for (VertexId v = 0; v < s.n; ++v) {
    long double out = 0, in = 0;
    for (VertexId u = 0; u < s.n; ++u) {
      out += g(s, v, u);
      in += g(s, u, v);
    }
    sent += out;
    received += in;
  }
  return static_cast<double>(std::abs(sent - received));
}

}  // namespace unidim
