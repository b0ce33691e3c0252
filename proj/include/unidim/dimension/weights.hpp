#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "unidim/core/rng.hpp"
#include "unidim/core/window.hpp"

namespace unidim {

// Builds a weight function on one sampled window.
struct WeightSpec {
  std::string name = "counting";
  std::function<WeightAssignment(const RootedWindow&, RngStream)> make;

  WeightAssignment operator()(const RootedWindow& w, RngStream rng) const { return make(w, rng); }
};

namespace weights {

inline WeightSpec counting() {
  return {"counting", [](const RootedWindow&, RngStream) { return WeightAssignment::constant(1); }};
}

inline WeightSpec zero() {
  return {"zero", [](const RootedWindow&, RngStream) { return WeightAssignment::constant(0); }};
}

namespace detail {

// Mark keyed by vertex identity (labels or coordinates when present) so the
// same point gets the same mark in every window of the realization.
inline RngStream mark_key(const RootedWindow& w, VertexId v, RngStream rng) {
  if (w.label_dim() > 0) {
    auto lab = w.labels();
    auto k = static_cast<std::size_t>(w.label_dim());
    for (std::size_t i = 0; i < k; ++i) rng = rng.derive("", static_cast<std::uint64_t>(lab[v * k + i]));
    return rng;
  }
  if (const auto* c = w.coords()) {
    auto k = static_cast<std::size_t>(c->dim);
    for (std::size_t i = 0; i < k; ++i)
      rng = rng.derive("", static_cast<std::uint64_t>(std::llround(c->coords[v * k + i] * 1024)));
    return rng;
  }
  return rng.derive("", v);
}

}  // namespace detail

inline WeightSpec iid_uniform() {
  return {"iid-uniform", [](const RootedWindow& w, RngStream rng) {
            std::vector<double> v(w.size());
            for (VertexId i = 0; i < w.size(); ++i) v[i] = detail::mark_key(w, i, rng.derive("mark")).uniform();
            return WeightAssignment::from_values(std::move(v));
          }};
}

inline WeightSpec iid_exponential() {
  return {"iid-exponential", [](const RootedWindow& w, RngStream rng) {
            std::vector<double> v(w.size());
            for (VertexId i = 0; i < w.size(); ++i) v[i] = detail::mark_key(w, i, rng.derive("mark")).exponential();
            return WeightAssignment::from_values(std::move(v));
          }};
}

// w(v) = 1 / |Φ ∩ C(v)| with C(v) the unit cube floor(v) + [0,1)^k.
inline WeightSpec unit_cube() {
  return {"unit-cube", [](const RootedWindow& w, RngStream) {
            const auto* c = w.coords();
            if (!c) throw std::invalid_argument("unit-cube weight: needs a coordinate pattern");
            auto k = static_cast<std::size_t>(c->dim);
            std::map<std::vector<std::int64_t>, int> count;
            std::vector<std::vector<std::int64_t>> cell(w.size());
            for (VertexId v = 0; v < w.size(); ++v) {
              for (std::size_t i = 0; i < k; ++i)
                cell[v].push_back(static_cast<std::int64_t>(std::floor(c->coords[v * k + i])));
              ++count[cell[v]];
            }
            std::vector<double> val(w.size());
            for (VertexId v = 0; v < w.size(); ++v) val[v] = 1.0 / count[cell[v]];
            return WeightAssignment::from_values(std::move(val));
          }};
}

// 1-D patterns: w(v) = sum of the gaps to both neighbours. Gaps leaving the
// window are cut at the window edge.
inline WeightSpec gap_sum() {
  return {"gap-sum", [](const RootedWindow& w, RngStream) {
            const auto* c = w.coords();
            if (!c || c->dim != 1) throw std::invalid_argument("gap-sum weight: needs a 1-D pattern");
            std::vector<VertexId> ord(w.size());
            for (VertexId v = 0; v < w.size(); ++v) ord[v] = v;
            std::sort(ord.begin(), ord.end(), [&](VertexId a, VertexId b) { return c->coords[a] < c->coords[b]; });
            double x0 = c->coords[w.root()], R = w.horizon();
            std::vector<double> val(w.size());
            for (std::size_t i = 0; i < ord.size(); ++i) {
              double x = c->coords[ord[i]];
              double left = i > 0 ? c->coords[ord[i - 1]] : x0 - R;
              double right = i + 1 < ord.size() ? c->coords[ord[i + 1]] : x0 + R;
              val[ord[i]] = (x - left) + (right - x);
            }
            return WeightAssignment::from_values(std::move(val));
          }};
}

// Indicator of height 0 in a one-ended tree window.
inline WeightSpec leaves() {
  return {"leaves", [](const RootedWindow& w, RngStream) {
            if (!w.has_tree()) throw std::invalid_argument("leaves weight: needs a tree window");
            std::vector<double> val(w.size());
            auto h = w.heights();
            for (VertexId v = 0; v < w.size(); ++v) val[v] = h[v] == 0 ? 1.0 : 0.0;
            return WeightAssignment::from_values(std::move(val));
          }};
}

inline WeightSpec by_name(const std::string& name) {
  if (name == "counting") return counting();
  if (name == "zero") return zero();
  if (name == "iid-uniform") return iid_uniform();
  if (name == "iid-exponential") return iid_exponential();
  if (name == "unit-cube") return unit_cube();
  if (name == "gap-sum") return gap_sum();
  if (name == "leaves") return leaves();
  throw std::invalid_argument("unknown weight: " + name);
}

inline std::vector<std::string> names() {
  return {"counting", "zero", "iid-uniform", "iid-exponential", "unit-cube", "gap-sum", "leaves"};
}

}  // namespace weights
}  // namespace unidim
