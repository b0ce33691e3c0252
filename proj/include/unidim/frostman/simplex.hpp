#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace unidim {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimplexResult {
  std::vector<double> x;  // primal
  std::vector<double> y;  // dual, one per row
  double value = 0;
  long iterations = 0;
};

// Dense tableau simplex for max c.x subject to A x <= b, x >= 0 with b >= 0,
// so the slack basis is feasible from the start. Dantzig pricing, falling back
// to Bland's rule after a run of degenerate pivots.
inline SimplexResult simplex_max(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                                 const std::vector<double>& c, long max_iter = 1000000) {
  const std::size_t m = A.size(), n = c.size(), cols = n + m + 1;
  for (double bi : b)
    if (bi < 0) throw std::invalid_argument("simplex_max: right-hand side must be nonnegative");
  std::vector<double> T((m + 1) * cols, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return T[i * cols + j]; };
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (A[i].size() != n) throw std::invalid_argument("simplex_max: ragged matrix");
    for (std::size_t j = 0; j < n; ++j) at(i, j) = A[i][j];
    at(i, n + i) = 1;
    at(i, cols - 1) = b[i];
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) at(m, j) = -c[j];

  const double eps = 1e-11;
  SimplexResult res;
  int stall = 0;
  double last = 0;
  for (;; ++res.iterations) {
    if (res.iterations > max_iter) throw SolverError("simplex_max: iteration limit reached");
    bool bland = stall > 50;
    std::size_t enter = cols;
    double best = -eps;
    for (std::size_t j = 0; j + 1 < cols; ++j) {
      double r = at(m, j);
      if (r < best) {
        enter = j;
        if (bland) break;
        best = r;
      }
    }
    if (enter == cols) break;
    std::size_t leave = m;
    double ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      double a = at(i, enter);
      if (a <= eps) continue;
      double q = at(i, cols - 1) / a;
      if (q < ratio - 1e-13 || (q <= ratio + 1e-13 && leave < m && basis[i] < basis[leave])) {
        ratio = q;
        leave = i;
      }
    }
    if (leave == m) throw SolverError("simplex_max: unbounded");
    double piv = at(leave, enter);
    for (std::size_t j = 0; j < cols; ++j) at(leave, j) /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      double f = at(i, enter);
      if (f == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) at(i, j) -= f * at(leave, j);
      at(i, enter) = 0;
    }
    basis[leave] = enter;
    double obj = at(m, cols - 1);
    stall = obj > last + 1e-12 ? 0 : stall + 1;
    last = obj;
  }
  res.x.assign(n, 0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = std::max(0.0, at(i, cols - 1));
  res.y.resize(m);
  for (std::size_t i = 0; i < m; ++i) res.y[i] = std::max(0.0, at(m, n + i));
  res.value = at(m, cols - 1);
  return res;
}

}  // namespace unidim
