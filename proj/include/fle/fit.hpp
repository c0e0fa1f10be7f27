#pragma once

// Small dense least-squares helpers used by the symbol-exponent fit, the
// Frobenius re-extraction and the delta-ladder extrapolations.

#include <cmath>
#include <functional>
#include <vector>

#include "fle/common.hpp"

namespace fle {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x,
                        const std::vector<double>& y) {
  require_domain(x.size() == y.size() && x.size() >= 2,
                 "fit_line: need at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  require_domain(std::abs(det) > 0.0, "fit_line: degenerate abscissae");
  return {(n * sxy - sx * sy) / det, (sxx * sy - sx * sxy) / det};
}

// Solve the m x m system A c = b in place (partial pivoting); m is tiny.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> A,
                                       std::vector<double> b) {
  const std::size_t m = b.size();
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < m; ++i)
      if (std::abs(A[i][k]) > std::abs(A[piv][k])) piv = i;
    std::swap(A[k], A[piv]);
    std::swap(b[k], b[piv]);
    require_domain(A[k][k] != 0.0, "solve_dense: singular matrix");
    for (std::size_t i = k + 1; i < m; ++i) {
      const double f = A[i][k] / A[k][k];
      for (std::size_t j = k; j < m; ++j) A[i][j] -= f * A[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> c(m);
  for (std::size_t i = m; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < m; ++j) s -= A[i][j] * c[j];
    c[i] = s / A[i][i];
  }
  return c;
}

// Least squares for y ~ sum_j c_j basis_j(x) via normal equations.
inline std::vector<double> fit_least_squares(
    const std::vector<double>& x, const std::vector<double>& y,
    const std::vector<std::function<double(double)>>& basis) {
  const std::size_t m = basis.size();
  require_domain(x.size() == y.size() && x.size() >= m,
                 "fit_least_squares: underdetermined");
  std::vector<std::vector<double>> ata(m, std::vector<double>(m, 0.0));
  std::vector<double> atb(m, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<double> row(m);
    for (std::size_t j = 0; j < m; ++j) row[j] = basis[j](x[i]);
    for (std::size_t j = 0; j < m; ++j) {
      atb[j] += row[j] * y[i];
      for (std::size_t k = 0; k < m; ++k) ata[j][k] += row[j] * row[k];
    }
  }
  return solve_dense(std::move(ata), std::move(atb));
}

}  // namespace fle
