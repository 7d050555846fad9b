// Test-only oracles, kept independent of the library's solver paths: a
// two-sided Jacobi eigensolver for Hermitian matrices, an LU log-determinant,
// simplex grid maximization for capacities, and a golden-section minimizer.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "dmimo/linalg.hpp"

namespace oracles {

using dmimo::ComplexMatrix;
using dmimo::cxd;

// Eigenvalues of a Hermitian matrix by cyclic two-sided Jacobi, descending.
inline std::vector<double> hermitian_eigenvalues(ComplexMatrix a) {
  const std::size_t n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (off < 1e-26) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cxd apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag < 1e-30) continue;
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const cxd phase = apq / mag;
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1 + tau * tau));
        const double c = 1.0 / std::sqrt(1 + t * t), s = c * t;
        // columns, then rows (unitary similarity)
        for (std::size_t i = 0; i < n; ++i) {
          const cxd aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * std::conj(phase) * aiq;
          a(i, q) = s * phase * aip + c * aiq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const cxd apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj - s * phase * aqj;
          a(q, j) = s * std::conj(phase) * apj + c * aqj;
        }
      }
    }
  }
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = a(i, i).real();
  std::sort(vals.rbegin(), vals.rend());
  return vals;
}

// Orthonormal eigenvectors alongside the eigenvalues (same sweep; accumulates
// the rotations). Used to build the diagonal-in-eigenbasis covariance grid.
inline void hermitian_eigen(ComplexMatrix a, std::vector<double>* vals, ComplexMatrix* vecs) {
  const std::size_t n = a.rows();
  ComplexMatrix v = ComplexMatrix::identity(n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (off < 1e-26) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cxd apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag < 1e-30) continue;
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const cxd phase = apq / mag;
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1 + tau * tau));
        const double c = 1.0 / std::sqrt(1 + t * t), s = c * t;
        for (std::size_t i = 0; i < n; ++i) {
          const cxd aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * std::conj(phase) * aiq;
          a(i, q) = s * phase * aip + c * aiq;
          const cxd vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * std::conj(phase) * viq;
          v(i, q) = s * phase * vip + c * viq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const cxd apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj - s * phase * aqj;
          a(q, j) = s * std::conj(phase) * apj + c * aqj;
        }
      }
    }
  }
  vals->resize(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });
  *vecs = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    (*vals)[j] = a(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) (*vecs)(i, j) = v(i, order[j]);
  }
}

// log |det| via complex LU with partial pivoting.
inline double lu_logdet(ComplexMatrix a) {
  const std::size_t n = a.rows();
  double logdet = 0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (piv != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
    const cxd pivot = a(k, k);
    logdet += std::log(std::abs(pivot));
    for (std::size_t i = k + 1; i < n; ++i) {
      const cxd f = a(i, k) / pivot;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return logdet;
}

// BT log det(I + H Xi H^adj) with Xi = V diag(p) V^adj.
inline double logdet_rate(const ComplexMatrix& h, const ComplexMatrix& eigvecs,
                          const std::vector<double>& powers, double bt) {
  const std::size_t cols = h.cols();
  ComplexMatrix xi(cols, cols);
  for (std::size_t z = 0; z < powers.size(); ++z) {
    if (powers[z] <= 0) continue;
    for (std::size_t i = 0; i < cols; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        xi(i, j) += powers[z] * eigvecs(i, z) * std::conj(eigvecs(j, z));
  }
  const ComplexMatrix hx = h.multiply(xi).multiply(h.adjoint());
  ComplexMatrix m = ComplexMatrix::identity(h.rows());
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.rows(); ++j) m(i, j) += hx(i, j);
  return bt * lu_logdet(m);
}

// Grid maximization of log det(I + H Xi H^adj) over diagonal-in-eigenbasis
// covariances on the power simplex: exhaustive at the given resolution for
// one or two active directions, exhaustive-with-refinement above that (the
// final grid pitch still meets `step`).
inline double capacity_grid_oracle(const ComplexMatrix& h, double total_power, double bt,
                                   double step_fraction = 1e-3) {
  std::vector<double> eigvals;
  ComplexMatrix eigvecs;
  hermitian_eigen(h.adjoint().multiply(h), &eigvals, &eigvecs);
  int rank = 0;
  for (double v : eigvals)
    if (v > 1e-12 * std::max(eigvals[0], 0.0)) ++rank;
  if (rank == 0 || total_power <= 0) return 0;

  std::vector<double> p(rank, 0.0);
  auto rate_at = [&](const std::vector<double>& powers) {
    return logdet_rate(h, eigvecs, powers, bt);
  };

  if (rank == 1) {
    p[0] = total_power;
    return rate_at(p);
  }
  if (rank == 2) {
    double best = -1;
    const long steps = std::lround(1.0 / step_fraction);
    for (long i = 0; i <= steps; ++i) {
      p[0] = total_power * double(i) / double(steps);
      p[1] = total_power - p[0];
      best = std::max(best, rate_at(p));
    }
    return best;
  }

  // refinement: shrink a simplex-constrained box around the best grid point
  std::vector<double> lo(rank, 0.0), width(rank, total_power), best_p(rank, 0.0);
  double best = -1;
  const int steps = 10;
  for (int round = 0; round < 6; ++round) {
    std::vector<double> idx(rank - 1, 0.0);
    std::function<void(int, double)> visit = [&](int d, double used) {
      if (d == rank - 1) {
        const double rest = total_power - used;
        if (rest < -1e-12) return;
        p[rank - 1] = std::max(rest, 0.0);
        const double r = rate_at(p);
        if (r > best) {
          best = r;
          best_p = p;
        }
        return;
      }
      for (int i = 0; i <= steps; ++i) {
        const double v = lo[d] + width[d] * double(i) / double(steps);
        if (used + v > total_power + 1e-12) break;
        p[d] = v;
        visit(d + 1, used + v);
      }
    };
    visit(0, 0.0);
    for (int d = 0; d < rank - 1; ++d) {
      const double w = width[d] * 2.0 / double(steps);
      lo[d] = std::max(best_p[d] - w / 2, 0.0);
      width[d] = w;
    }
  }
  return best;
}

// Golden-section minimizer on [a, b] for unimodal f.
inline double golden_section_min(const std::function<double(double)>& f, double a, double b,
                                 double tol = 1e-9) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

inline ComplexMatrix random_matrix(std::mt19937& gen, std::size_t rows, std::size_t cols,
                                   double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = cxd(dist(gen), dist(gen));
  return m;
}

}  // namespace oracles
