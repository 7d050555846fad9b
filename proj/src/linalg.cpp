#include "dmimo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dmimo {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

ComplexMatrix ComplexMatrix::multiply(const ComplexMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("matrix multiply: shape mismatch");
  ComplexMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const cxd aik = (*this)(i, k);
      if (aik == cxd(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += aik * rhs(k, j);
    }
  }
  return out;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0;
  for (const cxd& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const {
  for (const cxd& v : data_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

ComplexMatrix ComplexMatrix::hcat(std::span<const ComplexMatrix> parts) {
  if (parts.empty()) return {};
  std::size_t rows = parts[0].rows(), cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw std::invalid_argument("hcat: row mismatch");
    cols += p.cols();
  }
  ComplexMatrix out(rows, cols);
  std::size_t off = 0;
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < p.cols(); ++j) out(i, off + j) = p(i, j);
    off += p.cols();
  }
  return out;
}

ComplexMatrix ComplexMatrix::vcat(std::span<const ComplexMatrix> parts) {
  if (parts.empty()) return {};
  std::size_t cols = parts[0].cols(), rows = 0;
  for (const auto& p : parts) {
    if (p.cols() != cols) throw std::invalid_argument("vcat: column mismatch");
    rows += p.rows();
  }
  ComplexMatrix out(rows, cols);
  std::size_t off = 0;
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < p.rows(); ++i)
      for (std::size_t j = 0; j < cols; ++j) out(off + i, j) = p(i, j);
    off += p.rows();
  }
  return out;
}

namespace {

// One-sided Jacobi on a tall matrix b (rows >= cols): orthogonalizes the
// columns of b in place while accumulating the right factor v, so that on
// exit b = u * diag(s) with b's columns orthogonal and v unitary.
void jacobi_orthogonalize(ComplexMatrix& b, ComplexMatrix& v) {
  const std::size_t m = b.rows(), n = b.cols();
  if (n < 2) return;
  constexpr double kTol = 1e-14;
  constexpr int kMaxSweeps = 60;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double app = 0, aqq = 0;
        cxd apq(0.0, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
          const cxd bp = b(i, p), bq = b(i, q);
          app += std::norm(bp);
          aqq += std::norm(bq);
          apq += std::conj(bp) * bq;
        }
        const double off = std::abs(apq);
        if (off <= kTol * std::sqrt(app * aqq) || off == 0.0) continue;
        rotated = true;
        // Remove the phase, then apply the classic symmetric 2x2 rotation.
        const cxd phase = apq / off;
        const double tau = (aqq - app) / (2.0 * off);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const cxd sp = s * phase;            // applied to column q -> p
        const cxd spc = s * std::conj(phase);
        for (std::size_t i = 0; i < m; ++i) {
          const cxd bp = b(i, p), bq = b(i, q);
          b(i, p) = c * bp - spc * bq;
          b(i, q) = sp * bp + c * bq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const cxd vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - spc * vq;
          v(i, q) = sp * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }
}

// Appends orthonormal columns to `basis` (m x k, k < m) until it has `want`
// columns, drawing candidates from the identity. Modified Gram-Schmidt with
// one re-orthogonalization pass.
void complete_orthonormal(ComplexMatrix& basis, std::size_t have, std::size_t want) {
  const std::size_t m = basis.rows();
  std::size_t next = have;
  for (std::size_t cand = 0; cand < m && next < want; ++cand) {
    std::vector<cxd> x(m, cxd(0.0, 0.0));
    x[cand] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t c = 0; c < next; ++c) {
        cxd dot(0.0, 0.0);
        for (std::size_t i = 0; i < m; ++i) dot += std::conj(basis(i, c)) * x[i];
        for (std::size_t i = 0; i < m; ++i) x[i] -= dot * basis(i, c);
      }
    }
    double nrm = 0;
    for (const cxd& xi : x) nrm += std::norm(xi);
    nrm = std::sqrt(nrm);
    if (nrm < 1e-7) continue;
    for (std::size_t i = 0; i < m; ++i) basis(i, next) = x[i] / nrm;
    ++next;
  }
  if (next < want) throw std::logic_error("orthonormal completion failed");
}

SvdResult svd_tall(const ComplexMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  ComplexMatrix b = a;
  ComplexMatrix v = ComplexMatrix::identity(n);
  jacobi_orthogonalize(b, v);

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < m; ++i) s += std::norm(b(i, j));
    norms[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  SvdResult out;
  out.singular_values.resize(n);
  out.u = ComplexMatrix(m, n);
  out.v = ComplexMatrix(n, n);
  const double smax = norms.empty() ? 0.0 : norms[order[0]];
  std::size_t filled = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    out.singular_values[j] = norms[src];
    for (std::size_t i = 0; i < n; ++i) out.v(i, j) = v(i, src);
    if (norms[src] > smax * 1e-300 && norms[src] > 0.0) {
      for (std::size_t i = 0; i < m; ++i) out.u(i, j) = b(i, src) / norms[src];
      filled = j + 1;
    }
  }
  // Zero singular values leave holes in u; fill them with any orthonormal
  // completion so u keeps orthonormal columns.
  if (filled < n) complete_orthonormal(out.u, filled, n);
  return out;
}

}  // namespace

SvdResult svd(const ComplexMatrix& a) {
  if (a.empty()) throw std::invalid_argument("svd: empty matrix");
  if (!a.all_finite()) throw std::invalid_argument("svd: non-finite entries");
  if (a.rows() >= a.cols()) return svd_tall(a);
  // Wide matrix: decompose the adjoint and swap the factors.
  SvdResult t = svd_tall(a.adjoint());
  SvdResult out;
  out.u = std::move(t.v);
  out.v = std::move(t.u);
  out.singular_values = std::move(t.singular_values);
  return out;
}

std::vector<double> squared_singular_values(const ComplexMatrix& a, double rel_tol) {
  if (a.empty()) return {};
  if (a.frobenius_norm() == 0.0) return {};
  const SvdResult d = svd(a);
  std::vector<double> out;
  const double cutoff = d.singular_values.empty() ? 0.0 : d.singular_values[0] * rel_tol;
  for (double s : d.singular_values) {
    if (s > cutoff && s > 0.0) out.push_back(s * s);
  }
  return out;
}

ComplexMatrix null_space_basis(const ComplexMatrix& a, double rel_tol) {
  if (a.empty()) throw std::invalid_argument("null_space_basis: empty matrix");
  const std::size_t n = a.cols();
  if (a.frobenius_norm() == 0.0) return ComplexMatrix::identity(n);
  const SvdResult d = svd(a);
  const double cutoff = d.singular_values[0] * rel_tol;
  std::size_t rank = 0;
  for (double s : d.singular_values)
    if (s > cutoff) ++rank;
  if (rank >= n) return {};
  // Complement of the first `rank` right singular vectors.
  ComplexMatrix basis(n, n);
  for (std::size_t j = 0; j < rank; ++j)
    for (std::size_t i = 0; i < n; ++i) basis(i, j) = d.v(i, j);
  complete_orthonormal(basis, rank, n);
  ComplexMatrix out(n, n - rank);
  for (std::size_t j = rank; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) out(i, j - rank) = basis(i, j);
  return out;
}

WaterFillResult water_fill(std::span<const double> gains, double budget, double bt) {
  if (budget < 0) throw std::invalid_argument("water_fill: negative power budget");
  for (std::size_t i = 0; i < gains.size(); ++i) {
    if (!(gains[i] > 0) || !std::isfinite(gains[i]))
      throw std::invalid_argument("water_fill: gains must be positive and finite");
    if (i > 0 && gains[i] > gains[i - 1])
      throw std::invalid_argument("water_fill: gains must be sorted descending");
  }
  WaterFillResult out;
  if (gains.empty()) return out;  // silent link: rate 0, mu 0
  out.powers.assign(gains.size(), 0.0);
  if (budget == 0) {
    out.water_level = 1.0 / gains[0];
    return out;
  }
  // Largest active count i with (P + sum_{j<=i} 1/eps_j) / i > 1/eps_i.
  double inv_sum = 0;
  int active = 0;
  double level = 0;
  for (std::size_t i = 0; i < gains.size(); ++i) {
    const double candidate_sum = inv_sum + 1.0 / gains[i];
    const double candidate_level = (budget + candidate_sum) / double(i + 1);
    if (candidate_level <= 1.0 / gains[i]) break;
    inv_sum = candidate_sum;
    level = candidate_level;
    active = int(i + 1);
  }
  out.water_level = level;
  out.active = active;
  double log_rate = 0;
  for (int z = 0; z < active; ++z) {
    out.powers[z] = std::max(level - 1.0 / gains[z], 0.0);
    log_rate += std::log(level * gains[z]);
  }
  out.rate = bt * log_rate;
  return out;
}

double mimo_capacity(const ComplexMatrix& h, double power, double bt) {
  if (power < 0) throw std::invalid_argument("mimo_capacity: negative power");
  if (h.empty() || power == 0) return 0.0;
  if (!h.all_finite()) throw std::invalid_argument("mimo_capacity: non-finite channel");
  const std::vector<double> eps = squared_singular_values(h);
  return water_fill(eps, power, bt).rate;
}

double rate_derivative(const ComplexMatrix& h, double power, double bt) {
  if (!(power > 0)) throw std::invalid_argument("rate_derivative: power must be positive");
  const std::vector<double> eps = squared_singular_values(h);
  if (eps.empty()) return 0.0;
  const WaterFillResult wf = water_fill(eps, power, bt);
  return bt / wf.water_level;
}

ComplexMatrix capacity_covariance(const ComplexMatrix& h, double power) {
  ComplexMatrix cov(h.cols(), h.cols());
  if (h.empty() || power <= 0 || h.frobenius_norm() == 0.0) return cov;
  const SvdResult d = svd(h);
  std::vector<double> eps;
  const double cutoff = d.singular_values[0] * 1e-12;
  for (double s : d.singular_values)
    if (s > cutoff && s > 0.0) eps.push_back(s * s);
  if (eps.empty()) return cov;
  const WaterFillResult wf = water_fill(eps, power, 1.0);
  for (int z = 0; z < wf.active; ++z) {
    const double rho = wf.powers[z];
    for (std::size_t i = 0; i < h.cols(); ++i) {
      const cxd vi = d.v(i, z);
      for (std::size_t j = 0; j < h.cols(); ++j) cov(i, j) += rho * vi * std::conj(d.v(j, z));
    }
  }
  return cov;
}

}  // namespace dmimo
