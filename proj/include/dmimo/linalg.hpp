#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dmimo {

using cxd = std::complex<double>;

// Dense row-major complex matrix. Sized for the channels this simulator deals
// with (tens of rows/columns), not for large-scale linear algebra.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  cxd& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cxd& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<cxd>& data() const { return data_; }
  std::vector<cxd>& data() { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix multiply(const ComplexMatrix& rhs) const;
  double frobenius_norm() const;
  bool all_finite() const;

  // Horizontal concatenation [a b ...].
  static ComplexMatrix hcat(std::span<const ComplexMatrix> parts);
  // Vertical concatenation.
  static ComplexMatrix vcat(std::span<const ComplexMatrix> parts);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cxd> data_;
};

struct SvdResult {
  ComplexMatrix u;                      // rows x k, orthonormal columns
  std::vector<double> singular_values;  // k = min(rows, cols), descending, >= 0
  ComplexMatrix v;                      // cols x k, orthonormal columns
};

// Thin SVD via one-sided Jacobi on the (conjugated) tall factor.
SvdResult svd(const ComplexMatrix& a);

// Squared singular values above rel_tol * max, descending. Empty for a zero
// or empty matrix.
std::vector<double> squared_singular_values(const ComplexMatrix& a, double rel_tol = 1e-12);

// Orthonormal basis of {x : a x = 0}. Returns a cols x d matrix; d may be 0.
ComplexMatrix null_space_basis(const ComplexMatrix& a, double rel_tol = 1e-12);

struct WaterFillResult {
  double water_level = 0;      // mu; 0 for an empty gain list
  std::vector<double> powers;  // per-subchannel allocation, same order as gains
  double rate = 0;             // nats/frame
  int active = 0;              // number of strictly powered subchannels
};

// Water-filling over parallel subchannels with SNR-per-unit-power `gains`
// (sorted descending, all positive) and total power `budget`.
WaterFillResult water_fill(std::span<const double> gains, double budget, double bt);

// Capacity of the MIMO channel h at total power `power` (nats/frame); the
// optimizing input covariance is water-filling over h's squared singular
// values. Zero for an empty/all-zero channel or zero power.
double mimo_capacity(const ComplexMatrix& h, double power, double bt);

// d(capacity)/d(power) = bt / water level. Requires power > 0.
double rate_derivative(const ComplexMatrix& h, double power, double bt);

// Capacity-achieving transmit covariance (cols x cols). Zero matrix when no
// power is allocated.
ComplexMatrix capacity_covariance(const ComplexMatrix& h, double power);

}  // namespace dmimo
