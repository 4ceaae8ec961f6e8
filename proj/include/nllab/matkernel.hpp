#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>

#include "nllab/rng.hpp"

namespace nllab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Absolute tolerance on max_ij |M_ij - conj(M_ji)|.
inline constexpr double kTolHerm = 1e-10;
/// PSD tolerance, relative to the largest eigenvalue magnitude.
inline constexpr double kTolPsdRel = 1e-10;
/// Eigenvalues below this fraction of the largest one are clamped to zero
/// by psd_sqrt / psd_pinv_sqrt.
inline constexpr double kEigCutoffRel = 1e-12;

double hermitian_residual(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = kTolHerm);

/// Positive semidefinite operator. Construction validates the matrix and
/// stores it exactly Hermitian; the value is immutable afterwards.
class PsdOperator {
 public:
  /// Throws ContractViolation for non-square, non-Hermitian or
  /// non-PSD input.
  explicit PsdOperator(const ComplexMatrix& m);

  /// Skips the eigenvalue check. Only for matrices that are PSD by
  /// construction (X^dagger X and friends); the Hermitian part is still
  /// enforced.
  static PsdOperator trusted(const ComplexMatrix& m);

  const ComplexMatrix& matrix() const { return matrix_; }
  Index dim() const { return matrix_.rows(); }
  /// Smallest eigenvalue at construction (NaN for trusted()).
  double min_eig_floor() const { return min_eig_; }
  double trace() const { return matrix_.trace().real(); }

  PsdOperator scaled(double factor) const;

 private:
  PsdOperator() = default;
  ComplexMatrix matrix_;
  double min_eig_ = 0.0;
};

/// Standard Kronecker product: (x ⊗ y)(r1*ry + c1, r2*cy + c2) = x(r1,r2) y(c1,c2).
ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y);

/// Matrix with independent standard complex Gaussian entries.
ComplexMatrix ginibre(Index rows, Index cols, Rng& rng);

/// A^dagger A for a rank x dim Ginibre A. rank == 0 means full rank (dim).
/// Ranks below dim give rank-deficient operators for stress tests.
PsdOperator sample_psd(Index dim, Rng& rng, Index rank = 0);
PsdOperator sample_psd(Index dim, std::uint64_t seed, Index rank = 0);

/// Haar-random unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal moved into Q.
ComplexMatrix haar_unitary(Index dim, Rng& rng);

/// Principal square root with eigenvalues below kEigCutoffRel * max clamped.
PsdOperator psd_sqrt(const PsdOperator& p);
PsdOperator psd_sqrt(const ComplexMatrix& p);

/// Moore-Penrose pseudo-inverse of the principal square root.
ComplexMatrix psd_pinv_sqrt(const PsdOperator& p);
ComplexMatrix psd_pinv_sqrt(const ComplexMatrix& p);

/// Largest entry in absolute value.
double max_abs_entry(const ComplexMatrix& x);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const ComplexMatrix& hermitian);

/// Operator norm of a PSD matrix (its largest eigenvalue).
double psd_operator_norm(const ComplexMatrix& psd);

}  // namespace nllab
