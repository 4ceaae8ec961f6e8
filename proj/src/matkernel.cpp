#include "nllab/matkernel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

#include "nllab/errors.hpp"

namespace nllab {
namespace {

void require_square(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw ContractViolation(std::string(who) + ": matrix is " +
                            std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + ", expected square");
  }
}

void require_hermitian(const ComplexMatrix& m, const char* who) {
  require_square(m, who);
  const double residual = hermitian_residual(m);
  if (!(residual <= kTolHerm)) {
    throw ContractViolation(std::string(who) +
                            ": matrix is not Hermitian (asymmetry " +
                            std::to_string(residual) + ")");
  }
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

using EigenSolver = Eigen::SelfAdjointEigenSolver<ComplexMatrix>;

// Eigenvalues with everything below the cutoff set to exactly zero.
Eigen::VectorXd clamped_eigenvalues(const EigenSolver& solver) {
  Eigen::VectorXd values = solver.eigenvalues();
  const double largest = values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
  const double cutoff = kEigCutoffRel * largest;
  for (Index i = 0; i < values.size(); ++i) {
    if (values[i] < cutoff) values[i] = 0.0;
  }
  return values;
}

}  // namespace

double hermitian_residual(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = i; j < m.cols(); ++j) {
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    }
  }
  return worst;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && hermitian_residual(m) <= tol;
}

PsdOperator::PsdOperator(const ComplexMatrix& m) {
  require_hermitian(m, "PsdOperator");
  matrix_ = hermitian_part(m);
  if (matrix_.size() == 0) {
    throw ContractViolation("PsdOperator: empty matrix");
  }
  EigenSolver solver(matrix_, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& values = solver.eigenvalues();
  min_eig_ = values.minCoeff();
  const double scale = values.cwiseAbs().maxCoeff();
  if (min_eig_ < -kTolPsdRel * scale) {
    throw ContractViolation("PsdOperator: smallest eigenvalue " +
                            std::to_string(min_eig_) + " is negative");
  }
}

PsdOperator PsdOperator::trusted(const ComplexMatrix& m) {
  require_square(m, "PsdOperator::trusted");
  PsdOperator op;
  op.matrix_ = hermitian_part(m);
  op.min_eig_ = std::numeric_limits<double>::quiet_NaN();
  return op;
}

PsdOperator PsdOperator::scaled(double factor) const {
  if (!(factor >= 0.0)) {
    throw ContractViolation("PsdOperator::scaled: negative factor");
  }
  PsdOperator op = *this;
  op.matrix_ *= factor;
  op.min_eig_ *= factor;
  return op;
}

ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y) {
  ComplexMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  return out;
}

ComplexMatrix ginibre(Index rows, Index cols, Rng& rng) {
  ComplexMatrix out(rows, cols);
  // Fill row-major so the stream order matches the documented layout.
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) out(i, j) = rng.complex_normal();
  }
  return out;
}

PsdOperator sample_psd(Index dim, Rng& rng, Index rank) {
  if (dim < 1) throw DomainError("sample_psd: dim must be >= 1");
  if (rank < 0 || rank > dim) throw DomainError("sample_psd: rank out of range");
  const Index rows = rank == 0 ? dim : rank;
  const ComplexMatrix a = ginibre(rows, dim, rng);
  return PsdOperator::trusted(a.adjoint() * a);
}

PsdOperator sample_psd(Index dim, std::uint64_t seed, Index rank) {
  Rng rng(seed);
  return sample_psd(dim, rng, rank);
}

ComplexMatrix haar_unitary(Index dim, Rng& rng) {
  const ComplexMatrix z = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

PsdOperator psd_sqrt(const PsdOperator& p) {
  EigenSolver solver(p.matrix());
  const Eigen::VectorXd values = clamped_eigenvalues(solver);
  const ComplexMatrix& vectors = solver.eigenvectors();
  const ComplexMatrix root =
      vectors * values.cwiseSqrt().cast<Complex>().asDiagonal() * vectors.adjoint();
  return PsdOperator::trusted(root);
}

PsdOperator psd_sqrt(const ComplexMatrix& p) { return psd_sqrt(PsdOperator(p)); }

ComplexMatrix psd_pinv_sqrt(const PsdOperator& p) {
  EigenSolver solver(p.matrix());
  const Eigen::VectorXd values = clamped_eigenvalues(solver);
  Eigen::VectorXd inverse_roots(values.size());
  for (Index i = 0; i < values.size(); ++i) {
    inverse_roots[i] = values[i] > 0.0 ? 1.0 / std::sqrt(values[i]) : 0.0;
  }
  const ComplexMatrix& vectors = solver.eigenvectors();
  return hermitian_part(vectors * inverse_roots.cast<Complex>().asDiagonal() *
                        vectors.adjoint());
}

ComplexMatrix psd_pinv_sqrt(const ComplexMatrix& p) {
  return psd_pinv_sqrt(PsdOperator(p));
}

double max_abs_entry(const ComplexMatrix& x) {
  double best = 0.0;
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) best = std::max(best, std::abs(x(i, j)));
  }
  return best;
}

double min_eigenvalue(const ComplexMatrix& hermitian) {
  EigenSolver solver(hermitian_part(hermitian), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double psd_operator_norm(const ComplexMatrix& psd) {
  EigenSolver solver(hermitian_part(psd), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

}  // namespace nllab
