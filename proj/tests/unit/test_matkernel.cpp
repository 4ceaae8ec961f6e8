#include "catch_amalgamated.hpp"

#include "nllab/errors.hpp"
#include "nllab/matkernel.hpp"

using namespace nllab;

namespace {

ComplexMatrix kron_oracle(const ComplexMatrix& x, const ComplexMatrix& y) {
  ComplexMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Index r1 = 0; r1 < x.rows(); ++r1)
    for (Index r2 = 0; r2 < x.cols(); ++r2)
      for (Index c1 = 0; c1 < y.rows(); ++c1)
        for (Index c2 = 0; c2 < y.cols(); ++c2)
          out(r1 * y.rows() + c1, r2 * y.cols() + c2) = x(r1, r2) * y(c1, c2);
  return out;
}

double rel_frob(const ComplexMatrix& x, const ComplexMatrix& y) {
  return (x - y).norm() / std::max(1.0, y.norm());
}

ComplexMatrix diag(std::initializer_list<double> d) {
  ComplexMatrix m = ComplexMatrix::Zero(d.size(), d.size());
  Index i = 0;
  for (double v : d) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("kron examples") {
  CHECK(kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)) ==
        ComplexMatrix::Identity(4, 4));
  CHECK(kron(diag({1, 2}), diag({3, 4})) == diag({3, 4, 6, 8}));
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix x = ginibre(3, 3, rng);
    const ComplexMatrix y = ginibre(3, 3, rng);
    REQUIRE(kron(x, y) == kron_oracle(x, y));
  }
  const ComplexMatrix x = ginibre(2, 3, rng);
  const ComplexMatrix y = ginibre(4, 1, rng);
  CHECK(kron(x, y) == kron_oracle(x, y));
}

TEST_CASE("sample_psd examples") {
  const PsdOperator one = sample_psd(1, 5);
  CHECK(one.matrix()(0, 0).real() >= 0.0);
  CHECK(one.matrix()(0, 0).imag() == 0.0);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const PsdOperator p = sample_psd(4, seed);
    REQUIRE(is_hermitian(p.matrix()));
    REQUIRE(min_eigenvalue(p.matrix()) >= -kTolPsdRel * psd_operator_norm(p.matrix()));
  }
  CHECK(sample_psd(5, 99).matrix() == sample_psd(5, 99).matrix());
  Rng rng(4);
  const PsdOperator low = sample_psd(4, rng, 2);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(low.matrix());
  CHECK(std::abs(es.eigenvalues()(1)) < 1e-10 * es.eigenvalues()(3));
}

TEST_CASE("PsdOperator rejects bad input") {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(0, 1) = 0.5;
  CHECK_THROWS_AS(PsdOperator(m), ContractViolation);
  CHECK_THROWS_AS(PsdOperator(diag({1, -1})), ContractViolation);
  CHECK_THROWS_AS(PsdOperator(ComplexMatrix::Zero(2, 3)), ContractViolation);
  CHECK_NOTHROW(PsdOperator(diag({1, 0})));
}

TEST_CASE("psd_sqrt examples") {
  CHECK(rel_frob(psd_sqrt(ComplexMatrix::Identity(3, 3)).matrix(),
                 ComplexMatrix::Identity(3, 3)) < 1e-14);
  CHECK(rel_frob(psd_sqrt(diag({4, 9})).matrix(), diag({2, 3})) < 1e-14);
  Rng rng(8);
  for (int t = 0; t < 30; ++t) {
    const PsdOperator p = sample_psd(2 + t % 5, rng);
    const ComplexMatrix s = psd_sqrt(p).matrix();
    REQUIRE(rel_frob(s * s, p.matrix()) < 1e-9);
  }
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  bad(1, 0) = 1.0;
  CHECK_THROWS_AS(psd_sqrt(bad), ContractViolation);
}

TEST_CASE("psd_pinv_sqrt examples") {
  CHECK(rel_frob(psd_pinv_sqrt(ComplexMatrix::Identity(2, 2)), ComplexMatrix::Identity(2, 2)) <
        1e-14);
  CHECK(rel_frob(psd_pinv_sqrt(diag({4, 0})), diag({0.5, 0})) < 1e-14);
  Rng rng(9);
  for (int t = 0; t < 30; ++t) {
    const PsdOperator p = sample_psd(2 + t % 5, rng);
    const ComplexMatrix prod = psd_pinv_sqrt(p) * psd_sqrt(p).matrix();
    REQUIRE(rel_frob(prod, ComplexMatrix::Identity(p.dim(), p.dim())) < 1e-9);
  }
  // Rank-deficient: product is the projector onto the support.
  const PsdOperator low = sample_psd(4, rng, 2);
  const ComplexMatrix prod = psd_pinv_sqrt(low) * psd_sqrt(low).matrix();
  CHECK(rel_frob(prod * prod, prod) < 1e-9);
  CHECK(std::abs(prod.trace().real() - 2.0) < 1e-9);
}

TEST_CASE("max_abs_entry examples") {
  CHECK(max_abs_entry(ComplexMatrix::Identity(3, 3)) == 1.0);
  CHECK(max_abs_entry(ComplexMatrix::Zero(2, 2)) == 0.0);
  Rng rng(10);
  const ComplexMatrix x = ginibre(4, 5, rng);
  double best = 0.0;
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j) best = std::max(best, std::abs(x(i, j)));
  CHECK(max_abs_entry(x) == best);
}

TEST_CASE("property: kron of PSD is PSD with multiplicative trace") {
  Rng rng(20);
  for (int t = 0; t < 100; ++t) {
    const PsdOperator p = sample_psd(1 + t % 4, rng);
    const PsdOperator q = sample_psd(1 + (t / 4) % 4, rng);
    const ComplexMatrix k = kron(p.matrix(), q.matrix());
    REQUIRE(min_eigenvalue(k) >= -kTolPsdRel * psd_operator_norm(k));
    const double tr = p.trace() * q.trace();
    REQUIRE(std::abs(k.trace().real() - tr) <= 1e-10 * tr);
  }
}

TEST_CASE("property: sqrt of squared sqrt is idempotent") {
  Rng rng(21);
  for (int t = 0; t < 100; ++t) {
    const PsdOperator p = sample_psd(2 + t % 5, rng);
    const ComplexMatrix s = psd_sqrt(p).matrix();
    REQUIRE(rel_frob(psd_sqrt(ComplexMatrix(s * s)).matrix(), s) < 1e-8);
  }
}

TEST_CASE("property: max_abs_entry multiplies for diagonal kron") {
  Rng rng(22);
  for (int t = 0; t < 50; ++t) {
    ComplexMatrix p = ComplexMatrix::Zero(3, 3), q = ComplexMatrix::Zero(2, 2);
    for (int i = 0; i < 3; ++i) p(i, i) = rng.uniform();
    for (int i = 0; i < 2; ++i) q(i, i) = rng.uniform();
    REQUIRE(max_abs_entry(kron(p, q)) == max_abs_entry(p) * max_abs_entry(q));
  }
}

TEST_CASE("haar_unitary is unitary") {
  Rng rng(30);
  const ComplexMatrix u = haar_unitary(5, rng);
  CHECK(rel_frob(u.adjoint() * u, ComplexMatrix::Identity(5, 5)) < 1e-12);
}
