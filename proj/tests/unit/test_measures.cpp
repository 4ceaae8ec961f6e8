#include "catch_amalgamated.hpp"

#include <cmath>

#include "nllab/errors.hpp"
#include "nllab/measures.hpp"

using namespace nllab;

namespace {

MeasurementPair pair_of(const ComplexMatrix& a, const ComplexMatrix& b) {
  return {PsdOperator(a), PsdOperator(b)};
}

MeasurementPair identity_pair(int dA, int dB) {
  return pair_of(ComplexMatrix::Identity(dA, dA), ComplexMatrix::Identity(dB, dB));
}

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

// G through the full operator: <psi_i| kron(a, b) |psi_j>.
ComplexMatrix gram_oracle(const ProductBasis& s, const MeasurementPair& m) {
  const ComplexMatrix k = kron(m.a.matrix(), m.b.matrix());
  ComplexMatrix g(s.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      g(i, j) = s[i].full().dot(k * s[j].full());
  return g;
}

double disturbance_oracle(const ProductBasis& s, const MeasurementPair& m) {
  const ComplexMatrix g = gram_oracle(s, m);
  double best = 0.0;
  for (Index i = 0; i < g.rows(); ++i)
    for (Index j = 0; j < g.rows(); ++j)
      if (i != j)
        best = std::max(best, std::abs(g(i, j)) / std::sqrt(g(i, i).real() * g(j, j).real()));
  return best;
}

// Factorized form: product of the normalized local overlaps.
double factorized_disturbance(const ProductBasis& s, const MeasurementPair& m) {
  auto local = [](const ComplexVector& x, const ComplexMatrix& op, const ComplexVector& y) {
    return x.dot(op * y);
  };
  double best = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (i == j) continue;
      const double fa = std::abs(local(s[i].alice, m.a.matrix(), s[j].alice)) /
                        std::sqrt(local(s[i].alice, m.a.matrix(), s[i].alice).real() *
                                  local(s[j].alice, m.a.matrix(), s[j].alice).real());
      const double fb = std::abs(local(s[i].bob, m.b.matrix(), s[j].bob)) /
                        std::sqrt(local(s[i].bob, m.b.matrix(), s[i].bob).real() *
                                  local(s[j].bob, m.b.matrix(), s[j].bob).real());
      best = std::max(best, fa * fb);
    }
  return best;
}

MeasurementPair construction(const ProductBasis& s, std::size_t i, double eps) {
  const ComplexMatrix a =
      projector(s[i].alice) + eps * ComplexMatrix::Identity(s.dA(), s.dA());
  const ComplexMatrix b = projector(s[i].bob) + eps * ComplexMatrix::Identity(s.dB(), s.dB());
  return pair_of(a, b);
}

MeasurementPair random_pair(int dA, int dB, Rng& rng) {
  return {sample_psd(dA, rng), sample_psd(dB, rng)};
}

}  // namespace

TEST_CASE("gram_under examples") {
  const ProductBasis d = domino_basis();
  CHECK((gram_under(d, identity_pair(3, 3)) - ComplexMatrix::Identity(9, 9)).norm() < 1e-14);

  const ProductBasis std33 = standard_basis(3, 3);
  ComplexMatrix a = ComplexMatrix::Zero(3, 3), b = ComplexMatrix::Zero(3, 3);
  a.diagonal() << 1, 2, 3;
  b.diagonal() << 5, 7, 11;
  const ComplexMatrix g = gram_under(std33, pair_of(a, b));
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      const int i = r * 3 + c;
      CHECK(g(i, i) == a(r, r) * b(c, c));
    }
  CHECK((g - ComplexMatrix(g.diagonal().asDiagonal())).norm() == 0.0);

  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const MeasurementPair m = random_pair(3, 3, rng);
    REQUIRE((gram_under(d, m) - gram_oracle(d, m)).cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK_THROWS_AS(gram_under(d, identity_pair(2, 3)), ContractViolation);
}

TEST_CASE("disturbance examples") {
  const ProductBasis d = domino_basis();
  CHECK(disturbance(d, identity_pair(3, 3)) == 0.0);

  const MeasurementPair m = construction(d, 0, 1e-6);
  CHECK(std::abs(disturbance(d, m) - factorized_disturbance(d, m)) < 1e-12);

  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const MeasurementPair r = random_pair(3, 3, rng);
    REQUIRE(std::abs(disturbance(d, r) - disturbance_oracle(d, r)) < 1e-10);
  }

  // a = diag(1, 1+t, 1), b = I: the worst pairs are the tiles along Alice's
  // axis, each with overlap (t/2) / ((2+t)/2).
  for (double t : {0.1, 0.5, 2.0}) {
    ComplexMatrix a = ComplexMatrix::Identity(3, 3);
    a(1, 1) = 1.0 + t;
    CHECK(std::abs(disturbance(d, pair_of(a, ComplexMatrix::Identity(3, 3))) - t / (2 + t)) <
          1e-14);
  }

  ComplexMatrix a = ComplexMatrix::Zero(3, 3);
  a(0, 0) = 1.0;
  CHECK_THROWS_AS(disturbance(d, pair_of(a, ComplexMatrix::Identity(3, 3))), UndefinedQuantity);
}

TEST_CASE("info_gain examples") {
  const ProductBasis d = domino_basis();
  CHECK(std::abs(info_gain(d, identity_pair(3, 3))) < 1e-15);

  const MeasurementPair p = pair_of(projector(d[0].alice), projector(d[0].bob));
  const ComplexMatrix g = gram_oracle(d, p);
  const double expected = g.diagonal().real().maxCoeff() / g.diagonal().real().sum() - 1.0 / 9;
  CHECK(std::abs(info_gain(d, p) - expected) < 1e-14);
  CHECK(std::abs(info_gain(d, p) - 8.0 / 9) < 1e-14);

  // Posterior max 1/9 + 1/108 gives gain 1/108.
  ComplexMatrix g2 = ComplexMatrix::Zero(9, 9);
  const double top = 1.0 / 9 + 1.0 / 108;
  g2(0, 0) = top;
  for (int k = 1; k < 9; ++k) g2(k, k) = (1.0 - top) / 8;
  CHECK(std::abs(*summarize_gram(g2, 1.0).info_gain - 1.0 / 108) < 1e-15);

  CHECK_THROWS_AS(info_gain(d, pair_of(ComplexMatrix::Zero(3, 3), ComplexMatrix::Identity(3, 3))),
                  UndefinedQuantity);
}

TEST_CASE("nonlocality_ratio examples") {
  const ProductBasis d = domino_basis();
  CHECK_FALSE(nonlocality_ratio(d, identity_pair(3, 3)).has_value());
  const auto r = nonlocality_ratio(d, construction(d, 0, 1e-6));
  REQUIRE(r.has_value());
  CHECK(*r <= 9.0 / 8 + 0.01);
  CHECK(*r >= 1.0 / 8);
}

TEST_CASE("rigidity_deviation examples") {
  CHECK(rigidity_deviation(identity_pair(3, 3), 9) == 0.0);
  ComplexMatrix a = ComplexMatrix::Zero(3, 3);
  a(0, 0) = 1.0;
  CHECK(std::abs(rigidity_deviation(pair_of(a, ComplexMatrix::Identity(3, 3)), 9) - 2.0 / 9) <
        1e-15);
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const MeasurementPair m = random_pair(3, 3, rng);
    const ComplexMatrix k = kron(m.a.matrix(), m.b.matrix());
    const ComplexMatrix dev =
        k / k.trace().real() - ComplexMatrix::Identity(9, 9) / 9.0;
    REQUIRE(std::abs(rigidity_deviation(m, 9) - dev.cwiseAbs().maxCoeff()) < 1e-14);
  }
  CHECK_THROWS_AS(rigidity_deviation(ComplexMatrix::Zero(3, 3), ComplexMatrix::Identity(3, 3), 9),
                  UndefinedQuantity);
}

TEST_CASE("property: scale invariance") {
  const ProductBasis d = domino_basis();
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    const MeasurementPair m = random_pair(3, 3, rng);
    const double sa = std::exp(rng.uniform(-5, 5)), sb = std::exp(rng.uniform(-5, 5));
    const MeasurementPair scaled{m.a.scaled(sa), m.b.scaled(sb)};
    auto close = [](double x, double y) { return std::abs(x - y) <= 1e-10 * std::abs(y) + 1e-15; };
    REQUIRE(close(disturbance(d, scaled), disturbance(d, m)));
    REQUIRE(close(info_gain(d, scaled), info_gain(d, m)));
    REQUIRE(close(*nonlocality_ratio(d, scaled), *nonlocality_ratio(d, m)));
    REQUIRE(close(rigidity_deviation(scaled, 9), rigidity_deviation(m, 9)));
  }
}

TEST_CASE("property: disturbance in [0,1] and trace equals sum of G") {
  const ProductBasis d = domino_basis();
  Rng rng(5);
  for (int t = 0; t < 500; ++t) {
    const MeasurementPair m{sample_psd(3, rng, 1 + t % 3), sample_psd(3, rng, 1 + (t / 3) % 3)};
    const ComplexMatrix g = gram_under(d, m);
    const double tr = m.a.trace() * m.b.trace();
    REQUIRE(std::abs(g.diagonal().real().sum() - tr) <= 1e-10 * tr);
    const auto summary = summarize_gram(g, tr);
    if (summary.delta) {
      REQUIRE(*summary.delta >= 0.0);
      REQUIRE(*summary.delta <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("property: domino basis ratio and rigidity over 10^4 samples") {
  const ProductBasis d = domino_basis();
  std::size_t defined = 0;
  for (std::uint64_t t = 0; t < 10000; ++t) {
    Rng rng(derive_seed(0x5eed, t));
    const Index ra = 1 + static_cast<Index>(rng.below(3));
    const Index rb = 1 + static_cast<Index>(rng.below(3));
    const MeasurementPair m{sample_psd(3, rng, ra), sample_psd(3, rng, rb)};
    const MeasureReport rep = measure(d, m, t);
    if (rep.ratio) {
      ++defined;
      REQUIRE(*rep.ratio >= 1.0 / 8 - 1e-9);
    }
    if (rep.delta) REQUIRE(rep.rigidity_dev <= 4.0 * *rep.delta + 1e-9);
  }
  CHECK(defined > 1000);
}
