#include "catch_amalgamated.hpp"

#include <cmath>

#include "nllab/errors.hpp"
#include "nllab/estimator.hpp"

using namespace nllab;

TEST_CASE("upper_bound_construction") {
  const ProductBasis d = domino_basis();
  for (double eps : {1e-2, 1e-4, 1e-6}) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      const MeasurementPair m = upper_bound_construction(d, i, eps);
      REQUIRE(std::abs(m.a.trace() - (1 + 3 * eps)) < 1e-14);
      REQUIRE(min_eigenvalue(m.a.matrix()) > eps / 2);
      REQUIRE(min_eigenvalue(m.b.matrix()) > eps / 2);
      const double expected =
          (1 + eps) * (1 + eps) / ((1 + 3 * eps) * (1 + 3 * eps)) - 1.0 / 9;
      REQUIRE(std::abs(info_gain(d, m) - expected) < 1e-12);
    }
  }
  CHECK(std::abs(info_gain(d, upper_bound_construction(d, 0, 1e-9)) - 8.0 / 9) < 1e-8);
  const auto r = nonlocality_ratio(d, upper_bound_construction(d, 3, 1e-6));
  REQUIRE(r.has_value());
  CHECK(*r <= 9.0 / 8 + 0.01);
  CHECK_THROWS_AS(upper_bound_construction(d, 0, 0.0), DomainError);
}

TEST_CASE("estimate_eta on the domino basis stays in the bracket") {
  EstimatorOptions opt;
  opt.budget = 2000;
  opt.seed = 17;
  opt.certified_lower = 0.125;
  const EtaEstimate e = estimate_eta(domino_basis(), opt);
  CHECK(e.best_ratio >= 0.125 - 1e-9);
  CHECK(e.best_ratio <= 9.0 / 8 + 0.01);
  CHECK(e.min_observed_ratio >= 0.125 - 1e-9);
  CHECK(e.min_observed_ratio <= e.best_ratio);
  CHECK(e.samples == 2000 + 27);
  REQUIRE(e.best_pair.has_value());
  CHECK(std::abs(e.best_pair->a.trace() - 1) < 1e-12);
  CHECK(std::abs(*nonlocality_ratio(domino_basis(), *e.best_pair) - e.best_ratio) < 1e-8);
  for (std::size_t k = 1; k < e.refinement_trace.size(); ++k) {
    REQUIRE(e.refinement_trace[k].ratio <= e.refinement_trace[k - 1].ratio);
  }
}

TEST_CASE("estimate_eta is deterministic") {
  EstimatorOptions opt;
  opt.budget = 1;
  opt.seed = 3;
  opt.eps_list = {};
  const EtaEstimate x = estimate_eta(domino_basis(), opt);
  const EtaEstimate y = estimate_eta(domino_basis(), opt);
  CHECK(x.best_ratio == y.best_ratio);
  CHECK(x.evaluations == y.evaluations);
}

TEST_CASE("estimate_eta on the standard basis approaches zero") {
  EstimatorOptions opt;
  opt.budget = 500;
  opt.seed = 1;
  const EtaEstimate e = estimate_eta(standard_basis(3, 3), opt);
  CHECK(e.best_ratio < 1e-3);
}

TEST_CASE("property: construction points cap the estimate at n/(n-1)") {
  for (const ProductBasis& b : {standard_basis(2, 2), domino_basis(),
                                rotated_domino_basis(0.3, 0.5, 0.7, 0.2)}) {
    EstimatorOptions opt;
    opt.budget = 100;
    opt.restarts = 1;
    opt.max_iterations = 10;
    const EtaEstimate e = estimate_eta(b, opt);
    const double n = static_cast<double>(b.size());
    CHECK(e.best_ratio <= n / (n - 1) + 0.01);
    CHECK(e.best_ratio <= 2.0 + 1e-6);
  }
}

TEST_CASE("estimate_eta input checks") {
  EstimatorOptions opt;
  opt.budget = 0;
  CHECK_THROWS_AS(estimate_eta(domino_basis(), opt), DomainError);
}
