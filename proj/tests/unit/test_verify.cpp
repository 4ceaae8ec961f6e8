#include "catch_amalgamated.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "nllab/bounds.hpp"
#include "nllab/errors.hpp"
#include "nllab/estimator.hpp"
#include "nllab/verify.hpp"

using namespace nllab;
using Catch::Matchers::WithinAbs;

namespace {

Tiling load_tiling(const std::string& name) {
  std::ifstream in(std::string(NLLAB_DATA_DIR) + "/" + name);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_tiling(buf.str());
}

double worst_of(const std::vector<SubcheckResult>& items, const std::string& id) {
  for (const auto& it : items) {
    if (it.id == id) return it.worst_margin;
  }
  FAIL("missing subcheck " << id);
  return 0.0;
}

void require_clean(const LemmaSuiteResult& r) {
  INFO(r.lemma_id << " worst " << r.worst_margin);
  REQUIRE(r.violations == 0);
  REQUIRE(r.worst_margin >= -kLemmaTolRel);
  REQUIRE(r.checked() > 0);
  REQUIRE(r.generator == "splitmix64-boxmuller-v1");
  for (const auto& s : r.subchecks) {
    INFO(s.id);
    REQUIRE(s.violations == 0);
    REQUIRE(s.evaluated > 0);
  }
}

}  // namespace

TEST_CASE("uv lemma holds for random unitaries and matrices") {
  for (int m = 1; m <= 4; ++m) {
    for (int n = 1; n <= 4; ++n) require_clean(check_uv_lemma(m, n, 300, 11));
  }
  require_clean(check_uv_lemma(3, 3, 2000, 5));
}

TEST_CASE("uv lemma is an equality in dimension one") {
  // |u* M v| = |M| for unit scalars u, v.
  const auto r = check_uv_lemma(1, 1, 50, 3);
  REQUIRE_THAT(r.worst_margin, WithinAbs(0.0, 1e-12));
  REQUIRE(r.subcheck("uv")->worst_margin <= 1e-12);
}

TEST_CASE("uv lemma rejects empty dimensions") {
  REQUIRE_THROWS_AS(check_uv_lemma(0, 2, 1, 0), DomainError);
}

TEST_CASE("pair of tiles on the domino basis") {
  const auto r = check_pair_of_tiles(domino_basis(), 2000, 7);
  require_clean(r);
  // The single 1x1 tile pairs with size-2 tiles (factor sqrt 2); size-2
  // tiles pair with each other (factor 2).
  REQUIRE(r.subcheck("tiles_1_2") != nullptr);
  REQUIRE(r.subcheck("tiles_2_2") != nullptr);
  REQUIRE(r.subcheck("tiles_1_1") == nullptr);
}

TEST_CASE("pair of tiles on a domino-type 4x4 basis") {
  require_clean(check_pair_of_tiles(domino_type_basis(load_tiling("wrap4x4.tiling")), 500, 8));
}

TEST_CASE("identity operators give zero domino margins") {
  const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
  const auto items = domino_rigidity_margins(id, id);
  REQUIRE(items.has_value());
  for (const auto& it : *items) {
    INFO(it.id);
    REQUIRE_THAT(it.worst_margin, WithinAbs(0.0, 1e-15));
  }
}

TEST_CASE("diagonal bump on a has a closed-form diag1 margin") {
  // a = diag(1, 1+t, 1), b = I: only the two vertical tiles see a, with
  // overlap (t/2) / ((2+t)/2), so delta = t/(2+t). After normalizing by
  // tr(a) = 3 + t the worst single-tile gap is t/(3+t).
  for (double t : {1e-3, 0.05, 0.4}) {
    ComplexMatrix a = ComplexMatrix::Identity(3, 3);
    a(1, 1) = 1.0 + t;
    const auto items = domino_rigidity_margins(a, ComplexMatrix::Identity(3, 3));
    REQUIRE(items.has_value());
    REQUIRE_THAT(worst_of(*items, "diag1"), WithinAbs(t / (2 + t) - t / (3 + t), 1e-14));
  }
}

TEST_CASE("domino rigidity suite at c = 4") {
  const auto r = check_domino_rigidity(3000, 21);
  require_clean(r);
  for (const char* id : {"diag1", "triangle", "ab_diag", "Diag", "Offdiag1", "Offdiag2",
                         "Offdiag3", "Offdiag", "rigidity"}) {
    REQUIRE(r.subcheck(id) != nullptr);
  }
  REQUIRE(r.subcheck("Offdiag3")->evaluated == 4 * r.checked());
  // Near-identity draws make the bounds nearly tight.
  REQUIRE(r.worst_margin < 1e-3);
}

TEST_CASE("domino rigidity suite is deterministic") {
  const auto x = check_domino_rigidity(200, 99);
  const auto y = check_domino_rigidity(200, 99);
  REQUIRE(x.worst_margin == y.worst_margin);
  REQUIRE(x.worst_trial == y.worst_trial);
  REQUIRE(x.skipped == y.skipped);
}

TEST_CASE("dimbox on the 4x4 tiling at c = 2D = 4") {
  const auto r = check_dimbox_rigidity(load_tiling("wrap4x4.tiling"), 1500, 4);
  require_clean(r);
  REQUIRE(r.lemma_id == "dimbox_rigidity:D=2");
  REQUIRE(r.subcheck("same_tile") != nullptr);
}

TEST_CASE("dimbox on the 3x3 domino tiling agrees with the box suite") {
  const Tiling t = load_tiling("domino.tiling");
  require_clean(check_dimbox_rigidity(t, 1500, 12));
  require_clean(check_domino_rigidity(1500, 12));
}

TEST_CASE("dimbox on the 5x5 corner tiling") {
  const Tiling t = load_tiling("corners5x5.tiling");
  if (analyze(t).irreducible && analyze(t).domino_type) {
    require_clean(check_dimbox_rigidity(t, 300, 13));
  } else {
    REQUIRE_THROWS_AS(check_dimbox_rigidity(t, 1, 13), DomainError);
  }
}

TEST_CASE("dimbox preconditions") {
  // All monominoes: domino-type but reducible.
  REQUIRE_THROWS_AS(check_dimbox_rigidity(parse_tiling("a b c\nd e f\ng h i\n"), 1, 0),
                    DomainError);
  // A 1x3 tile is not domino-type.
  REQUIRE_THROWS_AS(check_dimbox_rigidity(parse_tiling("a a a\nb c d\ne f g\n"), 1, 0),
                    DomainError);
  // Too small.
  REQUIRE_THROWS_AS(check_dimbox_rigidity(parse_tiling("a a\nb b\n"), 1, 0), DomainError);
}

TEST_CASE("rotated chain has no violations and hits its hypotheses") {
  for (double theta : {std::numbers::pi / 4, std::numbers::pi / 8, std::numbers::pi / 12}) {
    const auto r = check_rotated_chain(theta, 2000, 31);
    require_clean(r);
    for (const char* h : {"a11>=|a|/s", "b11>=|b|/s", "both", "small_delta"}) {
      INFO(h);
      REQUIRE(r.hit_rate(h) >= 0.05);
    }
    for (const char* id : {"rot_diag", "bounds_offdiag", "bounds_diag", "max_norm", "rot_Diag",
                           "rot_Offdiag", "small_delta", "dichotomy", "rigidity"}) {
      INFO(id);
      REQUIRE(r.subcheck(id) != nullptr);
    }
  }
}

TEST_CASE("rotated chain diagonal bound in closed form") {
  // b has a single real coupling x between |0> and |1>; a = I/3 has equal
  // diagonals and no couplings, so the a-side margins are (2/sin2t) delta |a|.
  const double theta = std::numbers::pi / 8;
  const double x = 0.05;
  ComplexMatrix b = ComplexMatrix::Zero(3, 3);
  b(0, 0) = 0.5;
  b(1, 1) = 0.3;
  b(2, 2) = 0.2;
  b(0, 1) = b(1, 0) = x;
  const ComplexMatrix a = ComplexMatrix::Identity(3, 3) / 3.0;
  const ProductBasis s = rotated_domino_basis(theta, theta, theta, theta);
  const double d = disturbance(s, {PsdOperator(a), PsdOperator(b)});
  const double nb = psd_operator_norm(b);
  const double k = 2.0 / std::sin(2 * theta);
  const double expected = std::min({k * (d * nb + x) - 0.2, k * d * nb - 0.1, k * d / 3.0});
  const auto items = rotated_chain_margins(theta, a, b);
  REQUIRE(items.has_value());
  REQUIRE_THAT(worst_of(*items, "rot_diag"), WithinAbs(expected, 1e-14));
}

TEST_CASE("rotated chain at pi/4 is looser than the box bound") {
  // Same pair, same basis (up to phases): C/sin2t = C > 4.
  Rng rng(5);
  const ComplexMatrix fa = ComplexMatrix::Identity(3, 3) + 0.01 * ginibre(3, 3, rng);
  const ComplexMatrix fb = ComplexMatrix::Identity(3, 3) + 0.01 * ginibre(3, 3, rng);
  const ComplexMatrix a = fa.adjoint() * fa;
  const ComplexMatrix b = fb.adjoint() * fb;
  const auto box = domino_rigidity_margins(a, b);
  const auto rot = rotated_chain_margins(std::numbers::pi / 4, a, b);
  REQUIRE(box.has_value());
  REQUIRE(rot.has_value());
  REQUIRE(worst_of(*rot, "rigidity") >= worst_of(*box, "rigidity"));
}

TEST_CASE("rotated chain rejects angles outside (0, pi/4]") {
  REQUIRE_THROWS_AS(check_rotated_chain(0.0, 1, 0), DomainError);
  REQUIRE_THROWS_AS(check_rotated_chain(1.0, 1, 0), DomainError);
}

TEST_CASE("adversarial search cannot push domino margins below zero") {
  const auto r = adversarial_domino_margin(6, 400, 17);
  INFO(r.worst_subcheck << " " << r.min_margin);
  REQUIRE(r.min_margin >= -kLemmaTolRel);
  REQUIRE(r.evaluations > 6);
}

TEST_CASE("nelder mead finds a quadratic minimum") {
  const auto f = [](const std::vector<double>& x) {
    return (x[0] - 1.0) * (x[0] - 1.0) + 2.0 * (x[1] + 0.5) * (x[1] + 0.5);
  };
  const auto r = nelder_mead(f, {0.0, 0.0}, 0.5, 2000, 1e-10);
  REQUIRE_THAT(r.x[0], WithinAbs(1.0, 1e-6));
  REQUIRE_THAT(r.x[1], WithinAbs(-0.5, 1e-6));
}

TEST_CASE("kkb: uniform operator on the standard basis") {
  const ProductBasis s = standard_basis(3, 3);
  const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
  const KkbCandidate c{PsdOperator(id / 9.0), PsdOperator(id), 1.0 / 9.0};
  const auto r = check_kkb_conditions(s, c);
  REQUIRE(r.all_hold());
  REQUIRE(r.implies_zero_disturbance);
  REQUIRE_THAT(r.diag_sum, WithinAbs(1.0, 1e-15));
}

TEST_CASE("kkb: corner projector on the standard basis") {
  const ProductBasis s = standard_basis(3, 3);
  ComplexMatrix p = ComplexMatrix::Zero(3, 3);
  p(0, 0) = 1.0;
  const KkbCandidate c = kkb_candidate_from(s, {PsdOperator(p), PsdOperator(p)});
  REQUIRE(c.chi == 1.0);
  const auto r = check_kkb_conditions(s, c);
  REQUIRE(r.all_hold());
  REQUIRE(r.worst_cross == 0.0);
  // Zero diagonals: condition 3 alone does not force zero disturbance.
  REQUIRE_FALSE(r.diagonal_positive);
}

TEST_CASE("kkb: wrong chi fails condition 2 only") {
  const ProductBasis s = standard_basis(3, 3);
  const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
  const auto r = check_kkb_conditions(s, {PsdOperator(id / 9.0), PsdOperator(id), 0.5});
  REQUIRE(r.sum_to_one);
  REQUIRE_FALSE(r.max_equals_chi);
  REQUIRE(r.cross_terms_vanish);
}

TEST_CASE("kkb: domino construction cross terms scale with eps") {
  const ProductBasis s = domino_basis();
  // Cross terms are about eps/2, so condition 3 (squared, 1e-12) fails at
  // eps = 1e-4 and still holds at eps = 1e-6.
  const auto big = check_kkb_conditions(s, kkb_candidate_from(s, upper_bound_construction(s, 0, 1e-4)));
  REQUIRE(big.sum_to_one);
  REQUIRE(big.max_equals_chi);
  REQUIRE_FALSE(big.cross_terms_vanish);
  REQUIRE(big.worst_cross > 1e-6);
  REQUIRE_THAT(big.worst_cross, WithinAbs(5e-5, 1e-6));

  const auto small = check_kkb_conditions(s, kkb_candidate_from(s, upper_bound_construction(s, 0, 1e-6)));
  REQUIRE(small.cross_terms_vanish);
  REQUIRE(small.worst_cross_sq < 1e-12);
}

TEST_CASE("suite tolerance override is recorded and applied") {
  const auto strict = check_uv_lemma(1, 1, 200, 4, 0.0);
  REQUIRE(strict.tolerance == 0.0);
  // Rounding noise on 1x1 can reach a few ulp below zero; a huge
  // tolerance absorbs everything.
  const auto loose = check_domino_rigidity(100, 4, 1e9);
  REQUIRE(loose.violations == 0);
  REQUIRE(loose.tolerance == 1e9);
  REQUIRE_THROWS_AS(check_domino_rigidity(10, 4, -1.0), DomainError);
}
