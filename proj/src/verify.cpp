#include "nllab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string_view>

#include "nllab/bounds.hpp"
#include "nllab/errors.hpp"
#include "nllab/estimator.hpp"
#include "nllab/rng.hpp"

namespace nllab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = std::numbers::sqrt2;

// Per-trial margin collector; margins are already in units of the trial
// scale, so the tolerance is absolute.
class Margins {
 public:
  explicit Margins(double tolerance = kLemmaTolRel) : tolerance_(tolerance) {}

  void add(std::string_view id, double margin) {
    SubcheckResult* item = nullptr;
    for (auto& it : items_) {
      if (it.id == id) item = &it;
    }
    if (item == nullptr) {
      items_.push_back({std::string(id), 0, 0, kInf});
      item = &items_.back();
    }
    ++item->evaluated;
    item->worst_margin = std::min(item->worst_margin, margin);
    if (margin < -tolerance_) ++item->violations;
    worst_ = std::min(worst_, margin);
  }

  double worst() const { return worst_; }
  const std::vector<SubcheckResult>& items() const { return items_; }
  std::vector<SubcheckResult> take() { return std::move(items_); }

 private:
  double tolerance_;
  std::vector<SubcheckResult> items_;
  double worst_ = kInf;
};

class Suite {
 public:
  Suite(std::string id, std::size_t trials, std::uint64_t seed, double tolerance) {
    if (!(tolerance >= 0.0)) throw DomainError("suite tolerance must be nonnegative");
    r_.lemma_id = std::move(id);
    r_.trials = trials;
    r_.seed = seed;
    r_.generator = std::string(Rng::kGeneratorId);
    r_.tolerance = tolerance;
    r_.worst_margin = kInf;
  }

  void skip() { ++r_.skipped; }
  void hit(const std::string& hypothesis) { ++r_.hypothesis_hits[hypothesis]; }
  void declare(const std::string& hypothesis) { r_.hypothesis_hits.emplace(hypothesis, 0); }

  void merge(std::size_t trial, const Margins& m) {
    bool violated = false;
    for (const auto& item : m.items()) {
      SubcheckResult* agg = nullptr;
      for (auto& it : r_.subchecks) {
        if (it.id == item.id) agg = &it;
      }
      if (agg == nullptr) {
        r_.subchecks.push_back({item.id, 0, 0, kInf});
        agg = &r_.subchecks.back();
      }
      agg->evaluated += item.evaluated;
      agg->violations += item.violations;
      agg->worst_margin = std::min(agg->worst_margin, item.worst_margin);
      violated = violated || item.violations > 0;
    }
    if (violated) ++r_.violations;
    if (m.worst() < r_.worst_margin) {
      r_.worst_margin = m.worst();
      r_.worst_trial = trial;
    }
  }

  LemmaSuiteResult finish() {
    if (r_.worst_margin == kInf) r_.worst_margin = 0.0;
    return std::move(r_);
  }

 private:
  LemmaSuiteResult r_;
};

enum class Draw { Generic, NearIdentity, Boosted };

ComplexMatrix normalized(const ComplexMatrix& p) { return p / p.trace().real(); }

// Unit-trace PSD operator. Boosted draws add weight on |1><1| so that the
// (1,1) hypotheses of the rotated chain are hit often.
ComplexMatrix draw_operator(Index dim, Draw kind, Rng& rng) {
  ComplexMatrix p;
  if (kind == Draw::NearIdentity) {
    const double tau = std::pow(10.0, rng.uniform(-5.0, -1.0));
    const ComplexMatrix f = ComplexMatrix::Identity(dim, dim) + tau * ginibre(dim, dim, rng);
    p = f.adjoint() * f;
  } else {
    const bool full = rng.uniform() < 0.5;
    const Index rank = full ? dim : 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(dim)));
    const ComplexMatrix f = ginibre(rank, dim, rng);
    p = f.adjoint() * f;
  }
  if (kind == Draw::Boosted && dim > 1) {
    p(1, 1) += rng.uniform(0.0, 2.0) * psd_operator_norm(p);
  }
  return normalized(p);
}

Draw generic_or_near_identity(Rng& rng) {
  return rng.uniform() < 0.5 ? Draw::Generic : Draw::NearIdentity;
}

double re(const ComplexMatrix& m, int i) { return m(i, i).real(); }

// Standing assumption of every suite: all G_ii above the diagonal floor.
std::optional<double> disturbance_of(const ProductBasis& s, const ComplexMatrix& a,
                                     const ComplexMatrix& b) {
  return summarize_gram(gram_under(s, a, b), a.trace().real() * b.trace().real()).delta;
}

const ProductBasis& domino() {
  static const ProductBasis s = domino_basis();
  return s;
}

const Tiling& domino_tiling() {
  static const Tiling t = induced_tiling(domino());
  return t;
}

bool off_diagonal(int i, int j, int k, int t) { return i != j || k != t; }

void add_domino_margins(const ComplexMatrix& a, const ComplexMatrix& b, double d, Margins& m) {
  const Tiling& tiling = domino_tiling();
  for (int i : {0, 2}) {
    m.add("diag1", d - std::abs(re(a, 1) - re(a, i)));
    m.add("diag1", d - std::abs(re(b, 1) - re(b, i)));
  }
  m.add("triangle", 2.0 * d - std::abs(re(a, 0) - re(a, 2)));
  m.add("triangle", 2.0 * d - std::abs(re(b, 0) - re(b, 2)));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        for (int t = 0; t < 3; ++t) {
          m.add("ab_diag", 4.0 * d - std::abs(re(a, i) * re(b, j) - re(a, k) * re(b, t)));
        }
      }
      m.add("Diag", 4.0 * d - std::abs(re(a, i) * re(b, j) - 1.0 / 9.0));
    }
  }
  for (int r2 = 0; r2 < 3; ++r2) {
    for (int c2 = 0; c2 < 3; ++c2) {
      if (r2 == 1 && c2 == 1) continue;
      m.add("Offdiag1", kSqrt2 * d - std::abs(a(1, r2)) * std::abs(b(1, c2)));
    }
  }
  for (int r1 = 0; r1 < 3; ++r1) {
    for (int c1 = 0; c1 < 3; ++c1) {
      const int t1 = tiling.tile_at({r1, c1});
      if (tiling.tiles()[t1].area() != 2) continue;
      for (int r2 = 0; r2 < 3; ++r2) {
        for (int c2 = 0; c2 < 3; ++c2) {
          const int t2 = tiling.tile_at({r2, c2});
          if (t2 == t1 || tiling.tiles()[t2].area() != 2) continue;
          m.add("Offdiag2", 2.0 * d - std::abs(a(r1, r2)) * std::abs(b(c1, c2)));
        }
      }
    }
  }
  const double hard = (1.0 + kSqrt2) * d;
  m.add("Offdiag3", hard - std::abs(a(0, 0)) * std::abs(b(0, 1)));
  m.add("Offdiag3", hard - std::abs(a(0, 1)) * std::abs(b(2, 2)));
  m.add("Offdiag3", hard - std::abs(a(2, 2)) * std::abs(b(1, 2)));
  m.add("Offdiag3", hard - std::abs(a(1, 2)) * std::abs(b(0, 0)));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        for (int t = 0; t < 3; ++t) {
          if (!off_diagonal(i, j, k, t)) continue;
          m.add("Offdiag", 4.0 * d - std::abs(a(i, j)) * std::abs(b(k, t)));
        }
      }
    }
  }
  m.add("rigidity", 4.0 * d - rigidity_deviation(a, b, 9));
}

void add_dimbox_margins(const Tiling& tiling, int D, const ComplexMatrix& a,
                        const ComplexMatrix& b, double d, Margins& m) {
  const int dA = tiling.dA();
  const int dB = tiling.dB();
  const double n = static_cast<double>(dA) * dB;
  const double c = 2.0 * D;
  for (const Tile& tile : tiling.tiles()) {
    if (tile.rows().size() == 2) {
      const int r1 = tile.rows()[0];
      const int r2 = tile.rows()[1];
      const int col = tile.cols()[0];
      m.add("tile_diag", d - std::abs(re(a, r1) - re(a, r2)));
      m.add("same_tile", (D + 2.0) * d - std::abs(a(r1, r2)) * std::abs(b(col, col)));
    } else if (tile.cols().size() == 2) {
      const int c1 = tile.cols()[0];
      const int c2 = tile.cols()[1];
      const int row = tile.rows()[0];
      m.add("tile_diag", d - std::abs(re(b, c1) - re(b, c2)));
      m.add("same_tile", (D + 2.0) * d - std::abs(a(row, row)) * std::abs(b(c1, c2)));
    }
  }
  for (int i = 0; i < dA; ++i) {
    for (int j = i + 1; j < dA; ++j) m.add("a_diag", D * d - std::abs(re(a, i) - re(a, j)));
  }
  for (int i = 0; i < dB; ++i) {
    for (int j = i + 1; j < dB; ++j) m.add("b_diag", D * d - std::abs(re(b, i) - re(b, j)));
  }
  for (int i = 0; i < dA; ++i) {
    for (int j = 0; j < dB; ++j) {
      for (int k = 0; k < dA; ++k) {
        for (int t = 0; t < dB; ++t) {
          m.add("ab_diag", c * d - std::abs(re(a, i) * re(b, j) - re(a, k) * re(b, t)));
        }
      }
      m.add("DimDiag", c * d - std::abs(re(a, i) * re(b, j) - 1.0 / n));
    }
  }
  for (int r1 = 0; r1 < dA; ++r1) {
    for (int c1 = 0; c1 < dB; ++c1) {
      const int t1 = tiling.tile_at({r1, c1});
      for (int r2 = 0; r2 < dA; ++r2) {
        for (int c2 = 0; c2 < dB; ++c2) {
          const double entry = std::abs(a(r1, r2)) * std::abs(b(c1, c2));
          if (tiling.tile_at({r2, c2}) != t1) m.add("Offdiag12", 2.0 * d - entry);
          if (off_diagonal(r1, r2, c1, c2)) m.add("DimOffdiag", c * d - entry);
        }
      }
    }
  }
  m.add("rigidity", c * d - rigidity_deviation(a, b, static_cast<std::size_t>(n)));
}

struct RotatedParams {
  double sin2;
  double s;
  double r;
  double C;
};

void add_rotated_margins(const RotatedParams& p, const ComplexMatrix& a, const ComplexMatrix& b,
                         double d, Margins& m, Suite& suite) {
  const double na = psd_operator_norm(a);
  const double nb = psd_operator_norm(b);
  const double ds = d / p.sin2;
  const double lin = 1.0 + kSqrt2 * p.s;
  const double dev = rigidity_deviation(a, b, 9);

  for (int j : {0, 2}) {
    m.add("rot_diag", (2.0 / p.sin2) * (d * nb + std::abs(b(j, 1).real())) -
                          std::abs(re(b, 1) - re(b, j)));
    m.add("rot_diag", (2.0 / p.sin2) * (d * na + std::abs(a(j, 1).real())) -
                          std::abs(re(a, 1) - re(a, j)));
  }

  const bool hyp_a = re(a, 1) >= na / p.s;
  const bool hyp_b = re(b, 1) >= nb / p.s;
  if (hyp_a) {
    suite.hit("a11>=|a|/s");
    for (int j : {0, 2}) {
      m.add("bounds_offdiag", kSqrt2 * p.s * d * nb - std::abs(b(j, 1)));
      m.add("bounds_diag", 2.0 * lin * ds * nb - std::abs(re(b, 1) - re(b, j)));
    }
  }
  if (hyp_b) {
    suite.hit("b11>=|b|/s");
    for (int j : {0, 2}) {
      m.add("bounds_offdiag", kSqrt2 * p.s * d * na - std::abs(a(j, 1)));
      m.add("bounds_diag", 2.0 * lin * ds * na - std::abs(re(a, 1) - re(a, j)));
    }
  }
  if (hyp_a && hyp_b) {
    suite.hit("both");
    const double norm_ab = na * nb;
    const double off_c = std::max({kSqrt2, 2.0, kSqrt2 * p.s});
    m.add("max_norm", 8.0 * lin * ds - dev);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        m.add("rot_Diag", 8.0 * lin * ds * norm_ab - std::abs(re(a, i) * re(b, j) - 1.0 / 9.0));
        for (int k = 0; k < 3; ++k) {
          for (int t = 0; t < 3; ++t) {
            if (!off_diagonal(i, j, k, t)) continue;
            m.add("rot_Offdiag", off_c * d * norm_ab - std::abs(a(i, j)) * std::abs(b(k, t)));
          }
        }
      }
    }
  }

  const bool small = ds <= 1.0 / p.r;
  if (small) {
    suite.hit("small_delta");
    m.add("small_delta", std::min(re(a, 1) - na / p.s, re(b, 1) - nb / p.s));
    m.add("dichotomy", 8.0 * lin * ds - dev);
  } else {
    m.add("dichotomy", p.r * ds - dev);
  }
  m.add("rigidity", p.C * ds - dev);
  m.add("rigidity_certified", kRotatedCertifiedC * ds - dev);
}

RotatedParams rotated_params(double theta) {
  if (!(theta > 0.0 && theta <= std::numbers::pi / 4.0 + 1e-15)) {
    throw DomainError("rotated chain: theta must lie in (0, pi/4]");
  }
  const double s_star = appendix_s_star_closed_form();
  return {std::sin(2.0 * theta), s_star, appendix_r(s_star), appendix_C_closed_form()};
}

}  // namespace

double LemmaSuiteResult::hit_rate(const std::string& hypothesis) const {
  const auto it = hypothesis_hits.find(hypothesis);
  if (it == hypothesis_hits.end() || checked() == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(checked());
}

const SubcheckResult* LemmaSuiteResult::subcheck(const std::string& id) const {
  for (const auto& s : subchecks) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

LemmaSuiteResult check_uv_lemma(int m_dim, int n_dim, std::size_t trials, std::uint64_t seed,
                                double tolerance) {
  if (m_dim < 1 || n_dim < 1) throw DomainError("check_uv_lemma: dimensions must be positive");
  Suite suite("uv:" + std::to_string(m_dim) + "x" + std::to_string(n_dim), trials, seed,
              tolerance);
  const double root = std::sqrt(static_cast<double>(m_dim) * n_dim);
  for (std::size_t k = 0; k < trials; ++k) {
    Rng rng(derive_seed(seed, k));
    ComplexMatrix M = rng.uniform() < 0.5
                          ? ginibre(m_dim, n_dim, rng)
                          : ComplexMatrix(ginibre(m_dim, 1, rng) * ginibre(1, n_dim, rng));
    M /= max_abs_entry(M);
    const ComplexMatrix U = haar_unitary(m_dim, rng);
    const ComplexMatrix V = haar_unitary(n_dim, rng);
    Margins m(tolerance);
    m.add("uv", root * max_abs_entry(U.adjoint() * M * V) - 1.0);
    suite.merge(k, m);
  }
  return suite.finish();
}

LemmaSuiteResult check_pair_of_tiles(const ProductBasis& s, std::size_t trials,
                                     std::uint64_t seed, double tolerance) {
  const Tiling tiling = induced_tiling(s);
  const int dA = s.dA();
  const int dB = s.dB();
  Suite suite("pair_of_tiles", trials, seed, tolerance);
  for (std::size_t k = 0; k < trials; ++k) {
    Rng rng(derive_seed(seed, k));
    const ComplexMatrix a = draw_operator(dA, generic_or_near_identity(rng), rng);
    const ComplexMatrix b = draw_operator(dB, generic_or_near_identity(rng), rng);
    const auto d = disturbance_of(s, a, b);
    if (!d) {
      suite.skip();
      continue;
    }
    Margins m(tolerance);
    for (int r1 = 0; r1 < dA; ++r1) {
      for (int c1 = 0; c1 < dB; ++c1) {
        const int t1 = tiling.tile_at({r1, c1});
        for (int r2 = 0; r2 < dA; ++r2) {
          for (int c2 = 0; c2 < dB; ++c2) {
            const int t2 = tiling.tile_at({r2, c2});
            if (t1 == t2) continue;
            const std::size_t x1 = tiling.tiles()[t1].area();
            const std::size_t x2 = tiling.tiles()[t2].area();
            const std::string id =
                "tiles_" + std::to_string(std::min(x1, x2)) + "_" + std::to_string(std::max(x1, x2));
            m.add(id, std::sqrt(static_cast<double>(x1 * x2)) * *d -
                          std::abs(a(r1, r2)) * std::abs(b(c1, c2)));
          }
        }
      }
    }
    suite.merge(k, m);
  }
  return suite.finish();
}

std::optional<std::vector<SubcheckResult>> domino_rigidity_margins(const ComplexMatrix& a,
                                                                   const ComplexMatrix& b) {
  const ComplexMatrix an = normalized(a);
  const ComplexMatrix bn = normalized(b);
  const auto d = disturbance_of(domino(), an, bn);
  if (!d) return std::nullopt;
  Margins m;
  add_domino_margins(an, bn, *d, m);
  return m.take();
}

LemmaSuiteResult check_domino_rigidity(std::size_t trials, std::uint64_t seed,
                                       double tolerance) {
  Suite suite("domino_rigidity", trials, seed, tolerance);
  for (std::size_t k = 0; k < trials; ++k) {
    Rng rng(derive_seed(seed, k));
    const ComplexMatrix a = draw_operator(3, generic_or_near_identity(rng), rng);
    const ComplexMatrix b = draw_operator(3, generic_or_near_identity(rng), rng);
    const auto d = disturbance_of(domino(), a, b);
    if (!d) {
      suite.skip();
      continue;
    }
    Margins m(tolerance);
    add_domino_margins(a, b, *d, m);
    suite.merge(k, m);
  }
  return suite.finish();
}

LemmaSuiteResult check_dimbox_rigidity(const Tiling& t, std::size_t trials, std::uint64_t seed,
                                       double tolerance) {
  if (t.dA() < 3 || t.dB() < 3) {
    throw DomainError("check_dimbox_rigidity: need dA, dB >= 3");
  }
  if (!t.covers_grid()) throw DomainError("check_dimbox_rigidity: tiling does not cover the grid");
  const TilingAnalysis info = analyze(t);
  if (!info.domino_type) throw DomainError("check_dimbox_rigidity: tiling is not domino-type");
  if (!info.irreducible) throw DomainError("check_dimbox_rigidity: tiling is reducible");
  const int D = *info.diameter;
  const ProductBasis s = domino_type_basis(t);
  Suite suite("dimbox_rigidity:D=" + std::to_string(D), trials, seed, tolerance);
  for (std::size_t k = 0; k < trials; ++k) {
    Rng rng(derive_seed(seed, k));
    const ComplexMatrix a = draw_operator(t.dA(), generic_or_near_identity(rng), rng);
    const ComplexMatrix b = draw_operator(t.dB(), generic_or_near_identity(rng), rng);
    const auto d = disturbance_of(s, a, b);
    if (!d) {
      suite.skip();
      continue;
    }
    Margins m(tolerance);
    add_dimbox_margins(t, D, a, b, *d, m);
    suite.merge(k, m);
  }
  return suite.finish();
}

std::optional<std::vector<SubcheckResult>> rotated_chain_margins(double theta,
                                                                 const ComplexMatrix& a,
                                                                 const ComplexMatrix& b) {
  const RotatedParams p = rotated_params(theta);
  const ProductBasis s = rotated_domino_basis(theta, theta, theta, theta);
  const ComplexMatrix an = normalized(a);
  const ComplexMatrix bn = normalized(b);
  const auto d = disturbance_of(s, an, bn);
  if (!d) return std::nullopt;
  Margins m;
  Suite hits("rotated_chain", 1, 0, kLemmaTolRel);
  add_rotated_margins(p, an, bn, *d, m, hits);
  return m.take();
}

LemmaSuiteResult check_rotated_chain(double theta, std::size_t trials, std::uint64_t seed,
                                     double tolerance) {
  const RotatedParams p = rotated_params(theta);
  const ProductBasis s = rotated_domino_basis(theta, theta, theta, theta);
  Suite suite("rotated_chain:theta=" + std::to_string(theta), trials, seed, tolerance);
  for (const char* h : {"a11>=|a|/s", "b11>=|b|/s", "both", "small_delta"}) suite.declare(h);
  for (std::size_t k = 0; k < trials; ++k) {
    Rng rng(derive_seed(seed, k));
    // Half the trials boost both (1,1) entries; the rest split between
    // generic and near-identity draws.
    const Draw kind = rng.uniform() < 0.5 ? Draw::Boosted : generic_or_near_identity(rng);
    const ComplexMatrix a = draw_operator(3, kind, rng);
    const ComplexMatrix b = draw_operator(3, kind, rng);
    const auto d = disturbance_of(s, a, b);
    if (!d) {
      suite.skip();
      continue;
    }
    Margins m(tolerance);
    add_rotated_margins(p, a, b, *d, m, suite);
    suite.merge(k, m);
  }
  return suite.finish();
}

AdversarialResult adversarial_domino_margin(std::size_t restarts, std::size_t max_iterations,
                                            std::uint64_t seed) {
  AdversarialResult out;
  out.seed = seed;
  out.restarts = restarts;
  out.min_margin = kInf;
  const auto unpack = [](const std::vector<double>& x, ComplexMatrix& a, ComplexMatrix& b) {
    ComplexMatrix fa(3, 3), fb(3, 3);
    for (int k = 0; k < 9; ++k) {
      fa(k / 3, k % 3) = Complex(x[2 * k], x[2 * k + 1]);
      fb(k / 3, k % 3) = Complex(x[18 + 2 * k], x[18 + 2 * k + 1]);
    }
    a = fa.adjoint() * fa;
    b = fb.adjoint() * fb;
  };
  const auto objective = [&](const std::vector<double>& x) {
    ComplexMatrix a, b;
    unpack(x, a, b);
    ++out.evaluations;
    const auto items = domino_rigidity_margins(a, b);
    if (!items) return 1.0;
    double worst = kInf;
    std::string id;
    for (const auto& it : *items) {
      if (it.worst_margin < worst) {
        worst = it.worst_margin;
        id = it.id;
      }
    }
    if (worst < out.min_margin) {
      out.min_margin = worst;
      out.worst_subcheck = id;
    }
    return worst;
  };
  for (std::size_t k = 0; k < restarts; ++k) {
    Rng rng(derive_seed(seed, k));
    std::vector<double> x0(36);
    const bool near_identity = k % 2 == 0;
    const double tau = std::pow(10.0, rng.uniform(-3.0, 0.0));
    for (int side = 0; side < 2; ++side) {
      const ComplexMatrix f = near_identity
                                  ? ComplexMatrix(ComplexMatrix::Identity(3, 3) + tau * ginibre(3, 3, rng))
                                  : ginibre(3, 3, rng);
      for (int e = 0; e < 9; ++e) {
        x0[18 * side + 2 * e] = f(e / 3, e % 3).real();
        x0[18 * side + 2 * e + 1] = f(e / 3, e % 3).imag();
      }
    }
    nelder_mead(objective, x0, 0.1, max_iterations, 1e-12);
  }
  if (out.min_margin == kInf) out.min_margin = 0.0;
  return out;
}

KkbCandidate kkb_candidate_from(const ProductBasis& s, const MeasurementPair& m) {
  const ComplexMatrix g = gram_under(s, m);
  const double sum = g.diagonal().real().sum();
  if (!(sum > 0.0)) throw DomainError("kkb_candidate_from: operator has zero weight on the basis");
  return {m.a.scaled(1.0 / sum), m.b, g.diagonal().real().maxCoeff() / sum};
}

KkbReport check_kkb_conditions(const ProductBasis& s, const KkbCandidate& cand) {
  const ComplexMatrix g = gram_under(s, cand.e_a.matrix(), cand.e_b.matrix());
  KkbReport r;
  r.chi = cand.chi;
  r.diag_sum = g.diagonal().real().sum();
  r.diag_max = g.diagonal().real().maxCoeff();
  r.sum_to_one = std::abs(r.diag_sum - 1.0) <= kKkbSumTol;
  r.max_equals_chi = std::abs(r.diag_max - cand.chi) <= kKkbMaxTol;
  const Index n = g.rows();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double x = std::abs(g(i, j));
      if (!r.worst_pair || x > r.worst_cross) {
        r.worst_cross = x;
        r.worst_pair = {static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
      }
    }
  }
  r.worst_cross_sq = r.worst_cross * r.worst_cross;
  r.cross_terms_vanish = r.worst_cross_sq <= kKkbCrossTol;
  const double floor = kDiagFloorRel * cand.e_a.trace() * cand.e_b.trace();
  r.diagonal_positive = (g.diagonal().real().array() > floor).all();
  r.implies_zero_disturbance = r.cross_terms_vanish && r.diagonal_positive;
  return r;
}

}  // namespace nllab
