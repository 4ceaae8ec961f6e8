#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nllab/bases.hpp"
#include "nllab/matkernel.hpp"
#include "nllab/measures.hpp"
#include "nllab/tiling.hpp"

namespace nllab {

/// Default violation threshold: margins below -kLemmaTolRel times the trial
/// scale. Every suite takes an override.
inline constexpr double kLemmaTolRel = 1e-9;

/// One inequality family inside a suite. Margins are RHS - LHS in units of
/// the trial scale (tr(a ⊗ b) = 1 after normalization).
struct SubcheckResult {
  std::string id;
  std::size_t evaluated = 0;   // inequality instances checked
  std::size_t violations = 0;  // instances below -tol
  double worst_margin = 0.0;
};

struct LemmaSuiteResult {
  std::string lemma_id;
  std::size_t trials = 0;
  std::size_t violations = 0;  // trials with some margin below -tol
  double worst_margin = 0.0;   // min over checked trials
  std::optional<std::size_t> worst_trial;
  std::uint64_t seed = 0;
  std::string generator;
  double tolerance = 0.0;
  /// Trials outside the standing assumption (some G_ii at or below the
  /// diagonal floor); they are not counted as passed.
  std::size_t skipped = 0;
  std::vector<SubcheckResult> subchecks;
  /// Conditional hypotheses: how many trials satisfied each one.
  std::map<std::string, std::size_t> hypothesis_hits;

  std::size_t checked() const { return trials - skipped; }
  double hit_rate(const std::string& hypothesis) const;
  const SubcheckResult* subcheck(const std::string& id) const;
};

/// sqrt(m n) max |<phi_i|M|psi_j>| >= max |M_kl| for Haar U, V and random M.
LemmaSuiteResult check_uv_lemma(int m_dim, int n_dim, std::size_t trials, std::uint64_t seed,
    double tolerance = kLemmaTolRel);

/// sqrt(|T1||T2|) delta tr(a ⊗ b) >= |a_r1r2| |b_c1c2| for every pair of
/// cells in distinct tiles of the tiling induced by s.
LemmaSuiteResult check_pair_of_tiles(const ProductBasis& s, std::size_t trials,
                                     std::uint64_t seed,
    double tolerance = kLemmaTolRel);

/// Rigidity of the domino basis at c = 4 with every intermediate bound of
/// the proof as its own subcheck.
LemmaSuiteResult check_domino_rigidity(std::size_t trials, std::uint64_t seed,
    double tolerance = kLemmaTolRel);

/// Margins of every domino-rigidity inequality for one normalized pair, or
/// nullopt outside the standing assumption.
std::optional<std::vector<SubcheckResult>> domino_rigidity_margins(const ComplexMatrix& a,
                                                                   const ComplexMatrix& b);

/// Rigidity at c = 2D on domino_type_basis(t). Throws DomainError unless t
/// is an irreducible domino-type tiling with dA, dB >= 3.
LemmaSuiteResult check_dimbox_rigidity(const Tiling& t, std::size_t trials, std::uint64_t seed,
    double tolerance = kLemmaTolRel);

/// The chain of bounds for S_3(theta, theta, theta, theta) at s = s*:
/// unconditional diagonal bound, conditional bounds on trials meeting
/// their hypotheses, the small/big delta dichotomy and the final rigidity
/// at c = C / sin 2theta. Throws DomainError for theta outside (0, pi/4].
LemmaSuiteResult check_rotated_chain(double theta, std::size_t trials, std::uint64_t seed,
    double tolerance = kLemmaTolRel);

/// Margins of the rotated chain for one pair (normalized internally), or
/// nullopt outside the standing assumption.
std::optional<std::vector<SubcheckResult>> rotated_chain_margins(double theta,
                                                                 const ComplexMatrix& a,
                                                                 const ComplexMatrix& b);

struct AdversarialResult {
  double min_margin = 0.0;
  std::string worst_subcheck;
  std::size_t restarts = 0;
  std::size_t evaluations = 0;
  std::uint64_t seed = 0;
};

/// Nelder-Mead over the factors of a and b, minimizing the smallest
/// domino-rigidity margin.
AdversarialResult adversarial_domino_margin(std::size_t restarts, std::size_t max_iterations,
                                            std::uint64_t seed);

inline constexpr double kKkbSumTol = 1e-9;
inline constexpr double kKkbMaxTol = 1e-9;
inline constexpr double kKkbCrossTol = 1e-12;

/// A product operator E = e_a ⊗ e_b and the claimed posterior maximum chi.
struct KkbCandidate {
  PsdOperator e_a;
  PsdOperator e_b;
  double chi = 0.0;
};

/// Scales a pair so that sum_i <psi_i|E|psi_i> = 1 and takes chi as the
/// largest diagonal entry.
KkbCandidate kkb_candidate_from(const ProductBasis& s, const MeasurementPair& m);

struct KkbReport {
  double diag_sum = 0.0;
  double diag_max = 0.0;
  double chi = 0.0;
  bool sum_to_one = false;       // condition 1
  bool max_equals_chi = false;   // condition 2
  bool cross_terms_vanish = false;  // condition 3
  double worst_cross = 0.0;      // max_{i != j} |<psi_i|E|psi_j>|
  double worst_cross_sq = 0.0;
  std::optional<std::pair<std::size_t, std::size_t>> worst_pair;
  bool diagonal_positive = false;
  /// Condition 3 together with positive diagonals forces delta(E) = 0.
  bool implies_zero_disturbance = false;

  bool all_hold() const { return sum_to_one && max_equals_chi && cross_terms_vanish; }
};

KkbReport check_kkb_conditions(const ProductBasis& s, const KkbCandidate& cand);

}  // namespace nllab
