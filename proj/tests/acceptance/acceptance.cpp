// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
// Tolerances and runtime limits are pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "nllab/bases.hpp"
#include "nllab/bounds.hpp"
#include "nllab/estimator.hpp"
#include "nllab/loccsim.hpp"
#include "nllab/tiling.hpp"
#include "nllab/verify.hpp"

using namespace nllab;

namespace {

constexpr std::uint64_t kSeed = 20240601;

// 1
constexpr double kDominoP = 1.96014e-8;
constexpr double kDominoPTol = 1e-12;
constexpr double kRotatedPLo = 2.40e-11, kRotatedPHi = 2.42e-11;
constexpr double kRotatedCLo = 113.50, kRotatedCHi = 114.00;
constexpr double kDominoTypeRelTol = 1e-18;
constexpr double kTable1Seconds = 1.0;
// 2
constexpr double kAppendixTol = 1e-6;
constexpr double kAppendixSeconds = 1.0;
// 3
constexpr std::size_t kSuiteTrials = 10000;
constexpr double kSuiteSeconds = 300.0;
// 4
constexpr std::size_t kEtaBudget = 100000;
constexpr double kEtaLower = 0.125;
constexpr double kEtaTol = 1e-9;
constexpr double kEtaUpper = 1.125 + 0.01;
constexpr std::size_t kAdversarialRestarts = 20;
constexpr std::size_t kAdversarialIterations = 2000;
constexpr double kEtaSeconds = 600.0;
// 5
constexpr double kEpsGridStep = 1e-6;
// 6
constexpr double kBaselineTol = 1e-12;
constexpr double kThresholdTol = 1e-9;
constexpr double kLeafTvTol = 1e-9;
// 7
constexpr int kHelstromGrid = 1000;  // 1000 x 1000 points
// 8
constexpr double kKkbWorstCrossMin = 1e-6;
constexpr double kKkbDominoEps = 1e-4;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void criterion_table1() {
  const auto t0 = Clock::now();
  const BoundReport d = domino_constants();
  const BoundReport r = rotated_constants(std::numbers::pi / 4);
  const BoundReport t = domino_type_constants(2, 4, 4);
  const double secs = seconds_since(t0);

  const double expected_t = 1.0 / (216.0 * 4.0 * std::pow(16.0, 5));
  const double C = r.C_exact.value_or(NAN);
  const bool ok = d.c == 4.0 && d.eta_lower == 0.125 &&
                  std::abs(d.p_error_lower - kDominoP) <= kDominoPTol &&
                  r.p_error_lower >= kRotatedPLo && r.p_error_lower <= kRotatedPHi &&
                  C >= kRotatedCLo && C <= kRotatedCHi &&
                  std::abs(t.p_error_lower - expected_t) <= kDominoTypeRelTol * expected_t &&
                  secs < kTable1Seconds;
  report(1, ok,
         fmt("domino c=%g eta=%g p=%.6e; rotated p=%.5e C=%.4f; D=2 4x4 p=%.6e (expected %.6e); %.3fs",
             d.c, d.eta_lower, d.p_error_lower, r.p_error_lower, C, t.p_error_lower, expected_t,
             secs));
}

void criterion_appendix() {
  const auto t0 = Clock::now();
  const ConstantMin m = appendix_constant_min();
  const double secs = seconds_since(t0);
  const double s_star = 3.0 + std::sqrt(9.0 + 3.0 / std::numbers::sqrt2);
  const double c_closed = appendix_C_closed_form();
  const bool ok = std::abs(m.s_star - s_star) <= kAppendixTol &&
                  std::abs(m.C - c_closed) <= kAppendixTol && std::abs(m.s_star - 6.33) < 0.005 &&
                  secs < kAppendixSeconds;
  report(2, ok, fmt("s*=%.9f (closed %.9f) C=%.9f (closed %.9f); %.3fs", m.s_star, s_star, m.C,
                    c_closed, secs));
}

void criterion_suites() {
  const auto t0 = Clock::now();
  std::vector<LemmaSuiteResult> runs;
  for (int m = 1; m <= 4; ++m) {
    for (int n = 1; n <= 4; ++n) runs.push_back(check_uv_lemma(m, n, kSuiteTrials, kSeed));
  }
  runs.push_back(check_pair_of_tiles(domino_basis(), kSuiteTrials, kSeed));
  runs.push_back(check_domino_rigidity(kSuiteTrials, kSeed));
  runs.push_back(check_dimbox_rigidity(parse_tiling("a a b c\nd e b d\nf e g g\nf h h c\n"),
                                       kSuiteTrials, kSeed));
  for (double th : {std::numbers::pi / 4, std::numbers::pi / 8, std::numbers::pi / 12}) {
    runs.push_back(check_rotated_chain(th, kSuiteTrials, kSeed));
  }
  const double secs = seconds_since(t0);
  std::size_t violations = 0, trials = 0, skipped = 0;
  double worst = INFINITY;
  std::string worst_id;
  for (const auto& r : runs) {
    violations += r.violations;
    trials += r.trials;
    skipped += r.skipped;
    if (r.worst_margin < worst) {
      worst = r.worst_margin;
      worst_id = r.lemma_id;
    }
  }
  const bool ok = violations == 0 && secs < kSuiteSeconds;
  report(3, ok,
         fmt("%zu suites, %zu trials (%zu skipped), %zu violations, worst margin %.3e in %s; %.1fs",
             runs.size(), trials, skipped, violations, worst, worst_id.c_str(), secs));
}

void criterion_eta() {
  const auto t0 = Clock::now();
  EstimatorOptions opt;
  opt.budget = kEtaBudget;
  opt.seed = kSeed;
  opt.basis_id = "domino";
  const EtaEstimate e = estimate_eta(domino_basis(), opt);
  const AdversarialResult adv =
      adversarial_domino_margin(kAdversarialRestarts, kAdversarialIterations, kSeed);
  const double secs = seconds_since(t0);
  const bool ok = e.best_ratio >= kEtaLower - kEtaTol && e.best_ratio <= kEtaUpper &&
                  e.min_observed_ratio >= kEtaLower - kEtaTol && adv.min_margin >= -kEtaTol &&
                  secs < kEtaSeconds;
  report(4, ok,
         fmt("best ratio %.9f, min observed %.9f over %zu evaluations; adversarial min margin "
             "%.3e (%s); %.1fs",
             e.best_ratio, e.min_observed_ratio, e.evaluations, adv.min_margin,
             adv.worst_subcheck.c_str(), secs));
}

void criterion_optimal_eps() {
  bool ok = true;
  std::string detail;
  for (std::size_t n : {2u, 3u, 9u, 16u}) {
    const double eta = 0.125;
    const double hi = 1.0 / (static_cast<double>(n) * (n - 1));
    double best_eps = 0.0, best_f = -INFINITY;
    for (std::size_t k = 1;; ++k) {
      const double eps = k * kEpsGridStep;
      if (eps >= hi) break;
      const double f = stopping_objective(eps, eta, n);
      if (f > best_f) {
        best_f = f;
        best_eps = eps;
      }
    }
    const double expected = (2.0 / 3.0) / (static_cast<double>(n) * (n - 1));
    const bool hit = std::abs(best_eps - expected) <= kEpsGridStep &&
                     std::abs(perror_from_eta(eta, n).optimal_eps - expected) <= 1e-15;
    ok = ok && hit;
    detail += fmt("n=%zu argmax %.6f vs %.8f; ", n, best_eps, expected);
  }
  report(5, ok, detail);
}

void criterion_simulator() {
  const ProductBasis s = domino_basis();
  const double p_base = evaluate_error(baseline_protocol(s), s, TreeLabels{});
  const double eps = 1.0 / 108.0;
  const ProtocolTree p = one_round_protocol(3, 3);
  const InterpolationResult ir = interpolate(p, s, eps);
  const StageOneFrontier f = stage_one_frontier(ir.tree, s, eps);
  bool all_exact = !f.nodes.empty();
  double gap = 0.0;
  for (const auto& node : f.nodes) {
    all_exact = all_exact && node.kind == FrontierKind::Exact;
    gap = std::max(gap, std::abs(node.p_max - (1.0 / 9.0 + eps)));
  }
  const auto tv = leaf_distribution_tv(p, ir.tree, s);
  const double max_tv = *std::max_element(tv.begin(), tv.end());
  const bool ok = std::abs(p_base - 4.0 / 9.0) <= kBaselineTol && all_exact && gap <= kThresholdTol &&
                  tv.size() == 9 && max_tv <= kLeafTvTol;
  report(6, ok,
         fmt("baseline p_error %.15f; %zu frontier nodes, all at threshold: %s, gap %.3e; "
             "max leaf TV %.3e",
             p_base, f.nodes.size(), all_exact ? "yes" : "no", gap, max_tv));
}

void criterion_helstrom() {
  std::size_t violations = 0, points = 0;
  for (int i = 0; i < kHelstromGrid; ++i) {
    const double q0 = static_cast<double>(i) / (kHelstromGrid - 1);
    for (int j = 0; j < kHelstromGrid; ++j) {
      const double delta = static_cast<double>(j) / (kHelstromGrid - 1);
      const HelstromError h = helstrom_error(q0, 1.0 - q0, delta);
      ++points;
      if (h.exact < h.relaxation) ++violations;
    }
  }
  report(7, violations == 0, fmt("%zu points, %zu violations", points, violations));
}

void criterion_kkb() {
  const ProductBasis std3 = standard_basis(3, 3);
  const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
  ComplexMatrix corner = ComplexMatrix::Zero(3, 3);
  corner(0, 0) = 1.0;
  const KkbReport uniform =
      check_kkb_conditions(std3, {PsdOperator(id / 9.0), PsdOperator(id), 1.0 / 9.0});
  const KkbReport proj =
      check_kkb_conditions(std3, kkb_candidate_from(std3, {PsdOperator(corner), PsdOperator(corner)}));
  const ProductBasis dom = domino_basis();
  const KkbReport d =
      check_kkb_conditions(dom, kkb_candidate_from(dom, upper_bound_construction(dom, 0, kKkbDominoEps)));
  const bool ok = uniform.all_hold() && proj.all_hold() && !d.cross_terms_vanish &&
                  d.worst_cross > kKkbWorstCrossMin;
  report(8, ok,
         fmt("standard I/9 x I: %s; standard corner projector: %s; domino eps=%g: condition 3 "
             "%s, worst cross %.3e",
             uniform.all_hold() ? "holds" : "fails", proj.all_hold() ? "holds" : "fails",
             kKkbDominoEps, d.cross_terms_vanish ? "holds" : "fails", d.worst_cross));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria = {
      criterion_table1,   criterion_appendix, criterion_suites, criterion_eta,
      criterion_optimal_eps, criterion_simulator, criterion_helstrom, criterion_kkb};
  for (const auto& c : criteria) {
    try {
      c();
    } catch (const std::exception& e) {
      report(static_cast<int>(&c - criteria.data()) + 1, false, std::string("exception: ") + e.what());
    }
  }
  return failures == 0 ? 0 : 1;
}
