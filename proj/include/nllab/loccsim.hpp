#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nllab/bases.hpp"
#include "nllab/matkernel.hpp"

namespace nllab {

enum class Party { None, Alice, Bob };
std::string to_string(Party p);

/// Outcome indices from the root; the root's record is empty.
using Record = std::vector<int>;
std::string to_string(const Record& r);

/// Completeness residual allowed at every internal node (Frobenius).
inline constexpr double kCompletenessTol = 1e-10;
/// Posterior maxima within this of 1/n + eps count as hitting the threshold.
inline constexpr double kThresholdTol = 1e-9;

struct ProtocolNode {
  Party party = Party::None;
  /// Non-destructive measurement applied by `party`; empty at leaves.
  std::vector<ComplexMatrix> kraus;
  /// children[i] follows outcome i.
  std::vector<ProtocolNode> children;
  std::optional<int> leaf_label;
  /// Record of the node this one was derived from; nodes inserted by
  /// interpolation carry the record of the node they were split from.
  std::optional<Record> origin;

  bool is_leaf() const { return kraus.empty(); }
};

/// A finite LOCC protocol on C^dA ⊗ C^dB. Kraus operators may be
/// rectangular, which changes the acting party's dimension below the node.
class ProtocolTree {
 public:
  ProtocolTree(int dA, int dB);

  int dA() const { return dA_; }
  int dB() const { return dB_; }
  const ProtocolNode& root() const { return root_; }
  ProtocolNode& root() { return root_; }

  /// Throws ContractViolation for an unknown record.
  const ProtocolNode& node(const Record& r) const;
  ProtocolNode& node(const Record& r);

  /// Local dimensions of the state entering node r.
  std::pair<int, int> dims_at(const Record& r) const;

  /// Turns leaf r into a measurement by `party` and returns the records of
  /// the new leaf children.
  std::vector<Record> measure(const Record& r, Party party, std::vector<ComplexMatrix> kraus);
  void set_label(const Record& r, int label);

  /// Records of all nodes (pre-order) and of all leaves.
  std::vector<Record> records() const;
  std::vector<Record> leaves() const;
  std::size_t size() const { return records().size(); }

  /// Sets origin = own record on every node that has none.
  void stamp_origins();

  friend bool operator==(const ProtocolTree& x, const ProtocolTree& y);

 private:
  int dA_;
  int dB_;
  ProtocolNode root_;
};

bool operator==(const ProtocolNode& x, const ProtocolNode& y);

struct Violation {
  Record node;
  std::string kind;  // "completeness", "dimension", "structure", "label"
  std::string message;
  double residual = 0.0;
};

struct ValidationReport {
  bool valid = true;
  double worst_residual = 0.0;
  std::vector<Violation> violations;
};

/// Structural and completeness checks. Never throws on a malformed tree.
/// Unlabeled leaves are violations only when `require_labels` is set.
ValidationReport validate(const ProtocolTree& p, bool require_labels = false);

/// Ordered products of each party's Kraus operators along the path.
struct BranchOperator {
  ComplexMatrix alice;
  ComplexMatrix bob;
};

BranchOperator branch_operator(const ProtocolTree& p, const Record& node);

/// Probability of reaching the node from each input state.
std::vector<double> reach_probabilities(const ProductBasis& s, const BranchOperator& bo);

/// Bayes posterior over the n states. Throws UndefinedQuantity for a
/// zero-probability record.
std::vector<double> posterior(const ProductBasis& s, const BranchOperator& bo);

enum class FrontierKind { Exact, Overshoot, LeafBelow };
std::string to_string(FrontierKind k);

struct FrontierNode {
  Record node;
  double p_max = 0.0;
  FrontierKind kind = FrontierKind::LeafBelow;
};

struct StageOneFrontier {
  double threshold = 0.0;  // 1/n + eps
  std::vector<FrontierNode> nodes;
  /// Branches cut off because they have zero probability for every state.
  std::vector<Record> unreachable;
};

/// Earliest node on every branch with p_max >= 1/n + eps, or its leaf.
StageOneFrontier stage_one_frontier(const ProtocolTree& p, const ProductBasis& s, double eps);

struct InterpolationOptions {
  std::size_t max_splits = 64;
  double grid_step = 1e-3;
};

struct InterpolationStep {
  Record node;
  /// Weight c of the original measurement inside the first step.
  double c = 0.0;
  /// Crossing point t_i of (1-t) w_i I + t M_i^dagger M_i for outcomes that
  /// overshot the threshold; NaN for outcomes passed straight through.
  std::vector<double> outcome_t;
  double p_max = 0.0;  // largest intermediate posterior maximum
};

struct InterpolationResult {
  ProtocolTree tree;
  std::vector<InterpolationStep> steps;
};

/// Splits measurements until every branch reaches the threshold exactly
/// or ends below it. Each split handles one node closest to the root whose
/// posterior maximum is below the threshold while a child's is above. Leaf outcome statistics are unchanged. Throws
/// ConvergenceError (with the steps taken) when max_splits is exceeded.
InterpolationResult interpolate(const ProtocolTree& p, const ProductBasis& s, double eps,
                                const InterpolationOptions& options = {});

/// Probability of each original leaf (keyed by origin record) given input
/// state k.
std::map<Record, double> leaf_distribution(const ProtocolTree& p, const ProductBasis& s,
                                           std::size_t k);

/// Half the L1 distance between two leaf distributions.
double total_variation(const std::map<Record, double>& x, const std::map<Record, double>& y);

/// Per input state, total variation between the leaf distributions of two
/// trees (leaves matched by origin).
std::vector<double> leaf_distribution_tv(const ProtocolTree& x, const ProtocolTree& y,
                                         const ProductBasis& s);

struct MapDecision {};
using ExplicitLabels = std::map<Record, int>;
/// TreeLabels uses each leaf's leaf_label.
struct TreeLabels {};
using Decision = std::variant<TreeLabels, MapDecision, ExplicitLabels>;

/// 1 - (1/n) sum_k sum_{leaves labeled k} <psi_k|A^dagger A ⊗ B^dagger B|psi_k>.
/// MAP labels by largest posterior, lowest index on ties.
double evaluate_error(const ProtocolTree& p, const ProductBasis& s, const Decision& decision);

/// Sets every leaf label to its MAP guess.
void label_by_map(ProtocolTree& p, const ProductBasis& s);

/// Complete projective measurement in the computational basis.
std::vector<ComplexMatrix> standard_measurement(int dim);

/// k-outcome measurement on C^dim from a Haar isometry C^dim -> C^(k dim).
std::vector<ComplexMatrix> random_measurement(int dim, int outcomes, Rng& rng);

/// Alice measures in the standard basis; leaves follow.
ProtocolTree one_round_protocol(int dA, int dB);

/// Alice then Bob measure in the standard basis; leaves labeled by MAP.
ProtocolTree baseline_protocol(const ProductBasis& s);

/// Parties alternate starting with Alice; layer l has shape[l] outcomes.
ProtocolTree random_protocol(int dA, int dB, const std::vector<int>& shape, std::uint64_t seed);

}  // namespace nllab
