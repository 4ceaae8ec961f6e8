#include "nllab/loccsim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>
#include <utility>

#include "nllab/errors.hpp"

namespace nllab {
namespace {

// Squared norms of the local factors after the branch operator.
struct LocalWeights {
  std::vector<double> alice;
  std::vector<double> bob;
};

LocalWeights local_weights(const ProductBasis& s, const BranchOperator& bo) {
  const ComplexMatrix xa = bo.alice * s.alice_matrix();
  const ComplexMatrix xb = bo.bob * s.bob_matrix();
  LocalWeights w;
  for (Index k = 0; k < xa.cols(); ++k) {
    w.alice.push_back(xa.col(k).squaredNorm());
    w.bob.push_back(xb.col(k).squaredNorm());
  }
  return w;
}

double total(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum;
}

double max_posterior(const std::vector<double>& reach) {
  const double sum = total(reach);
  return *std::max_element(reach.begin(), reach.end()) / sum;
}

BranchOperator extend(const BranchOperator& bo, Party party, const ComplexMatrix& k) {
  BranchOperator out = bo;
  if (party == Party::Alice) {
    out.alice = k * bo.alice;
  } else {
    out.bob = k * bo.bob;
  }
  return out;
}

ComplexMatrix completeness_gap(const std::vector<ComplexMatrix>& kraus, Index dim) {
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (const auto& k : kraus) sum += k.adjoint() * k;
  return sum - ComplexMatrix::Identity(dim, dim);
}

void validate_node(const ProtocolNode& node, Record& record, int dA, int dB, bool require_labels,
                   ValidationReport& report) {
  auto add = [&](std::string kind, std::string message, double residual = 0.0) {
    report.valid = false;
    report.violations.push_back({record, std::move(kind), std::move(message), residual});
  };
  if (node.is_leaf()) {
    if (!node.children.empty()) add("structure", "leaf without Kraus operators has children");
    if (require_labels && !node.leaf_label) add("label", "leaf has no label");
    if (node.leaf_label && *node.leaf_label < 0) add("label", "negative leaf label");
    return;
  }
  if (node.leaf_label) add("label", "internal node carries a leaf label");
  if (node.party == Party::None) {
    add("structure", "internal node has no acting party");
    return;
  }
  if (node.children.size() != node.kraus.size()) {
    add("structure", std::to_string(node.kraus.size()) + " Kraus operators but " +
                         std::to_string(node.children.size()) + " children");
    return;
  }
  const int dim = node.party == Party::Alice ? dA : dB;
  for (std::size_t i = 0; i < node.kraus.size(); ++i) {
    if (node.kraus[i].cols() != dim) {
      add("dimension", "Kraus operator " + std::to_string(i) + " has " +
                           std::to_string(node.kraus[i].cols()) + " columns, input dimension is " +
                           std::to_string(dim));
      return;
    }
  }
  const double residual = completeness_gap(node.kraus, dim).norm();
  report.worst_residual = std::max(report.worst_residual, residual);
  if (residual > kCompletenessTol) {
    add("completeness", "sum of K^dagger K differs from the identity", residual);
  }
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    const int out = static_cast<int>(node.kraus[i].rows());
    record.push_back(static_cast<int>(i));
    validate_node(node.children[i], record, node.party == Party::Alice ? out : dA,
                  node.party == Party::Bob ? out : dB, require_labels, report);
    record.pop_back();
  }
}

template <class Visit>
void for_each_node(const ProtocolNode& node, Record& record, const BranchOperator& bo,
                   const Visit& visit) {
  if (!visit(node, record, bo)) return;
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    record.push_back(static_cast<int>(i));
    for_each_node(node.children[i], record, extend(bo, node.party, node.kraus[i]), visit);
    record.pop_back();
  }
}

BranchOperator root_operator(const ProtocolTree& p) {
  return {ComplexMatrix::Identity(p.dA(), p.dA()), ComplexMatrix::Identity(p.dB(), p.dB())};
}

void stamp(ProtocolNode& node, Record& record) {
  if (!node.origin) node.origin = record;
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    record.push_back(static_cast<int>(i));
    stamp(node.children[i], record);
    record.pop_back();
  }
}

// Splits the measurement {M_i} at `at` in two steps. Outcomes whose child
// overshoots the threshold go through a dilution
//   F_i = alpha_i I + c M_i^dagger M_i,   sum_i alpha_i = 1 - c,
// tuned per outcome so the intermediate node lands on the threshold, and
// a conditional completion L_{j|i} = sqrt(alpha_i + c delta_ij) M_j F_i^{-1/2}.
// Other outcomes pass straight through with Kraus operator sqrt(c) M_i.
// Every path (i, j) then carries sqrt(lambda_ij) M_j with sum_i lambda_ij = 1,
// so leaf statistics are unchanged.
InterpolationStep split(ProtocolTree& tree, const Record& at, const ProductBasis& s,
                        double threshold, const InterpolationOptions& options) {
  ProtocolNode& node = tree.node(at);
  const BranchOperator bo = branch_operator(tree, at);
  const bool alice = node.party == Party::Alice;
  const Index dim = node.kraus.front().cols();
  const std::size_t k = node.kraus.size();
  const std::size_t n = s.size();

  // Acting-party vectors after the branch, and the other party's weights.
  const ComplexMatrix x = (alice ? bo.alice * s.alice_matrix() : bo.bob * s.bob_matrix());
  const ComplexMatrix y = (alice ? bo.bob * s.bob_matrix() : bo.alice * s.alice_matrix());
  std::vector<double> other(n), base(n);
  for (std::size_t j = 0; j < n; ++j) {
    other[j] = y.col(j).squaredNorm();
    base[j] = x.col(j).squaredNorm();
  }
  std::vector<double> weight(k);
  std::vector<std::vector<double>> after(k, std::vector<double>(n));
  for (std::size_t i = 0; i < k; ++i) {
    weight[i] = node.kraus[i].squaredNorm() / static_cast<double>(dim);
    const ComplexMatrix mx = node.kraus[i] * x;
    for (std::size_t j = 0; j < n; ++j) after[i][j] = mx.col(j).squaredNorm();
  }

  // Posterior maximum behind (1-t) w_i I + t M_i^dagger M_i; reach is linear in t.
  auto pmax_at = [&](std::size_t i, double t) {
    std::vector<double> reach(n);
    for (std::size_t j = 0; j < n; ++j) {
      reach[j] = ((1.0 - t) * weight[i] * base[j] + t * after[i][j]) * other[j];
    }
    return total(reach) > 0.0 ? max_posterior(reach) : 0.0;
  };

  // First grid crossing, then bisection inside that cell.
  auto crossing = [&](std::size_t i) {
    double lo = 0.0, hi = 1.0;
    for (double t = options.grid_step; t < 1.0 + 0.5 * options.grid_step; t += options.grid_step) {
      const double tt = std::min(t, 1.0);
      if (pmax_at(i, tt) >= threshold) {
        hi = tt;
        lo = std::max(0.0, tt - options.grid_step);
        break;
      }
    }
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (pmax_at(i, mid) >= threshold ? hi : lo) = mid;
    }
    return std::abs(pmax_at(i, lo) - threshold) < std::abs(pmax_at(i, hi) - threshold) ? lo : hi;
  };

  InterpolationStep step;
  step.node = at;
  step.outcome_t.assign(k, std::numeric_limits<double>::quiet_NaN());
  // Informativeness ratio r_i = c / alpha_i at the crossing.
  std::vector<double> ratio(k, 0.0);
  double inverse_sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const auto child = reach_probabilities(s, extend(bo, node.party, node.kraus[i]));
    if (weight[i] <= 0.0 || total(child) <= 0.0 ||
        max_posterior(child) <= threshold + kThresholdTol) {
      continue;
    }
    const double t = crossing(i);
    step.outcome_t[i] = t;
    step.p_max = std::max(step.p_max, pmax_at(i, t));
    ratio[i] = t / ((1.0 - t) * weight[i]);
    inverse_sum += 1.0 / ratio[i];
  }
  const double c = 1.0 / (1.0 + inverse_sum);
  step.c = c;

  ProtocolNode replaced;
  replaced.party = node.party;
  replaced.origin = node.origin;
  for (std::size_t i = 0; i < k; ++i) {
    if (ratio[i] == 0.0) {
      replaced.kraus.push_back(std::sqrt(c) * node.kraus[i]);
      replaced.children.push_back(node.children[i]);
      continue;
    }
    const double alpha = c / ratio[i];
    const ComplexMatrix f = alpha * ComplexMatrix::Identity(dim, dim) +
                            c * node.kraus[i].adjoint() * node.kraus[i];
    const ComplexMatrix inv_sqrt = psd_pinv_sqrt(f);
    replaced.kraus.push_back(psd_sqrt(f).matrix());
    ProtocolNode mid;
    mid.party = node.party;
    mid.origin = node.origin;
    for (std::size_t j = 0; j < k; ++j) {
      const double lambda = alpha + (i == j ? c : 0.0);
      mid.kraus.push_back(std::sqrt(lambda) * node.kraus[j] * inv_sqrt);
      mid.children.push_back(node.children[j]);
    }
    replaced.children.push_back(std::move(mid));
  }
  node = std::move(replaced);
  return step;
}

// Closest-to-root node below the threshold with a child above it.
std::optional<Record> find_jump(const ProtocolTree& tree, const ProductBasis& s, double threshold) {
  std::deque<Record> queue{Record{}};
  while (!queue.empty()) {
    Record r = queue.front();
    queue.pop_front();
    const ProtocolNode& node = tree.node(r);
    const BranchOperator bo = branch_operator(tree, r);
    const auto reach = reach_probabilities(s, bo);
    if (total(reach) <= 0.0) continue;
    if (max_posterior(reach) >= threshold - kThresholdTol || node.is_leaf()) continue;
    bool jump = false;
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      const auto child = reach_probabilities(s, extend(bo, node.party, node.kraus[i]));
      if (total(child) > 0.0 && max_posterior(child) > threshold + kThresholdTol) jump = true;
    }
    if (jump) return r;
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      Record c = r;
      c.push_back(static_cast<int>(i));
      queue.push_back(std::move(c));
    }
  }
  return std::nullopt;
}

bool same_matrix(const ComplexMatrix& x, const ComplexMatrix& y) {
  return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
}

}  // namespace

std::string to_string(Party p) {
  switch (p) {
    case Party::Alice: return "alice";
    case Party::Bob: return "bob";
    case Party::None: return "none";
  }
  return "none";
}

std::string to_string(const Record& r) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
  out << ')';
  return out.str();
}

std::string to_string(FrontierKind k) {
  switch (k) {
    case FrontierKind::Exact: return "exact";
    case FrontierKind::Overshoot: return "overshoot";
    case FrontierKind::LeafBelow: return "leaf_below";
  }
  return "leaf_below";
}

ProtocolTree::ProtocolTree(int dA, int dB) : dA_(dA), dB_(dB) {
  if (dA < 1 || dB < 1) throw ContractViolation("ProtocolTree: dimensions must be positive");
}

const ProtocolNode& ProtocolTree::node(const Record& r) const {
  const ProtocolNode* cur = &root_;
  for (int i : r) {
    if (i < 0 || static_cast<std::size_t>(i) >= cur->children.size()) {
      throw ContractViolation("unknown protocol node " + to_string(r));
    }
    cur = &cur->children[i];
  }
  return *cur;
}

ProtocolNode& ProtocolTree::node(const Record& r) {
  return const_cast<ProtocolNode&>(std::as_const(*this).node(r));
}

std::pair<int, int> ProtocolTree::dims_at(const Record& r) const {
  node(r);  // bounds check
  int a = dA_, b = dB_;
  const ProtocolNode* cur = &root_;
  for (int i : r) {
    const int out = static_cast<int>(cur->kraus[i].rows());
    (cur->party == Party::Alice ? a : b) = out;
    cur = &cur->children[i];
  }
  return {a, b};
}

std::vector<Record> ProtocolTree::measure(const Record& r, Party party,
                                          std::vector<ComplexMatrix> kraus) {
  ProtocolNode& n = node(r);
  if (!n.is_leaf()) throw ContractViolation("measure: node " + to_string(r) + " is not a leaf");
  if (party == Party::None) throw ContractViolation("measure: a party must act");
  if (kraus.empty()) throw ContractViolation("measure: no Kraus operators");
  n.party = party;
  n.kraus = std::move(kraus);
  n.leaf_label.reset();
  n.children.assign(n.kraus.size(), ProtocolNode{});
  std::vector<Record> out;
  for (std::size_t i = 0; i < n.kraus.size(); ++i) {
    Record c = r;
    c.push_back(static_cast<int>(i));
    out.push_back(std::move(c));
  }
  return out;
}

void ProtocolTree::set_label(const Record& r, int label) {
  ProtocolNode& n = node(r);
  if (!n.is_leaf()) throw ContractViolation("set_label: node " + to_string(r) + " is not a leaf");
  n.leaf_label = label;
}

std::vector<Record> ProtocolTree::records() const {
  std::vector<Record> out;
  Record r;
  for_each_node(root_, r, root_operator(*this), [&](const ProtocolNode&, const Record& rec,
                                                   const BranchOperator&) {
    out.push_back(rec);
    return true;
  });
  return out;
}

std::vector<Record> ProtocolTree::leaves() const {
  std::vector<Record> out;
  for (const Record& r : records()) {
    if (node(r).is_leaf()) out.push_back(r);
  }
  return out;
}

void ProtocolTree::stamp_origins() {
  Record r;
  stamp(root_, r);
}

bool operator==(const ProtocolNode& x, const ProtocolNode& y) {
  if (x.party != y.party || x.leaf_label != y.leaf_label || x.origin != y.origin ||
      x.kraus.size() != y.kraus.size() || x.children != y.children) {
    return false;
  }
  for (std::size_t i = 0; i < x.kraus.size(); ++i) {
    if (!same_matrix(x.kraus[i], y.kraus[i])) return false;
  }
  return true;
}

bool operator==(const ProtocolTree& x, const ProtocolTree& y) {
  return x.dA_ == y.dA_ && x.dB_ == y.dB_ && x.root_ == y.root_;
}

ValidationReport validate(const ProtocolTree& p, bool require_labels) {
  ValidationReport report;
  Record r;
  validate_node(p.root(), r, p.dA(), p.dB(), require_labels, report);
  return report;
}

BranchOperator branch_operator(const ProtocolTree& p, const Record& r) {
  BranchOperator bo = root_operator(p);
  const ProtocolNode* cur = &p.root();
  for (int i : r) {
    if (i < 0 || static_cast<std::size_t>(i) >= cur->children.size()) {
      throw ContractViolation("unknown protocol node " + to_string(r));
    }
    const ComplexMatrix& k = cur->kraus[i];
    const ComplexMatrix& prev = cur->party == Party::Alice ? bo.alice : bo.bob;
    if (k.cols() != prev.rows()) {
      throw ContractViolation("branch_operator: inner dimensions do not match at " + to_string(r));
    }
    bo = extend(bo, cur->party, k);
    cur = &cur->children[i];
  }
  return bo;
}

std::vector<double> reach_probabilities(const ProductBasis& s, const BranchOperator& bo) {
  if (bo.alice.cols() != s.dA() || bo.bob.cols() != s.dB()) {
    throw ContractViolation("branch operator does not act on the basis dimensions");
  }
  const LocalWeights w = local_weights(s, bo);
  std::vector<double> out(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) out[k] = w.alice[k] * w.bob[k];
  return out;
}

std::vector<double> posterior(const ProductBasis& s, const BranchOperator& bo) {
  std::vector<double> p = reach_probabilities(s, bo);
  const double sum = total(p);
  if (!(sum > 0.0)) throw UndefinedQuantity("posterior: record has zero probability");
  for (double& x : p) x /= sum;
  return p;
}

StageOneFrontier stage_one_frontier(const ProtocolTree& p, const ProductBasis& s, double eps) {
  StageOneFrontier out;
  out.threshold = 1.0 / static_cast<double>(s.size()) + eps;
  Record r;
  for_each_node(p.root(), r, root_operator(p),
                [&](const ProtocolNode& node, const Record& rec, const BranchOperator& bo) {
                  const auto reach = reach_probabilities(s, bo);
                  if (total(reach) <= 0.0) {
                    out.unreachable.push_back(rec);
                    return false;
                  }
                  const double pmax = max_posterior(reach);
                  if (pmax >= out.threshold - kThresholdTol) {
                    const bool exact = std::abs(pmax - out.threshold) <= kThresholdTol;
                    out.nodes.push_back(
                        {rec, pmax, exact ? FrontierKind::Exact : FrontierKind::Overshoot});
                    return false;
                  }
                  if (node.is_leaf()) {
                    out.nodes.push_back({rec, pmax, FrontierKind::LeafBelow});
                    return false;
                  }
                  return true;
                });
  return out;
}

InterpolationResult interpolate(const ProtocolTree& p, const ProductBasis& s, double eps,
                                const InterpolationOptions& options) {
  const double nd = static_cast<double>(s.size());
  if (!(eps > 0.0 && eps < 1.0 / (nd * (nd - 1.0)))) {
    throw DomainError("interpolate: eps must lie in (0, 1/(n(n-1)))");
  }
  const ValidationReport report = validate(p);
  if (!report.valid) {
    throw ContractViolation("interpolate: invalid protocol (" + report.violations.front().kind +
                            " at " + to_string(report.violations.front().node) + ")");
  }
  const double threshold = 1.0 / nd + eps;
  InterpolationResult out{p, {}};
  out.tree.stamp_origins();
  while (const auto at = find_jump(out.tree, s, threshold)) {
    if (out.steps.size() >= options.max_splits) {
      std::vector<std::string> trace;
      for (const auto& step : out.steps) {
        std::ostringstream line;
        line.precision(12);
        line << "split " << to_string(step.node) << " c=" << step.c << " p_max=" << step.p_max;
        trace.push_back(line.str());
      }
      throw ConvergenceError("interpolate: no convergence after " +
                                 std::to_string(options.max_splits) + " splits",
                             std::move(trace));
    }
    out.steps.push_back(split(out.tree, *at, s, threshold, options));
  }
  return out;
}

std::map<Record, double> leaf_distribution(const ProtocolTree& p, const ProductBasis& s,
                                           std::size_t k) {
  if (k >= s.size()) throw ContractViolation("leaf_distribution: state index out of range");
  std::map<Record, double> out;
  Record r;
  for_each_node(p.root(), r, root_operator(p),
                [&](const ProtocolNode& node, const Record& rec, const BranchOperator& bo) {
                  if (!node.is_leaf()) return true;
                  out[node.origin.value_or(rec)] += reach_probabilities(s, bo)[k];
                  return false;
                });
  return out;
}

double total_variation(const std::map<Record, double>& x, const std::map<Record, double>& y) {
  std::map<Record, double> diff = x;
  for (const auto& [r, p] : y) diff[r] -= p;
  double tv = 0.0;
  for (const auto& [r, d] : diff) tv += std::abs(d);
  return tv / 2.0;
}

std::vector<double> leaf_distribution_tv(const ProtocolTree& x, const ProtocolTree& y,
                                         const ProductBasis& s) {
  std::vector<double> out;
  for (std::size_t k = 0; k < s.size(); ++k) {
    out.push_back(total_variation(leaf_distribution(x, s, k), leaf_distribution(y, s, k)));
  }
  return out;
}

double evaluate_error(const ProtocolTree& p, const ProductBasis& s, const Decision& decision) {
  double success = 0.0;
  Record r;
  for_each_node(p.root(), r, root_operator(p),
                [&](const ProtocolNode& node, const Record& rec, const BranchOperator& bo) {
                  if (!node.is_leaf()) return true;
                  const auto reach = reach_probabilities(s, bo);
                  std::size_t label = 0;
                  if (std::holds_alternative<MapDecision>(decision)) {
                    label = static_cast<std::size_t>(
                        std::max_element(reach.begin(), reach.end()) - reach.begin());
                  } else if (std::holds_alternative<TreeLabels>(decision)) {
                    if (!node.leaf_label) {
                      throw ContractViolation("evaluate_error: leaf " + to_string(rec) +
                                              " has no label");
                    }
                    label = static_cast<std::size_t>(*node.leaf_label);
                  } else {
                    const auto& labels = std::get<ExplicitLabels>(decision);
                    const auto it = labels.find(rec);
                    if (it == labels.end()) {
                      throw ContractViolation("evaluate_error: no label for leaf " +
                                              to_string(rec));
                    }
                    label = static_cast<std::size_t>(it->second);
                  }
                  if (label >= s.size()) {
                    throw ContractViolation("evaluate_error: label out of range at " +
                                            to_string(rec));
                  }
                  success += reach[label];
                  return false;
                });
  return 1.0 - success / static_cast<double>(s.size());
}

void label_by_map(ProtocolTree& p, const ProductBasis& s) {
  for (const Record& r : p.leaves()) {
    const auto reach = reach_probabilities(s, branch_operator(p, r));
    p.set_label(r, static_cast<int>(std::max_element(reach.begin(), reach.end()) - reach.begin()));
  }
}

std::vector<ComplexMatrix> standard_measurement(int dim) {
  std::vector<ComplexMatrix> out;
  for (int i = 0; i < dim; ++i) {
    ComplexMatrix k = ComplexMatrix::Zero(dim, dim);
    k(i, i) = 1.0;
    out.push_back(std::move(k));
  }
  return out;
}

std::vector<ComplexMatrix> random_measurement(int dim, int outcomes, Rng& rng) {
  if (dim < 1 || outcomes < 1) throw DomainError("random_measurement: need dim, outcomes >= 1");
  const ComplexMatrix v = haar_unitary(static_cast<Index>(dim) * outcomes, rng).leftCols(dim);
  std::vector<ComplexMatrix> out;
  for (int i = 0; i < outcomes; ++i) out.push_back(v.middleRows(static_cast<Index>(i) * dim, dim));
  return out;
}

ProtocolTree one_round_protocol(int dA, int dB) {
  ProtocolTree p(dA, dB);
  p.measure({}, Party::Alice, standard_measurement(dA));
  return p;
}

ProtocolTree baseline_protocol(const ProductBasis& s) {
  ProtocolTree p(s.dA(), s.dB());
  for (const Record& r : p.measure({}, Party::Alice, standard_measurement(s.dA()))) {
    p.measure(r, Party::Bob, standard_measurement(s.dB()));
  }
  label_by_map(p, s);
  return p;
}

ProtocolTree random_protocol(int dA, int dB, const std::vector<int>& shape, std::uint64_t seed) {
  ProtocolTree p(dA, dB);
  Rng rng(seed);
  std::vector<Record> layer{Record{}};
  for (std::size_t l = 0; l < shape.size(); ++l) {
    const Party party = l % 2 == 0 ? Party::Alice : Party::Bob;
    std::vector<Record> next;
    for (const Record& r : layer) {
      const auto [a, b] = p.dims_at(r);
      for (Record& c : p.measure(r, party, random_measurement(party == Party::Alice ? a : b,
                                                               shape[l], rng))) {
        next.push_back(std::move(c));
      }
    }
    layer = std::move(next);
  }
  return p;
}

}  // namespace nllab
