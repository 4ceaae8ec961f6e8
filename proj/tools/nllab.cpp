// Command-line front end. Every command prints one JSON document (or CSV /
// pretty text) holding the resolved configuration and the result.
// Exit codes: 0 success, 1 violation found, 2 input error.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "nllab/bases.hpp"
#include "nllab/bounds.hpp"
#include "nllab/errors.hpp"
#include "nllab/estimator.hpp"
#include "nllab/io.hpp"
#include "nllab/loccsim.hpp"
#include "nllab/measures.hpp"
#include "nllab/rng.hpp"
#include "nllab/tiling.hpp"
#include "nllab/verify.hpp"

using namespace nllab;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240601;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;

const std::map<std::string, std::string> kBuiltinTilings = {
    {"domino", "A A B\nC D B\nC E E\n"},
    {"wrap4x4", "a a b c\nd e b d\nf e g g\nf h h c\n"},
};

struct Common {
  std::optional<std::uint64_t> seed_flag;
  std::string format = "json";
  std::string output;

  std::uint64_t seed = kDefaultSeed;
  std::string seed_source = "default";

  void resolve() {
    if (seed_flag) {
      seed = *seed_flag;
      seed_source = "flag";
    } else if (const char* env = std::getenv("NL_SEED")) {
      try {
        seed = std::stoull(env);
      } catch (const std::exception&) {
        throw ParseError(std::string("NL_SEED is not an unsigned integer: '") + env + "'");
      }
      seed_source = "env";
    }
  }

  Json config(const std::string& command) const {
    return {{"command", command}, {"seed", seed}, {"seed_source", seed_source},
            {"format", format}, {"output", output.empty() ? Json(nullptr) : Json(output)}};
  }
};

// ---------------------------------------------------------------- parsing

double parse_angle(const std::string& text) {
  const std::string t = text;
  if (t.rfind("pi", 0) == 0) {
    if (t == "pi") return std::numbers::pi;
    if (t.size() > 3 && t[2] == '/') return std::numbers::pi / std::stod(t.substr(3));
    throw ParseError("bad angle '" + text + "'");
  }
  std::size_t used = 0;
  const double v = std::stod(t, &used);
  if (used != t.size()) throw ParseError("bad angle '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_angles(const std::string& text) {
  std::vector<double> out;
  for (const auto& s : split(text, ',')) out.push_back(parse_angle(s));
  if (out.empty()) throw ParseError("empty angle list");
  return out;
}

Tiling load_tiling(const std::string& spec) {
  const auto it = kBuiltinTilings.find(spec);
  return parse_tiling(it != kBuiltinTilings.end() ? it->second : read_text_file(spec));
}

struct BasisChoice {
  ProductBasis basis;
  std::string id;
  std::optional<std::array<double, 4>> angles;  // rotated family
};

// domino | rotated:t[,t2,t3,t4] | standard:dA,dB | tiling:<path or name> | <json path>
BasisChoice parse_basis(const std::string& spec) {
  if (spec == "domino") return {domino_basis(), "domino", std::nullopt};
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "rotated" && colon != std::string::npos) {
    const auto v = parse_angles(rest);
    if (v.size() != 1 && v.size() != 4) throw ParseError("rotated basis needs 1 or 4 angles");
    std::array<double, 4> a{};
    for (int i = 0; i < 4; ++i) a[i] = v.size() == 1 ? v[0] : v[i];
    try {
      return {rotated_domino_basis(a[0], a[1], a[2], a[3]), spec, a};
    } catch (const DomainError& e) {
      throw ParseError(e.what());
    }
  }
  if (head == "standard" && colon != std::string::npos) {
    const auto d = split(rest, ',');
    if (d.size() != 2) throw ParseError("standard basis needs dA,dB");
    return {standard_basis(std::stoi(d[0]), std::stoi(d[1])), spec, std::nullopt};
  }
  if (head == "tiling" && colon != std::string::npos) {
    return {domino_type_basis(load_tiling(rest)), spec, std::nullopt};
  }
  return {basis_from_json(read_json_file(spec)), spec, std::nullopt};
}

// ---------------------------------------------------------------- output

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && !j.empty() && (j[0].is_object() || j[0].is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else {
    out.emplace_back(prefix, j.is_string() ? j.get<std::string>() : dump_compact(j));
  }
}

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return dump_compact(v);
}

std::string to_csv(const std::vector<std::string>& columns, const Json& rows) {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + columns[c];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out += (c ? "," : "") + csv_cell(row.contains(columns[c]) ? row.at(columns[c]) : Json());
    }
    out += "\n";
  }
  return out;
}

// `table` gives the CSV rendering for commands with a natural table; the
// others use key,value rows of the flattened result.
void emit(const Common& c, const Json& doc,
          const std::function<std::string()>& table = nullptr) {
  std::string text;
  if (c.format == "json") {
    text = dump_canonical(doc);
  } else {
    std::vector<std::pair<std::string, std::string>> flat;
    flatten(doc, "", flat);
    if (c.format == "csv") {
      if (table) {
        text = table();
      } else {
        text = "key,value\n";
        for (const auto& [k, v] : flat) text += k + "," + v + "\n";
      }
    } else {
      for (const auto& [k, v] : flat) text += k + " = " + v + "\n";
    }
  }
  if (c.output.empty()) {
    std::cout << text;
  } else {
    write_text_file(c.output, text);
  }
}

// ---------------------------------------------------------------- certify

bool same_states_up_to_phase(const ProductBasis& x, const ProductBasis& y) {
  if (x.dA() != y.dA() || x.dB() != y.dB() || x.size() != y.size()) return false;
  for (const auto& s : x.states()) {
    bool found = false;
    for (const auto& t : y.states()) {
      const double o = std::abs(s.alice.dot(t.alice)) * std::abs(s.bob.dot(t.bob));
      if (std::abs(o - 1.0) < 1e-10) found = true;
    }
    if (!found) return false;
  }
  return true;
}

// Angles t1..t4 in [0, pi/4] of a rotated domino basis read off the tile
// states, or nullopt when the layout does not match.
std::optional<std::array<double, 4>> recover_rotated_angles(const ProductBasis& s) {
  if (s.dA() != 3 || s.dB() != 3 || s.size() != 9) return std::nullopt;
  auto fold = [](double a, double b) {
    const double t = std::atan2(std::abs(b), std::abs(a));
    return t > std::numbers::pi / 4 ? std::numbers::pi / 2 - t : t;
  };
  // (fixed side is alice, fixed index, pair i j)
  const std::array<std::tuple<bool, int, int, int>, 4> layout = {
      {{true, 0, 0, 1}, {true, 2, 1, 2}, {false, 0, 1, 2}, {false, 2, 0, 1}}};
  std::array<double, 4> angles{};
  for (std::size_t k = 0; k < layout.size(); ++k) {
    const auto [alice_fixed, fixed, i, j] = layout[k];
    bool found = false;
    for (const auto& st : s.states()) {
      const ComplexVector& f = alice_fixed ? st.alice : st.bob;
      const ComplexVector& v = alice_fixed ? st.bob : st.alice;
      if (std::abs(std::abs(f[fixed]) - 1.0) < 1e-10 && std::abs(v[i]) > 1e-12 &&
          std::abs(v[j]) > 1e-12) {
        angles[k] = fold(std::abs(v[i]), std::abs(v[j]));
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }
  const ProductBasis candidate = rotated_domino_basis(angles[0], angles[1], angles[2], angles[3]);
  if (!same_states_up_to_phase(s, candidate)) return std::nullopt;
  return angles;
}

struct Certificate {
  bool certified = false;
  std::optional<BoundReport> bound;
  std::string reason;
  Json tiling;
};

Certificate certify(const BasisChoice& b) {
  Certificate out;
  if (!b.basis.is_orthonormal() || !b.basis.is_complete()) {
    out.reason = "basis is not a complete orthonormal product basis";
    return out;
  }
  const Tiling t = induced_tiling(b.basis);
  const TilingAnalysis info = analyze(t);
  out.tiling = to_json(t, info);
  if (b.angles) {
    out.bound = rotated_constants(*b.angles);
    out.certified = true;
    out.reason = "rotated domino basis, smallest angle";
    return out;
  }
  if (same_states_up_to_phase(b.basis, domino_basis())) {
    out.bound = domino_constants();
    out.certified = true;
    out.reason = "domino basis";
    return out;
  }
  if (const auto angles = recover_rotated_angles(b.basis)) {
    out.bound = rotated_constants(*angles);
    out.certified = true;
    out.reason = "rotated domino basis, smallest angle";
    return out;
  }
  if (info.domino_type && info.irreducible && t.dA() >= 3 && t.dB() >= 3 &&
      same_states_up_to_phase(b.basis, domino_type_basis(t))) {
    out.bound = domino_type_constants(*info.diameter, t.dA(), t.dB());
    out.certified = true;
    out.reason = "irreducible domino-type tiling with pi/4 tile states";
    return out;
  }
  out.reason = !info.domino_type  ? "tiling is not domino-type"
               : !info.irreducible ? "tiling is reducible"
               : (t.dA() < 3 || t.dB() < 3) ? "grid smaller than 3x3"
                                             : "tile states are not the pi/4 construction";
  return out;
}

// ---------------------------------------------------------------- commands

int cmd_table1(const Common& c, int D, int dA, int dB, const std::string& theta_text) {
  const double theta = parse_angle(theta_text);
  const BoundReport domino = domino_constants();
  const BoundReport dtype = domino_type_constants(D, dA, dB);
  const BoundReport rot = rotated_constants(theta);
  Json rows = Json::array();
  auto row = [](const BoundReport& r, const std::string& formula) {
    Json j = to_json(r);
    j["formula"] = formula;
    return j;
  };
  rows.push_back(row(domino, "(2/27) eta^2 / n^5 with eta = 1/(cL)"));
  rows.push_back(row(dtype, "1 / (216 D^2 (dA dB)^5)"));
  rows.push_back(row(rot, "c = 114 / sin(2 theta)"));
  Json cfg = c.config("table1");
  cfg["D"] = D;
  cfg["dA"] = dA;
  cfg["dB"] = dB;
  cfg["theta"] = theta;
  const Json doc = {{"config", cfg}, {"result", {{"rows", rows}}}};
  emit(c, doc, [&] {
    return to_csv({"family", "n", "L", "c", "D", "theta", "eta_lower", "p_error_lower", "formula"},
                  rows);
  });
  return 0;
}

struct VerifyArgs {
  std::vector<std::string> suites;
  std::size_t trials = 10000;
  int uv_max = 4;
  std::string tiling = "wrap4x4";
  std::string thetas = "pi/4,pi/8,pi/12";
  std::string basis = "domino";
  std::size_t adversarial_restarts = 20;
  std::size_t adversarial_iterations = 500;
  double kkb_eps = 1e-4;
  double tolerance = kLemmaTolRel;
  unsigned workers = 1;
};

int cmd_verify(const Common& c, const VerifyArgs& a) {
  static const std::vector<std::string> kAll = {"uv",      "pair",        "domino", "dimbox",
                                                "rotated", "adversarial", "kkb"};
  std::vector<std::string> suites = a.suites.empty() ? kAll : a.suites;
  for (const auto& s : suites) {
    if (std::find(kAll.begin(), kAll.end(), s) == kAll.end()) {
      throw ParseError("unknown suite '" + s + "'");
    }
  }
  auto wants = [&](const char* s) { return std::find(suites.begin(), suites.end(), s) != suites.end(); };
  // Inputs are resolved before any suite runs so bad files fail fast.
  std::optional<Tiling> tiling;
  if (wants("dimbox")) tiling = load_tiling(a.tiling);
  std::optional<BasisChoice> basis;
  if (wants("pair")) basis = parse_basis(a.basis);
  const std::vector<double> thetas = wants("rotated") ? parse_angles(a.thetas) : std::vector<double>{};

  std::vector<std::function<LemmaSuiteResult()>> jobs;
  if (wants("uv")) {
    for (int m = 1; m <= a.uv_max; ++m) {
      for (int n = 1; n <= a.uv_max; ++n) {
        jobs.push_back([=, &a, &c] { return check_uv_lemma(m, n, a.trials, c.seed, a.tolerance); });
      }
    }
  }
  if (wants("pair")) {
    jobs.push_back([&] { return check_pair_of_tiles(basis->basis, a.trials, c.seed, a.tolerance); });
  }
  if (wants("domino")) jobs.push_back([&] { return check_domino_rigidity(a.trials, c.seed, a.tolerance); });
  if (wants("dimbox")) {
    jobs.push_back([&] { return check_dimbox_rigidity(*tiling, a.trials, c.seed, a.tolerance); });
  }
  for (double t : thetas) {
    jobs.push_back([=, &a, &c] { return check_rotated_chain(t, a.trials, c.seed, a.tolerance); });
  }

  // Every suite has its own seeded stream, so the report does not depend
  // on the worker count.
  std::vector<std::optional<LemmaSuiteResult>> done(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) {
      try {
        done[i] = jobs[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t n = std::min<std::size_t>(std::max(1u, a.workers), jobs.size());
    for (std::size_t k = 1; k < n; ++k) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  Json results = Json::array();
  std::size_t violations = 0;
  for (const auto& r : done) {
    violations += r->violations;
    results.push_back(to_json(*r));
  }

  Json result = {{"suites", results}};
  if (wants("adversarial")) {
    const auto adv = adversarial_domino_margin(a.adversarial_restarts, a.adversarial_iterations, c.seed);
    if (adv.min_margin < -a.tolerance) ++violations;
    result["adversarial"] = to_json(adv);
  }
  if (wants("kkb")) {
    const ProductBasis std3 = standard_basis(3, 3);
    const ProductBasis dom = domino_basis();
    const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
    ComplexMatrix corner = ComplexMatrix::Zero(3, 3);
    corner(0, 0) = 1.0;
    Json kkb = Json::array();
    auto add_kkb = [&](const std::string& name, const ProductBasis& s, const KkbCandidate& cand) {
      Json j = to_json(check_kkb_conditions(s, cand));
      j["candidate"] = name;
      kkb.push_back(j);
    };
    add_kkb("standard: I/9 x I", std3, {PsdOperator(id / 9.0), PsdOperator(id), 1.0 / 9.0});
    add_kkb("standard: |0><0| x |0><0|", std3,
            kkb_candidate_from(std3, {PsdOperator(corner), PsdOperator(corner)}));
    add_kkb("domino: upper-bound construction, eps=" + std::to_string(a.kkb_eps), dom,
            kkb_candidate_from(dom, upper_bound_construction(dom, 0, a.kkb_eps)));
    result["kkb"] = kkb;
  }
  result["total_violations"] = violations;

  Json cfg = c.config("verify");
  cfg["suites"] = suites;
  cfg["trials"] = a.trials;
  cfg["uv_max"] = a.uv_max;
  cfg["tiling"] = a.tiling;
  cfg["thetas"] = thetas;
  cfg["basis"] = a.basis;
  cfg["adversarial_restarts"] = a.adversarial_restarts;
  cfg["adversarial_iterations"] = a.adversarial_iterations;
  cfg["kkb_eps"] = a.kkb_eps;
  cfg["tolerance"] = a.tolerance;
  cfg["workers"] = a.workers;
  emit(c, {{"config", cfg}, {"result", result}}, [&] {
    return to_csv({"lemma_id", "trials", "skipped", "violations", "worst_margin", "seed", "generator"},
                  results);
  });
  return violations > 0 ? kExitViolation : 0;
}

struct EtaArgs {
  std::string basis = "domino";
  std::size_t budget = 10000;
  std::size_t restarts = 0;
  std::size_t max_iterations = 500;
  std::string eps_list = "1e-4,1e-5,1e-6";
};

int cmd_eta(const Common& c, const EtaArgs& a) {
  const BasisChoice b = parse_basis(a.basis);
  EstimatorOptions opt;
  opt.budget = a.budget;
  opt.seed = c.seed;
  opt.restarts = a.restarts;
  opt.max_iterations = a.max_iterations;
  opt.eps_list.clear();
  for (const auto& e : split(a.eps_list, ',')) opt.eps_list.push_back(std::stod(e));
  opt.basis_id = b.id;
  const Certificate cert = certify(b);
  if (cert.bound) opt.certified_lower = cert.bound->eta_lower;
  const EtaEstimate est = estimate_eta(b.basis, opt);
  Json cfg = c.config("eta");
  cfg["basis"] = a.basis;
  cfg["budget"] = a.budget;
  cfg["restarts"] = a.restarts;
  cfg["max_iterations"] = a.max_iterations;
  cfg["eps_list"] = opt.eps_list;
  emit(c, {{"config", cfg}, {"result", to_json(est)}});
  return 0;
}

int cmd_certify(const Common& c, const std::string& basis_spec, const std::string& basis_out) {
  const BasisChoice b = parse_basis(basis_spec);
  if (!basis_out.empty()) write_text_file(basis_out, dump_canonical(basis_to_json(b.basis)));
  const Certificate cert = certify(b);
  Json result = {{"basis_id", b.id},
                 {"certified", cert.certified},
                 {"reason", cert.reason},
                 {"tiling", cert.tiling},
                 {"bound", cert.bound ? to_json(*cert.bound) : Json(nullptr)}};
  Json cfg = c.config("certify");
  cfg["basis"] = basis_spec;
  emit(c, {{"config", cfg}, {"result", result}});
  return 0;
}

int cmd_tiling(const Common& c, const std::string& path, const std::string& enumerate,
               bool irreducible_only) {
  Json result;
  if (!path.empty()) {
    const Tiling t = load_tiling(path);
    result["tiling"] = to_json(t, analyze(t));
  }
  if (!enumerate.empty()) {
    const auto d = split(enumerate, ',');
    if (d.size() != 2) throw ParseError("--enumerate needs dA,dB");
    Json list = Json::array();
    std::size_t count = 0;
    for_each_domino_tiling(std::stoi(d[0]), std::stoi(d[1]), irreducible_only, [&](const Tiling& t) {
      ++count;
      const TilingAnalysis info = analyze(t);
      list.push_back({{"text", t.to_text()}, {"diameter", info.diameter ? Json(*info.diameter) : Json()},
                      {"irreducible", info.irreducible}});
      return true;
    });
    result["enumeration"] = {{"dA", std::stoi(d[0])}, {"dB", std::stoi(d[1])},
                             {"irreducible_only", irreducible_only}, {"count", count},
                             {"tilings", list}};
  }
  if (result.is_null()) throw ParseError("tiling: give a tiling file or --enumerate dA,dB");
  Json cfg = c.config("tiling");
  cfg["path"] = path;
  cfg["enumerate"] = enumerate;
  cfg["irreducible_only"] = irreducible_only;
  emit(c, {{"config", cfg}, {"result", result}});
  return 0;
}

struct SimulateArgs {
  std::string protocol = "baseline";
  std::string basis = "domino";
  std::optional<double> eps;
  bool interpolate = false;
  std::string interpolated_out;
  std::string protocol_out;
  std::string decision = "auto";
};

int cmd_simulate(const Common& c, const SimulateArgs& a) {
  const BasisChoice b = parse_basis(a.basis);
  const ProductBasis& s = b.basis;
  ProtocolTree p = a.protocol == "baseline"    ? baseline_protocol(s)
                   : a.protocol == "one-round" ? one_round_protocol(s.dA(), s.dB())
                                               : protocol_from_json(read_json_file(a.protocol));
  if (p.dA() != s.dA() || p.dB() != s.dB()) {
    throw ParseError("protocol dimensions do not match the basis");
  }
  if (!a.protocol_out.empty()) write_text_file(a.protocol_out, dump_canonical(protocol_to_json(p)));
  const ValidationReport v = validate(p);
  Json result;
  result["validation"] = to_json(v);
  if (!v.valid) {
    Json cfg = c.config("simulate");
    emit(c, {{"config", cfg}, {"result", result}});
    return kExitInput;
  }
  bool labeled = true;
  for (const auto& r : p.leaves()) labeled = labeled && p.node(r).leaf_label.has_value();
  std::string decision = a.decision;
  if (decision == "auto") decision = labeled ? "tree" : "map";
  if (decision != "tree" && decision != "map") throw ParseError("--decision must be tree, map or auto");
  const Decision dec = decision == "tree" ? Decision(TreeLabels{}) : Decision(MapDecision{});
  result["decision"] = decision;
  result["p_error"] = round_sig(evaluate_error(p, s, dec));
  result["leaves"] = p.leaves().size();

  const double n = static_cast<double>(s.size());
  const double eps = a.eps.value_or(perror_from_eta(1.0, s.size()).optimal_eps);
  result["eps"] = eps;
  result["frontier"] = to_json(stage_one_frontier(p, s, eps));

  if (a.interpolate) {
    const InterpolationResult ir = interpolate(p, s, eps);
    const StageOneFrontier f = stage_one_frontier(ir.tree, s, eps);
    double worst_hit = 0.0;
    std::size_t exact = 0;
    for (const auto& node : f.nodes) {
      if (node.kind == FrontierKind::Exact) {
        ++exact;
        worst_hit = std::max(worst_hit, std::abs(node.p_max - (1.0 / n + eps)));
      }
    }
    const auto tv = leaf_distribution_tv(p, ir.tree, s);
    Json steps = Json::array();
    for (const auto& st : ir.steps) steps.push_back(to_json(st));
    Json tvj = Json::array();
    for (double x : tv) tvj.push_back(round_sig(x));
    result["interpolation"] = {
        {"splits", ir.steps.size()},
        {"steps", steps},
        {"nodes", ir.tree.size()},
        {"frontier", to_json(f)},
        {"exact_frontier_nodes", exact},
        {"max_threshold_gap", round_sig(worst_hit)},
        {"leaf_tv", tvj},
        {"max_leaf_tv", round_sig(*std::max_element(tv.begin(), tv.end()))},
        {"p_error", round_sig(evaluate_error(ir.tree, s, dec))},
    };
    if (!a.interpolated_out.empty()) {
      write_text_file(a.interpolated_out, dump_canonical(protocol_to_json(ir.tree)));
    }
  }
  Json cfg = c.config("simulate");
  cfg["protocol"] = a.protocol;
  cfg["basis"] = a.basis;
  cfg["eps"] = eps;
  cfg["interpolate"] = a.interpolate;
  cfg["interpolated_out"] = a.interpolated_out;
  cfg["decision"] = decision;
  emit(c, {{"config", cfg}, {"result", result}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nllab: nonlocality bounds for product-state discrimination"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed_flag, "RNG seed (overrides NL_SEED)");
    sub->add_option("--format", common.format, "json, csv or pretty")
        ->check(CLI::IsMember({"json", "csv", "pretty"}));
    sub->add_option("-o,--output", common.output, "write the report here instead of stdout");
  };

  int D = 2, dA = 4, dB = 4;
  std::string theta = "pi/4";
  auto* table1 = app.add_subcommand("table1", "rigidity constants and error bounds");
  add_common(table1);
  table1->add_option("--D", D, "domino-type diameter")->check(CLI::PositiveNumber);
  table1->add_option("--dA", dA)->check(CLI::PositiveNumber);
  table1->add_option("--dB", dB)->check(CLI::PositiveNumber);
  table1->add_option("--theta", theta, "rotation angle (number or pi/k)");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run the lemma suites");
  add_common(verify);
  verify->add_option("--suite", va.suites, "uv, pair, domino, dimbox, rotated, adversarial, kkb");
  verify->add_option("--trials", va.trials);
  verify->add_option("--uv-max", va.uv_max)->check(CLI::PositiveNumber);
  verify->add_option("--tiling", va.tiling, "tiling file or builtin name (wrap4x4, domino)");
  verify->add_option("--theta", va.thetas, "comma separated angles");
  verify->add_option("--basis", va.basis, "basis for the pair-of-tiles suite");
  verify->add_option("--adversarial-restarts", va.adversarial_restarts);
  verify->add_option("--adversarial-iterations", va.adversarial_iterations);
  verify->add_option("--kkb-eps", va.kkb_eps);
  verify->add_option("--tolerance", va.tolerance, "violation threshold on normalized margins")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--workers", va.workers, "suites run concurrently")->check(CLI::PositiveNumber);

  EtaArgs ea;
  auto* eta = app.add_subcommand("eta", "estimate the nonlocality constant from above");
  add_common(eta);
  eta->add_option("--basis", ea.basis);
  eta->add_option("--budget", ea.budget);
  eta->add_option("--restarts", ea.restarts);
  eta->add_option("--max-iterations", ea.max_iterations);
  eta->add_option("--eps-list", ea.eps_list);

  std::string certify_basis = "domino";
  std::string certify_basis_out;
  auto* certify_cmd = app.add_subcommand("certify", "certified lower bounds for a basis");
  add_common(certify_cmd);
  certify_cmd->add_option("--basis", certify_basis);
  certify_cmd->add_option("--basis-out", certify_basis_out, "write the basis as JSON");

  std::string tiling_path, enumerate;
  bool irreducible_only = false;
  auto* tiling = app.add_subcommand("tiling", "analyze or enumerate tilings");
  add_common(tiling);
  tiling->add_option("path", tiling_path, "tiling file or builtin name");
  tiling->add_option("--enumerate", enumerate, "dA,dB");
  tiling->add_flag("--irreducible-only", irreducible_only);

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "evaluate an LOCC protocol");
  add_common(simulate);
  simulate->add_option("--protocol", sa.protocol, "protocol JSON, baseline or one-round");
  simulate->add_option("--basis", sa.basis);
  simulate->add_option("--eps", sa.eps, "stopping threshold offset");
  simulate->add_flag("--interpolate", sa.interpolate);
  simulate->add_option("--interpolated-out", sa.interpolated_out);
  simulate->add_option("--protocol-out", sa.protocol_out, "write the input protocol as JSON");
  simulate->add_option("--decision", sa.decision, "tree, map or auto");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    common.resolve();
    if (*table1) return cmd_table1(common, D, dA, dB, theta);
    if (*verify) return cmd_verify(common, va);
    if (*eta) return cmd_eta(common, ea);
    if (*certify_cmd) return cmd_certify(common, certify_basis, certify_basis_out);
    if (*tiling) return cmd_tiling(common, tiling_path, enumerate, irreducible_only);
    if (*simulate) return cmd_simulate(common, sa);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what();
    if (e.cell() && std::string(e.what()).find("cell") == std::string::npos) {
      std::cerr << " at cell (" << e.cell()->row << ", " << e.cell()->col << ")";
    }
    std::cerr << "\n";
    return kExitInput;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const auto& line : e.trace()) std::cerr << "  " << line << "\n";
    return kExitViolation;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: bad number: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolation;
  }
  return 0;
}
