#include "nllab/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nllab/errors.hpp"

namespace nllab {
namespace {

Json num(double x) { return std::isfinite(x) ? Json(round_sig(x)) : Json(nullptr); }

template <typename T>
Json opt(const std::optional<T>& x) {
  if (!x) return nullptr;
  if constexpr (std::is_floating_point_v<T>) {
    return num(*x);
  } else {
    return *x;
  }
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(where + ": missing field '" + key + "'");
  }
  return j.at(key);
}

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("complex number must be [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Party party_from_string(const std::string& s) {
  if (s == "alice") return Party::Alice;
  if (s == "bob") return Party::Bob;
  if (s == "none") return Party::None;
  throw ParseError("unknown party '" + s + "'");
}

std::string party_to_string(Party p) {
  switch (p) {
    case Party::Alice: return "alice";
    case Party::Bob: return "bob";
    case Party::None: return "none";
  }
  return "none";
}

Json node_to_json(const ProtocolNode& n) {
  Json j;
  j["party"] = party_to_string(n.party);
  j["kraus"] = Json::array();
  for (const auto& k : n.kraus) j["kraus"].push_back(complex_matrix_to_json(k));
  if (n.is_leaf()) {
    j["leaf_label"] = n.leaf_label ? Json(*n.leaf_label) : Json(nullptr);
  } else {
    j["children"] = Json::array();
    for (const auto& c : n.children) j["children"].push_back(node_to_json(c));
  }
  if (n.origin) j["origin"] = record_to_json(*n.origin);
  return j;
}

ProtocolNode node_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": node must be an object");
  ProtocolNode n;
  n.party = party_from_string(field(j, "party", where).get<std::string>());
  const Json& kraus = field(j, "kraus", where);
  if (!kraus.is_array()) throw ParseError(where + ": kraus must be a list");
  for (const auto& k : kraus) n.kraus.push_back(complex_matrix_from_json(k));
  if (j.contains("children")) {
    const Json& ch = j.at("children");
    if (!ch.is_array()) throw ParseError(where + ": children must be a list");
    for (std::size_t i = 0; i < ch.size(); ++i) {
      n.children.push_back(node_from_json(ch[i], where + "." + std::to_string(i)));
    }
  }
  if (j.contains("leaf_label") && !j.at("leaf_label").is_null()) {
    n.leaf_label = j.at("leaf_label").get<int>();
  }
  if (j.contains("origin")) n.origin = j.at("origin").get<Record>();
  return n;
}

Json subcheck_to_json(const SubcheckResult& s) {
  return {{"id", s.id},
          {"evaluated", s.evaluated},
          {"violations", s.violations},
          {"worst_margin", num(s.worst_margin)}};
}

}  // namespace

double round_sig(double x, int digits) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

Json complex_vector_to_json(const ComplexVector& v) {
  Json j = Json::array();
  for (Index i = 0; i < v.size(); ++i) j.push_back({v(i).real(), v(i).imag()});
  return j;
}

ComplexVector complex_vector_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("vector must be a list of [re, im] pairs");
  ComplexVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = complex_from_json(j[i]);
  return v;
}

Json complex_matrix_to_json(const ComplexMatrix& m, bool rounded) {
  Json j = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) {
      if (rounded) {
        row.push_back({num(m(r, c).real()), num(m(r, c).imag())});
      } else {
        row.push_back({m(r, c).real(), m(r, c).imag()});
      }
    }
    j.push_back(std::move(row));
  }
  return j;
}

ComplexMatrix complex_matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw ParseError("matrix must be a non-empty list of rows");
  }
  const std::size_t cols = j[0].size();
  ComplexMatrix m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ParseError("matrix rows differ in length");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Index>(r), static_cast<Index>(c)) = complex_from_json(j[r][c]);
    }
  }
  return m;
}

Json basis_to_json(const ProductBasis& s) {
  Json j = Json::array();
  for (const auto& st : s.states()) {
    j.push_back({{"label", st.label},
                 {"alice", complex_vector_to_json(st.alice)},
                 {"bob", complex_vector_to_json(st.bob)}});
  }
  return j;
}

ProductBasis basis_from_json(const Json& j) try {
  if (!j.is_array() || j.empty()) throw ParseError("basis must be a non-empty list of states");
  std::vector<ProductState> states;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "state " + std::to_string(i);
    ProductState st;
    st.alice = complex_vector_from_json(field(j[i], "alice", where));
    st.bob = complex_vector_from_json(field(j[i], "bob", where));
    st.label = j[i].contains("label") ? j[i].at("label").get<int>() : static_cast<int>(i);
    states.push_back(std::move(st));
  }
  const int dA = static_cast<int>(states.front().alice.size());
  const int dB = static_cast<int>(states.front().bob.size());
  try {
    return ProductBasis(dA, dB, std::move(states));
  } catch (const ContractViolation& e) {
    throw ParseError(std::string("basis: ") + e.what());
  }
} catch (const Json::exception& e) {
  throw ParseError(std::string("basis: ") + e.what());
}

Json protocol_to_json(const ProtocolTree& p) {
  return {{"dA", p.dA()}, {"dB", p.dB()}, {"root", node_to_json(p.root())}};
}

ProtocolTree protocol_from_json(const Json& j) try {
  const int dA = field(j, "dA", "protocol").get<int>();
  const int dB = field(j, "dB", "protocol").get<int>();
  if (dA < 1 || dB < 1) throw ParseError("protocol: dimensions must be positive");
  ProtocolTree p(dA, dB);
  p.root() = node_from_json(field(j, "root", "protocol"), "root");
  return p;
} catch (const Json::exception& e) {
  throw ParseError(std::string("protocol: ") + e.what());
}

namespace {

// Shortest round-trip form; always marked as a float.
std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  std::string out(buf, res.ptr);
  if (out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

// indent < 0 writes everything on one line.
void write_json(const Json& j, int indent, int depth, std::string& out) {
  const bool pretty = indent >= 0;
  const std::string nl = pretty ? "\n" : "";
  const std::string pad = pretty ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = pretty ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  if (j.is_object() || j.is_array()) {
    const bool obj = j.is_object();
    if (j.empty()) {
      out += obj ? "{}" : "[]";
      return;
    }
    out += (obj ? "{" : "[") + nl;
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      if (!first) out += "," + nl;
      first = false;
      out += pad;
      if (obj) out += Json(k).dump() + (pretty ? ": " : ":");
      write_json(v, indent, depth + 1, out);
    }
    out += nl + close + (obj ? "}" : "]");
  } else if (j.is_number_float()) {
    out += format_double(j.get<double>());
  } else {
    out += j.dump();
  }
}

}  // namespace

std::string dump_canonical(const Json& j) {
  std::string out;
  write_json(j, 2, 0, out);
  return out + "\n";
}

std::string dump_compact(const Json& j) {
  std::string out;
  write_json(j, -1, 0, out);
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

Json read_json_file(const std::string& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Json record_to_json(const Record& r) { return Json(r); }

Json to_json(const BoundReport& r) {
  Json j;
  j["family"] = to_string(r.family);
  j["n"] = r.n;
  j["L"] = r.L;
  j["c"] = num(r.c);
  j["D"] = opt(r.D);
  j["theta"] = opt(r.theta);
  j["eta_lower"] = num(r.eta_lower);
  j["p_error_lower"] = num(r.p_error_lower);
  if (r.C_exact) {
    j["C_exact"] = opt(r.C_exact);
    j["c_sharp"] = opt(r.c_sharp);
    j["eta_sharp"] = opt(r.eta_sharp);
    j["p_error_sharp"] = opt(r.p_error_sharp);
  }
  j["provenance"] = r.provenance;
  return j;
}

Json to_json(const MeasureReport& r) {
  return {{"G", complex_matrix_to_json(r.G, true)},
          {"delta", opt(r.delta)},
          {"info_gain", num(r.info_gain)},
          {"ratio", opt(r.ratio)},
          {"rigidity_dev", num(r.rigidity_dev)},
          {"valid", r.valid},
          {"seed", opt(r.seed)}};
}

Json to_json(const EtaEstimate& r) {
  Json j;
  j["basis_id"] = r.basis_id;
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  j["evaluations"] = r.evaluations;
  j["undefined"] = r.undefined;
  j["best_ratio"] = num(r.best_ratio);
  j["min_observed_ratio"] = num(r.min_observed_ratio);
  j["certified_lower"] = opt(r.certified_lower);
  if (r.best_pair) {
    j["best_pair"] = {{"a", complex_matrix_to_json(r.best_pair->a.matrix(), true)},
                      {"b", complex_matrix_to_json(r.best_pair->b.matrix(), true)}};
  } else {
    j["best_pair"] = nullptr;
  }
  j["refinement_trace"] = Json::array();
  for (const auto& t : r.refinement_trace) {
    j["refinement_trace"].push_back({{"iteration", t.iteration}, {"ratio", num(t.ratio)}});
  }
  return j;
}

Json to_json(const LemmaSuiteResult& r) {
  Json j;
  j["lemma_id"] = r.lemma_id;
  j["seed"] = r.seed;
  j["generator"] = r.generator;
  j["trials"] = r.trials;
  j["skipped"] = r.skipped;
  j["violations"] = r.violations;
  j["worst_margin"] = num(r.worst_margin);
  j["worst_trial"] = opt(r.worst_trial);
  j["tolerance"] = num(r.tolerance);
  j["hypotheses"] = Json::object();
  for (const auto& [h, hits] : r.hypothesis_hits) {
    j["hypotheses"][h] = {{"hits", hits}, {"rate", num(r.hit_rate(h))}};
  }
  j["subchecks"] = Json::array();
  for (const auto& s : r.subchecks) j["subchecks"].push_back(subcheck_to_json(s));
  return j;
}

Json to_json(const AdversarialResult& r) {
  return {{"seed", r.seed},
          {"restarts", r.restarts},
          {"evaluations", r.evaluations},
          {"min_margin", num(r.min_margin)},
          {"worst_subcheck", r.worst_subcheck}};
}

Json to_json(const KkbReport& r) {
  Json j;
  j["diag_sum"] = num(r.diag_sum);
  j["diag_max"] = num(r.diag_max);
  j["chi"] = num(r.chi);
  j["condition1_sum_to_one"] = r.sum_to_one;
  j["condition2_max_equals_chi"] = r.max_equals_chi;
  j["condition3_cross_terms_vanish"] = r.cross_terms_vanish;
  j["worst_cross"] = num(r.worst_cross);
  j["worst_cross_sq"] = num(r.worst_cross_sq);
  j["worst_pair"] = r.worst_pair ? Json{r.worst_pair->first, r.worst_pair->second} : Json(nullptr);
  j["diagonal_positive"] = r.diagonal_positive;
  j["implies_zero_disturbance"] = r.implies_zero_disturbance;
  j["note"] = "necessary conditions only; sufficiency is open";
  return j;
}

Json to_json(const Tiling& t, const TilingAnalysis& a) {
  Json j;
  j["dA"] = t.dA();
  j["dB"] = t.dB();
  j["tiles"] = t.tiles().size();
  j["text"] = t.to_text();
  j["row_graph"] = a.row_graph;
  j["col_graph"] = a.col_graph;
  j["row_connected"] = a.row_connected;
  j["col_connected"] = a.col_connected;
  j["irreducible"] = a.irreducible;
  j["row_diameter"] = opt(a.row_diameter);
  j["col_diameter"] = opt(a.col_diameter);
  j["diameter"] = opt(a.diameter);
  j["domino_type"] = a.domino_type;
  j["max_tile_area"] = a.max_tile_area;
  return j;
}

Json to_json(const ValidationReport& r) {
  Json j;
  j["valid"] = r.valid;
  j["worst_residual"] = num(r.worst_residual);
  j["violations"] = Json::array();
  for (const auto& v : r.violations) {
    j["violations"].push_back({{"node", record_to_json(v.node)},
                               {"kind", v.kind},
                               {"message", v.message},
                               {"residual", num(v.residual)}});
  }
  return j;
}

Json to_json(const StageOneFrontier& f) {
  Json j;
  j["threshold"] = num(f.threshold);
  j["nodes"] = Json::array();
  for (const auto& n : f.nodes) {
    j["nodes"].push_back(
        {{"node", record_to_json(n.node)}, {"p_max", num(n.p_max)}, {"kind", to_string(n.kind)}});
  }
  j["unreachable"] = Json::array();
  for (const auto& r : f.unreachable) j["unreachable"].push_back(record_to_json(r));
  return j;
}

Json to_json(const InterpolationStep& s) {
  Json ts = Json::array();
  for (double t : s.outcome_t) ts.push_back(num(t));
  return {{"node", record_to_json(s.node)}, {"c", num(s.c)}, {"outcome_t", ts},
          {"p_max", num(s.p_max)}};
}

}  // namespace nllab
