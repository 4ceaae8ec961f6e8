#pragma once

#include <string>

#include "json.hpp"
#include "nllab/bases.hpp"
#include "nllab/bounds.hpp"
#include "nllab/estimator.hpp"
#include "nllab/loccsim.hpp"
#include "nllab/measures.hpp"
#include "nllab/tiling.hpp"
#include "nllab/verify.hpp"

namespace nllab {

using Json = nlohmann::ordered_json;

/// Report floats keep this many significant digits.
inline constexpr int kReportDigits = 12;
double round_sig(double x, int digits = kReportDigits);

// Exact encodings: complex numbers as [re, im], vectors as lists of
// pairs, matrices as lists of rows. Doubles round-trip bit-exactly.
Json complex_vector_to_json(const ComplexVector& v);
ComplexVector complex_vector_from_json(const Json& j);
Json complex_matrix_to_json(const ComplexMatrix& m, bool rounded = false);
ComplexMatrix complex_matrix_from_json(const Json& j);

/// [{label, alice, bob}, ...]. Dimensions come from the factor lengths.
Json basis_to_json(const ProductBasis& s);
ProductBasis basis_from_json(const Json& j);

/// {"dA", "dB", "root"} with nodes {party, kraus, children} or
/// {party: "none", kraus: [], leaf_label}. Nodes carry "origin" when set.
/// The parser builds the tree as written; use validate() for semantics.
Json protocol_to_json(const ProtocolTree& p);
ProtocolTree protocol_from_json(const Json& j);

/// Canonical text: two-space indented, floats in shortest round-trip form
/// (always with a '.' or exponent), trailing newline.
std::string dump_canonical(const Json& j);
/// Same number formatting on a single line.
std::string dump_compact(const Json& j);

/// Throw ParseError with the path on I/O or syntax errors.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
Json read_json_file(const std::string& path);

Json to_json(const BoundReport& r);
Json to_json(const MeasureReport& r);
Json to_json(const EtaEstimate& r);
Json to_json(const LemmaSuiteResult& r);
Json to_json(const AdversarialResult& r);
Json to_json(const KkbReport& r);
Json to_json(const Tiling& t, const TilingAnalysis& a);
Json to_json(const ValidationReport& r);
Json to_json(const StageOneFrontier& f);
Json to_json(const InterpolationStep& s);
Json record_to_json(const Record& r);

}  // namespace nllab
