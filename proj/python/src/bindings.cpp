// Python bindings. Structured results cross the boundary as JSON text and
// are decoded on the Python side; matrices go through numpy.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numbers>

#include "nllab/bases.hpp"
#include "nllab/bounds.hpp"
#include "nllab/errors.hpp"
#include "nllab/estimator.hpp"
#include "nllab/io.hpp"
#include "nllab/loccsim.hpp"
#include "nllab/measures.hpp"
#include "nllab/tiling.hpp"
#include "nllab/verify.hpp"

namespace py = pybind11;
using namespace nllab;

namespace {

std::string text(const Json& j) { return dump_compact(j); }

Tiling tiling_from(const std::string& source) { return parse_tiling(source); }

const ProductState& state_at(const ProductBasis& s, std::size_t i) {
  if (i >= s.size()) throw py::index_error("state index out of range");
  return s[i];
}

MeasurementPair pair_from(const ComplexMatrix& a, const ComplexMatrix& b) {
  return {PsdOperator(a), PsdOperator(b)};
}

ProtocolTree protocol_from(const std::string& json_text) {
  return protocol_from_json(Json::parse(json_text));
}

}  // namespace

PYBIND11_MODULE(_nllab, m) {
  m.doc() = "Native core of nllab";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ContractViolation>(m, "ContractViolation", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<UndefinedQuantity>(m, "UndefinedQuantity", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<EstimationFailed>(m, "EstimationFailed", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  py::class_<ProductBasis>(m, "ProductBasis")
      .def_property_readonly("dA", &ProductBasis::dA)
      .def_property_readonly("dB", &ProductBasis::dB)
      .def("__len__", &ProductBasis::size)
      .def("label", [](const ProductBasis& s, std::size_t i) { return state_at(s, i).label; })
      .def_property_readonly("max_overlap", &ProductBasis::max_overlap)
      .def("is_orthonormal", [](const ProductBasis& s) { return s.is_orthonormal(); })
      .def("is_complete", [](const ProductBasis& s) { return s.is_complete(); })
      .def("alice", [](const ProductBasis& s, std::size_t i) { return ComplexVector(state_at(s, i).alice); })
      .def("bob", [](const ProductBasis& s, std::size_t i) { return ComplexVector(state_at(s, i).bob); })
      .def("to_json", [](const ProductBasis& s) { return text(basis_to_json(s)); })
      .def("induced_tiling", [](const ProductBasis& s) {
        const Tiling t = induced_tiling(s);
        return text(to_json(t, analyze(t)));
      });

  m.def("domino_basis", &domino_basis);
  m.def("rotated_domino_basis", &rotated_domino_basis, py::arg("theta1"), py::arg("theta2"),
        py::arg("theta3"), py::arg("theta4"));
  m.def("standard_basis", &standard_basis, py::arg("dA"), py::arg("dB"));
  m.def("domino_type_basis", [](const std::string& tiling) { return domino_type_basis(tiling_from(tiling)); },
        py::arg("tiling"));
  m.def("basis_from_json", [](const std::string& j) { return basis_from_json(Json::parse(j)); });

  m.def("analyze_tiling", [](const std::string& src) {
    const Tiling t = tiling_from(src);
    return text(to_json(t, analyze(t)));
  });
  m.def("count_domino_tilings", [](int dA, int dB, bool irreducible_only) {
    std::size_t count = 0;
    for_each_domino_tiling(dA, dB, irreducible_only, [&](const Tiling&) {
      ++count;
      return true;
    });
    return count;
  }, py::arg("dA"), py::arg("dB"), py::arg("irreducible_only") = false);

  m.def("helstrom_error", [](double q0, double q1, double delta) {
    const HelstromError h = helstrom_error(q0, q1, delta);
    return py::make_tuple(h.exact, h.relaxation);
  });
  m.def("perror_from_eta", [](double eta, std::size_t n) {
    const EtaBound b = perror_from_eta(eta, n);
    return py::make_tuple(b.p_error, b.optimal_eps);
  });
  m.def("stopping_objective", &stopping_objective);
  m.def("domino_constants", [] { return text(to_json(domino_constants())); });
  m.def("domino_type_constants", [](int D, int dA, int dB) { return text(to_json(domino_type_constants(D, dA, dB))); });
  m.def("rotated_constants", [](double theta) { return text(to_json(rotated_constants(theta))); });
  m.def("appendix_constant_min", [] {
    const ConstantMin c = appendix_constant_min();
    return py::make_tuple(c.s_star, c.C);
  });

  m.def("nonlocality_ratio", [](const ProductBasis& s, const ComplexMatrix& a, const ComplexMatrix& b) {
    return nonlocality_ratio(s, pair_from(a, b));
  });
  m.def("measure", [](const ProductBasis& s, const ComplexMatrix& a, const ComplexMatrix& b) {
    return text(to_json(measure(s, pair_from(a, b))));
  });
  m.def("gram_under", [](const ProductBasis& s, const ComplexMatrix& a, const ComplexMatrix& b) {
    return gram_under(s, a, b);
  });
  m.def("estimate_eta", [](const ProductBasis& s, std::size_t budget, std::uint64_t seed,
                           std::size_t restarts, std::size_t max_iterations) {
    EstimatorOptions o;
    o.budget = budget;
    o.seed = seed;
    o.restarts = restarts;
    o.max_iterations = max_iterations;
    py::gil_scoped_release release;
    return text(to_json(estimate_eta(s, o)));
  }, py::arg("basis"), py::arg("budget") = 10000, py::arg("seed") = 0, py::arg("restarts") = 0,
     py::arg("max_iterations") = 500);

  m.def("check_uv_lemma", [](int mm, int n, std::size_t trials, std::uint64_t seed) {
    return text(to_json(check_uv_lemma(mm, n, trials, seed)));
  });
  m.def("check_pair_of_tiles", [](const ProductBasis& s, std::size_t trials, std::uint64_t seed) {
    return text(to_json(check_pair_of_tiles(s, trials, seed)));
  });
  m.def("check_domino_rigidity", [](std::size_t trials, std::uint64_t seed) {
    return text(to_json(check_domino_rigidity(trials, seed)));
  });
  m.def("check_dimbox_rigidity", [](const std::string& tiling, std::size_t trials, std::uint64_t seed) {
    return text(to_json(check_dimbox_rigidity(tiling_from(tiling), trials, seed)));
  });
  m.def("check_rotated_chain", [](double theta, std::size_t trials, std::uint64_t seed) {
    return text(to_json(check_rotated_chain(theta, trials, seed)));
  });

  m.def("baseline_protocol", [](const ProductBasis& s) { return text(protocol_to_json(baseline_protocol(s))); });
  m.def("one_round_protocol", [](int dA, int dB) { return text(protocol_to_json(one_round_protocol(dA, dB))); });
  m.def("validate_protocol", [](const std::string& p) { return text(to_json(validate(protocol_from(p)))); });
  m.def("evaluate_error", [](const std::string& p, const ProductBasis& s) {
    return evaluate_error(protocol_from(p), s, TreeLabels{});
  });
  m.def("interpolate", [](const std::string& p, const ProductBasis& s, double eps) {
    return text(protocol_to_json(interpolate(protocol_from(p), s, eps).tree));
  });
  m.def("leaf_distribution_tv", [](const std::string& x, const std::string& y, const ProductBasis& s) {
    return leaf_distribution_tv(protocol_from(x), protocol_from(y), s);
  });
}
