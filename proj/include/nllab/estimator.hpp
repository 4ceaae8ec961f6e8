#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nllab/bases.hpp"
#include "nllab/measures.hpp"

namespace nllab {

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
};

/// Derivative-free local minimization (GSL nmsimplex2rand) with an initial
/// simplex of edge `step`. Stops at max_iterations or when the simplex size
/// drops below size_tol.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0, double step,
                             std::size_t max_iterations, double size_tol);

/// a = |alpha_i><alpha_i| + eps I, b = |beta_i><beta_i| + eps I.
MeasurementPair upper_bound_construction(const ProductBasis& s, std::size_t i, double eps);

struct EstimatorOptions {
  std::size_t budget = 10000;  // raw samples
  std::uint64_t seed = 0;
  /// Local refinements, started from the best raw samples. 0 means budget/100.
  std::size_t restarts = 0;
  std::size_t max_iterations = 500;
  /// Construction points added to the raw samples, for every state index.
  std::vector<double> eps_list = {1e-4, 1e-5, 1e-6};
  /// Known lower bound on eta for this basis, copied into the result.
  std::optional<double> certified_lower;
  std::string basis_id = "custom";
};

struct TracePoint {
  std::size_t iteration = 0;  // cumulative refinement iteration
  double ratio = 0.0;         // best ratio seen so far
};

struct EtaEstimate {
  std::string basis_id;
  std::size_t samples = 0;       // raw samples drawn, construction points included
  std::size_t evaluations = 0;   // every ratio evaluation, refinement included
  std::size_t undefined = 0;     // evaluations with undefined ratio
  double best_ratio = 0.0;
  std::optional<MeasurementPair> best_pair;  // normalized to unit trace
  /// Smallest defined ratio over every evaluation, accepted or not.
  double min_observed_ratio = 0.0;
  std::optional<double> certified_lower;
  std::uint64_t seed = 0;
  std::vector<TracePoint> refinement_trace;
};

/// Upper estimate of the nonlocality constant: minimum of the ratio over
/// sampled PSD pairs followed by Nelder-Mead refinement of the factors A, B
/// with a = A^dagger A, b = B^dagger B. Deterministic given the seed.
/// Throws EstimationFailed when no sample has a defined ratio.
EtaEstimate estimate_eta(const ProductBasis& s, const EstimatorOptions& options);

}  // namespace nllab
