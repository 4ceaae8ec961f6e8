#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "nllab/bases.hpp"
#include "nllab/matkernel.hpp"

namespace nllab {

/// G_ii must exceed this fraction of tr(a) tr(b) for the disturbance to be
/// defined.
inline constexpr double kDiagFloorRel = 1e-12;
/// Information gain at or below this leaves the nonlocality ratio undefined.
inline constexpr double kRatioFloor = 1e-9;

/// Local operators a on C^dA and b on C^dB.
struct MeasurementPair {
  PsdOperator a;
  PsdOperator b;
};

/// G_ij = <alpha_i|a|alpha_j> <beta_i|b|beta_j>.
ComplexMatrix gram_under(const ProductBasis& s, const MeasurementPair& m);
ComplexMatrix gram_under(const ProductBasis& s, const ComplexMatrix& a, const ComplexMatrix& b);

/// All quantities derivable from G alone, without throwing.
struct GramSummary {
  double diag_sum = 0.0;
  double diag_max = 0.0;
  std::size_t argmax = 0;       // lowest index on ties
  double diag_min = 0.0;
  std::optional<double> delta;  // nullopt if some G_ii <= floor
  std::optional<double> info_gain;
  std::optional<double> ratio;
};

/// `scale` is tr(a) tr(b); the diagonal floor is kDiagFloorRel * scale.
GramSummary summarize_gram(const ComplexMatrix& g, double scale,
                           double ratio_floor = kRatioFloor);

/// max_{i != j} |G_ij| / sqrt(G_ii G_jj). Throws UndefinedQuantity when some
/// G_ii <= kDiagFloorRel * tr(a ⊗ b).
double disturbance(const ProductBasis& s, const MeasurementPair& m);

/// max_k G_kk / sum_j G_jj - 1/n. Throws UndefinedQuantity when the
/// total probability vanishes.
double info_gain(const ProductBasis& s, const MeasurementPair& m);

/// disturbance / info_gain, or nullopt when either is undefined or the
/// information gain is at most ratio_floor.
std::optional<double> nonlocality_ratio(const ProductBasis& s, const MeasurementPair& m,
                                        double ratio_floor = kRatioFloor);

/// ||(a ⊗ b)/tr(a ⊗ b) - I/n||_max, evaluated factor-wise.
double rigidity_deviation(const MeasurementPair& m, std::size_t n);
double rigidity_deviation(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t n);

struct MeasureReport {
  ComplexMatrix G;
  std::optional<double> delta;
  double info_gain = 0.0;
  std::optional<double> ratio;
  double rigidity_dev = 0.0;
  bool valid = false;  // all G_ii above the diagonal floor
  std::optional<std::uint64_t> seed;
};

MeasureReport measure(const ProductBasis& s, const MeasurementPair& m,
                      std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace nllab
