#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "nllab/matkernel.hpp"
#include "nllab/tiling.hpp"

namespace nllab {

/// Amplitudes with magnitude at or below this are outside the support.
inline constexpr double kSupportThreshold = 1e-12;
/// Unit-norm and pairwise-overlap tolerance for product bases.
inline constexpr double kOrthonormalityTol = 1e-12;

/// |alpha>|beta> with both factors normalized.
struct ProductState {
  ComplexVector alice;
  ComplexVector bob;
  int label = 0;

  ComplexVector full() const;
};

/// Ordered set of product states on C^dA ⊗ C^dB. Construction checks
/// dimensions and unit norms; orthonormality is measured and exposed.
class ProductBasis {
 public:
  ProductBasis(int dA, int dB, std::vector<ProductState> states);

  int dA() const { return dA_; }
  int dB() const { return dB_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<ProductState>& states() const { return states_; }
  const ProductState& operator[](std::size_t i) const { return states_[i]; }

  /// dA x n matrix whose columns are the Alice factors (and likewise Bob).
  const ComplexMatrix& alice_matrix() const { return alice_; }
  const ComplexMatrix& bob_matrix() const { return bob_; }

  /// max_{i != j} |<psi_i|psi_j>| from the factorized overlaps.
  double max_overlap() const { return max_overlap_; }
  bool is_orthonormal(double tol = kOrthonormalityTol) const { return max_overlap_ <= tol; }
  bool is_complete() const { return size() == static_cast<std::size_t>(dA_) * dB_; }

  /// Full Gram matrix <psi_i|psi_j>.
  ComplexMatrix gram() const;

 private:
  int dA_;
  int dB_;
  std::vector<ProductState> states_;
  ComplexMatrix alice_;
  ComplexMatrix bob_;
  double max_overlap_ = 0.0;
};

/// The nine domino states psi_1..psi_9 (stored at indices 0..8).
ProductBasis domino_basis();

/// Rotated domino family S_3(t1, t2, t3, t4), angles in [0, pi/4].
ProductBasis rotated_domino_basis(double theta1, double theta2, double theta3,
                                  double theta4);

/// |r>|c> in row-major order.
ProductBasis standard_basis(int dA, int dB);

inline constexpr double kDefaultTileAngle = 0.7853981633974483;  // pi/4

/// Product basis for a domino-type tiling. A 1x2 tile {r} x {c1, c2} gives
/// |r>(cos t|c1> + sin t|c2>) and |r>(sin t|c1> - cos t|c2>); 2x1 tiles
/// are the same on Alice's side. Tiles are taken in canonical scan order,
/// plus-state first. `angles` maps tile index to t (default pi/4).
ProductBasis domino_type_basis(const Tiling& t,
                               const std::map<std::size_t, double>& angles = {});

/// Tile induced by a product state (support of alice x support of bob).
Tile support_tile(const ProductState& s);

/// The tiling induced by a product basis. Complete bases must induce each
/// tile of area L with exactly L states.
Tiling induced_tiling(const ProductBasis& b);

}  // namespace nllab
