#include "nllab/bases.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nllab/errors.hpp"

namespace nllab {
namespace {

ComplexVector basis_vector(int dim, int i) {
  ComplexVector v = ComplexVector::Zero(dim);
  v[i] = 1.0;
  return v;
}

// cos(t)|i> + sin(t)|j>
ComplexVector rotated(int dim, int i, int j, double c, double s) {
  ComplexVector v = ComplexVector::Zero(dim);
  v[i] = c;
  v[j] = s;
  return v;
}

std::vector<int> support_of(const ComplexVector& v) {
  std::vector<int> out;
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > kSupportThreshold) out.push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace

ComplexVector ProductState::full() const {
  ComplexVector out(alice.size() * bob.size());
  for (Index i = 0; i < alice.size(); ++i) out.segment(i * bob.size(), bob.size()) = alice[i] * bob;
  return out;
}

ProductBasis::ProductBasis(int dA, int dB, std::vector<ProductState> states)
    : dA_(dA), dB_(dB), states_(std::move(states)) {
  if (dA < 1 || dB < 1) throw ContractViolation("ProductBasis: dimensions must be positive");
  if (states_.empty()) throw ContractViolation("ProductBasis: no states");
  const auto n = static_cast<Index>(states_.size());
  alice_.resize(dA, n);
  bob_.resize(dB, n);
  for (Index i = 0; i < n; ++i) {
    const ProductState& s = states_[i];
    if (s.alice.size() != dA || s.bob.size() != dB) {
      throw ContractViolation("ProductBasis: state " + std::to_string(i) +
                              " has wrong local dimensions");
    }
    if (std::abs(s.alice.norm() - 1.0) > kOrthonormalityTol ||
        std::abs(s.bob.norm() - 1.0) > kOrthonormalityTol) {
      throw ContractViolation("ProductBasis: state " + std::to_string(i) +
                              " has a factor that is not unit norm");
    }
    alice_.col(i) = s.alice;
    bob_.col(i) = s.bob;
  }
  const ComplexMatrix overlaps =
      (alice_.adjoint() * alice_).cwiseProduct(bob_.adjoint() * bob_);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j) max_overlap_ = std::max(max_overlap_, std::abs(overlaps(i, j)));
    }
  }
}

ComplexMatrix ProductBasis::gram() const {
  const auto n = static_cast<Index>(size());
  ComplexMatrix full(static_cast<Index>(dA_) * dB_, n);
  for (Index i = 0; i < n; ++i) full.col(i) = states_[i].full();
  return full.adjoint() * full;
}

ProductBasis domino_basis() {
  const double h = std::numbers::sqrt2 / 2.0;
  auto e = [](int i) { return basis_vector(3, i); };
  auto pm = [&](int i, int j, double sign) { return rotated(3, i, j, h, sign * h); };
  std::vector<ProductState> s = {
      {e(1), e(1), 0},
      {e(0), pm(0, 1, +1), 1},
      {e(0), pm(0, 1, -1), 2},
      {e(2), pm(1, 2, +1), 3},
      {e(2), pm(1, 2, -1), 4},
      {pm(1, 2, +1), e(0), 5},
      {pm(1, 2, -1), e(0), 6},
      {pm(0, 1, +1), e(2), 7},
      {pm(0, 1, -1), e(2), 8},
  };
  return ProductBasis(3, 3, std::move(s));
}

ProductBasis rotated_domino_basis(double t1, double t2, double t3, double t4) {
  for (double t : {t1, t2, t3, t4}) {
    if (!(t >= 0.0 && t <= std::numbers::pi / 4.0 + 1e-15)) {
      throw DomainError("rotated_domino_basis: angle " + std::to_string(t) +
                        " outside [0, pi/4]");
    }
  }
  auto e = [](int i) { return basis_vector(3, i); };
  // Plus state cos|i> + sin|j>, minus state -sin|i> + cos|j>.
  auto plus = [](int i, int j, double t) { return rotated(3, i, j, std::cos(t), std::sin(t)); };
  auto minus = [](int i, int j, double t) { return rotated(3, i, j, -std::sin(t), std::cos(t)); };
  std::vector<ProductState> s = {
      {e(1), e(1), 0},
      {e(0), plus(0, 1, t1), 1},
      {e(0), minus(0, 1, t1), 2},
      {e(2), plus(1, 2, t2), 3},
      {e(2), minus(1, 2, t2), 4},
      {plus(1, 2, t3), e(0), 5},
      {minus(1, 2, t3), e(0), 6},
      {plus(0, 1, t4), e(2), 7},
      {minus(0, 1, t4), e(2), 8},
  };
  return ProductBasis(3, 3, std::move(s));
}

ProductBasis standard_basis(int dA, int dB) {
  std::vector<ProductState> s;
  for (int r = 0; r < dA; ++r) {
    for (int c = 0; c < dB; ++c) {
      s.push_back({basis_vector(dA, r), basis_vector(dB, c), r * dB + c});
    }
  }
  return ProductBasis(dA, dB, std::move(s));
}

ProductBasis domino_type_basis(const Tiling& t, const std::map<std::size_t, double>& angles) {
  if (!t.is_domino_type()) {
    throw ContractViolation("domino_type_basis: tiling has a tile of area > 2");
  }
  std::vector<ProductState> states;
  for (std::size_t k = 0; k < t.tiles().size(); ++k) {
    const Tile& tile = t.tiles()[k];
    const auto found = angles.find(k);
    const double theta = found == angles.end() ? kDefaultTileAngle : found->second;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const auto& rows = tile.rows();
    const auto& cols = tile.cols();
    const int label0 = static_cast<int>(states.size());
    if (tile.area() == 1) {
      states.push_back({basis_vector(t.dA(), rows[0]), basis_vector(t.dB(), cols[0]), label0});
    } else if (rows.size() == 1) {
      const ComplexVector a = basis_vector(t.dA(), rows[0]);
      states.push_back({a, rotated(t.dB(), cols[0], cols[1], c, s), label0});
      states.push_back({a, rotated(t.dB(), cols[0], cols[1], s, -c), label0 + 1});
    } else {
      const ComplexVector b = basis_vector(t.dB(), cols[0]);
      states.push_back({rotated(t.dA(), rows[0], rows[1], c, s), b, label0});
      states.push_back({rotated(t.dA(), rows[0], rows[1], s, -c), b, label0 + 1});
    }
  }
  return ProductBasis(t.dA(), t.dB(), std::move(states));
}

Tile support_tile(const ProductState& s) {
  auto rows = support_of(s.alice);
  auto cols = support_of(s.bob);
  if (rows.empty() || cols.empty()) {
    throw ValidationError("product state has empty support");
  }
  return Tile(std::move(rows), std::move(cols));
}

Tiling induced_tiling(const ProductBasis& b) {
  std::vector<Tile> distinct;
  std::vector<std::size_t> multiplicity;
  for (const ProductState& s : b.states()) {
    Tile tile = support_tile(s);
    bool placed = false;
    for (std::size_t k = 0; k < distinct.size(); ++k) {
      if (distinct[k] == tile) {
        ++multiplicity[k];
        placed = true;
        break;
      }
      for (Cell c : tile.cells()) {
        if (distinct[k].contains(c)) {
          throw ValidationError("supports overlap partially at cell (" +
                                    std::to_string(c.row) + "," + std::to_string(c.col) +
                                    "); the states do not induce a tiling",
                                ValidationError::Cell{c.row, c.col});
        }
      }
    }
    if (!placed) {
      distinct.push_back(std::move(tile));
      multiplicity.push_back(1);
    }
  }
  if (b.is_complete()) {
    for (std::size_t k = 0; k < distinct.size(); ++k) {
      if (multiplicity[k] != distinct[k].area()) {
        const Cell c = distinct[k].first_cell();
        throw ValidationError("tile at (" + std::to_string(c.row) + "," +
                                  std::to_string(c.col) + ") of area " +
                                  std::to_string(distinct[k].area()) + " is induced by " +
                                  std::to_string(multiplicity[k]) + " states",
                              ValidationError::Cell{c.row, c.col});
      }
    }
  }
  return Tiling(b.dA(), b.dB(), std::move(distinct),
                b.is_complete() ? Tiling::Coverage::Full : Tiling::Coverage::Partial);
}

}  // namespace nllab
