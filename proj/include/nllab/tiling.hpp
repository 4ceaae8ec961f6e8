#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nllab {

struct Cell {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// A submatrix-shaped region rows x cols of the dA x dB grid. Rows and
/// columns are kept sorted and unique; neither may be empty.
class Tile {
 public:
  Tile(std::vector<int> rows, std::vector<int> cols);

  const std::vector<int>& rows() const { return rows_; }
  const std::vector<int>& cols() const { return cols_; }
  std::size_t area() const { return rows_.size() * cols_.size(); }
  bool contains(Cell c) const;
  /// Smallest cell in row-major order.
  Cell first_cell() const { return {rows_.front(), cols_.front()}; }
  std::vector<Cell> cells() const;

  friend bool operator==(const Tile&, const Tile&) = default;

 private:
  std::vector<int> rows_;
  std::vector<int> cols_;
};

/// Partition of (part of) a dA x dB grid into disjoint tiles, stored in
/// canonical order: tiles sorted by their first cell in row-major scan.
class Tiling {
 public:
  enum class Coverage { Full, Partial };

  /// Throws ValidationError naming the cell when tiles overlap, leave the
  /// grid, or (for Coverage::Full) leave a cell uncovered.
  Tiling(int dA, int dB, std::vector<Tile> tiles, Coverage coverage = Coverage::Full);

  int dA() const { return dA_; }
  int dB() const { return dB_; }
  const std::vector<Tile>& tiles() const { return tiles_; }
  bool covers_grid() const { return covered_ == static_cast<std::size_t>(dA_) * dB_; }

  /// Index of the tile holding the cell, or -1.
  int tile_at(Cell c) const { return owner_[c.row * dB_ + c.col]; }

  bool is_domino_type() const;
  std::size_t max_tile_area() const;

  /// Canonical text form: tiles renamed T0..Tk in scan order, '.' for
  /// uncovered cells.
  std::string to_text() const;

  friend bool operator==(const Tiling& x, const Tiling& y) {
    return x.dA_ == y.dA_ && x.dB_ == y.dB_ && x.tiles_ == y.tiles_;
  }

 private:
  int dA_;
  int dB_;
  std::vector<Tile> tiles_;
  std::vector<int> owner_;
  std::size_t covered_ = 0;
};

using AdjacencyList = std::vector<std::vector<int>>;

struct TilingAnalysis {
  AdjacencyList row_graph;
  AdjacencyList col_graph;
  bool row_connected = false;
  bool col_connected = false;
  bool irreducible = false;
  /// Graph diameters; nullopt stands for infinite (disconnected graph).
  std::optional<int> row_diameter;
  std::optional<int> col_diameter;
  std::optional<int> diameter;
  bool domino_type = false;
  std::size_t max_tile_area = 0;
};

/// Row/column graphs, irreducibility, diameter. Requires a full cover.
TilingAnalysis analyze(const Tiling& t);

/// BFS distances from every vertex; -1 marks unreachable pairs.
std::vector<std::vector<int>> all_pairs_distances(const AdjacencyList& graph);

/// Parses the grid-label format: one line per Alice row, whitespace
/// separated labels, lines starting with '#' ignored.
Tiling parse_tiling(std::string_view text);

inline constexpr int kMaxEnumerationCells = 30;

/// Visits every tiling of the grid by 1x1, 1x2 and 2x1 contiguous tiles,
/// each exactly once. The visitor returns false to stop early. Grids with
/// more than kMaxEnumerationCells cells are refused with DomainError.
void for_each_domino_tiling(int dA, int dB, bool irreducible_only,
                            const std::function<bool(const Tiling&)>& visit);

std::vector<Tiling> enumerate_domino_tilings(int dA, int dB, bool irreducible_only);

}  // namespace nllab
