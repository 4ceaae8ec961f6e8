#include "nllab/tiling.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

#include "nllab/errors.hpp"

namespace nllab {
namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::string cell_text(Cell c) {
  return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
}

bool connected(const AdjacencyList& graph) {
  if (graph.empty()) return true;
  std::vector<char> seen(graph.size(), 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : graph[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        queue.push_back(w);
      }
    }
  }
  return count == graph.size();
}

std::optional<int> diameter_of(const AdjacencyList& graph) {
  int best = 0;
  for (const auto& row : all_pairs_distances(graph)) {
    for (int d : row) {
      if (d < 0) return std::nullopt;
      best = std::max(best, d);
    }
  }
  return best;
}

}  // namespace

Tile::Tile(std::vector<int> rows, std::vector<int> cols)
    : rows_(sorted_unique(std::move(rows))), cols_(sorted_unique(std::move(cols))) {
  if (rows_.empty() || cols_.empty()) {
    throw ValidationError("tile must have at least one row and one column");
  }
}

bool Tile::contains(Cell c) const {
  return std::binary_search(rows_.begin(), rows_.end(), c.row) &&
         std::binary_search(cols_.begin(), cols_.end(), c.col);
}

std::vector<Cell> Tile::cells() const {
  std::vector<Cell> out;
  out.reserve(area());
  for (int r : rows_) {
    for (int c : cols_) out.push_back({r, c});
  }
  return out;
}

Tiling::Tiling(int dA, int dB, std::vector<Tile> tiles, Coverage coverage)
    : dA_(dA), dB_(dB), tiles_(std::move(tiles)) {
  if (dA < 1 || dB < 1) throw ValidationError("grid dimensions must be positive");
  std::sort(tiles_.begin(), tiles_.end(), [](const Tile& x, const Tile& y) {
    return x.first_cell() < y.first_cell();
  });
  owner_.assign(static_cast<std::size_t>(dA) * dB, -1);
  for (std::size_t t = 0; t < tiles_.size(); ++t) {
    for (Cell c : tiles_[t].cells()) {
      if (c.row < 0 || c.row >= dA || c.col < 0 || c.col >= dB) {
        throw ValidationError("tile cell " + cell_text(c) + " lies outside the " +
                                  std::to_string(dA) + "x" + std::to_string(dB) + " grid",
                              ValidationError::Cell{c.row, c.col});
      }
      int& slot = owner_[c.row * dB + c.col];
      if (slot >= 0) {
        throw ValidationError("cell " + cell_text(c) + " belongs to two tiles",
                              ValidationError::Cell{c.row, c.col});
      }
      slot = static_cast<int>(t);
      ++covered_;
    }
  }
  if (coverage == Coverage::Full && !covers_grid()) {
    for (int r = 0; r < dA; ++r) {
      for (int c = 0; c < dB; ++c) {
        if (owner_[r * dB + c] < 0) {
          throw ValidationError("cell " + cell_text({r, c}) + " is not covered by any tile",
                                ValidationError::Cell{r, c});
        }
      }
    }
  }
}

bool Tiling::is_domino_type() const {
  return std::all_of(tiles_.begin(), tiles_.end(),
                     [](const Tile& t) { return t.area() <= 2; });
}

std::size_t Tiling::max_tile_area() const {
  std::size_t best = 0;
  for (const Tile& t : tiles_) best = std::max(best, t.area());
  return best;
}

std::string Tiling::to_text() const {
  std::vector<std::string> names(tiles_.size());
  for (std::size_t t = 0; t < tiles_.size(); ++t) names[t] = "T" + std::to_string(t);
  std::size_t width = 1;
  for (const auto& n : names) width = std::max(width, n.size());
  std::ostringstream out;
  for (int r = 0; r < dA_; ++r) {
    for (int c = 0; c < dB_; ++c) {
      const int owner = owner_[r * dB_ + c];
      std::string label = owner < 0 ? "." : names[owner];
      if (c + 1 < dB_) label.resize(width, ' ');
      out << label << (c + 1 < dB_ ? " " : "");
    }
    out << '\n';
  }
  return out.str();
}

std::vector<std::vector<int>> all_pairs_distances(const AdjacencyList& graph) {
  const int n = static_cast<int>(graph.size());
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  for (int s = 0; s < n; ++s) {
    auto& d = dist[s];
    d[s] = 0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int w : graph[v]) {
        if (d[w] < 0) {
          d[w] = d[v] + 1;
          queue.push_back(w);
        }
      }
    }
  }
  return dist;
}

TilingAnalysis analyze(const Tiling& t) {
  if (!t.covers_grid()) {
    for (int r = 0; r < t.dA(); ++r) {
      for (int c = 0; c < t.dB(); ++c) {
        if (t.tile_at({r, c}) < 0) {
          throw ValidationError("cannot analyze: cell " + cell_text({r, c}) +
                                    " is not covered by any tile",
                                ValidationError::Cell{r, c});
        }
      }
    }
  }
  TilingAnalysis out;
  out.row_graph.assign(t.dA(), {});
  out.col_graph.assign(t.dB(), {});
  // Rows i, j are adjacent iff some tile contains both (so shares a column);
  // every tile is a full R x C block, so this is "some tile has both rows".
  auto link_all = [](AdjacencyList& graph, const std::vector<int>& vertices) {
    for (std::size_t x = 0; x < vertices.size(); ++x) {
      for (std::size_t y = x + 1; y < vertices.size(); ++y) {
        graph[vertices[x]].push_back(vertices[y]);
        graph[vertices[y]].push_back(vertices[x]);
      }
    }
  };
  for (const Tile& tile : t.tiles()) {
    link_all(out.row_graph, tile.rows());
    link_all(out.col_graph, tile.cols());
  }
  for (auto* graph : {&out.row_graph, &out.col_graph}) {
    for (auto& adj : *graph) adj = sorted_unique(std::move(adj));
  }
  out.row_connected = connected(out.row_graph);
  out.col_connected = connected(out.col_graph);
  out.irreducible = out.row_connected && out.col_connected;
  out.row_diameter = diameter_of(out.row_graph);
  out.col_diameter = diameter_of(out.col_graph);
  if (out.row_diameter && out.col_diameter) {
    out.diameter = std::max(*out.row_diameter, *out.col_diameter);
  }
  out.domino_type = t.is_domino_type();
  out.max_tile_area = t.max_tile_area();
  return out;
}

Tiling parse_tiling(std::string_view text) {
  std::vector<std::vector<std::string>> grid;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream tokens(line);
    std::vector<std::string> row;
    for (std::string tok; tokens >> tok;) row.push_back(tok);
    grid.push_back(std::move(row));
  }
  if (grid.empty()) throw ParseError("tiling text has no rows");
  const std::size_t width = grid.front().size();
  for (std::size_t r = 0; r < grid.size(); ++r) {
    if (grid[r].size() != width) {
      throw ParseError("ragged tiling: row " + std::to_string(r) + " has " +
                       std::to_string(grid[r].size()) + " labels, expected " +
                       std::to_string(width));
    }
  }
  const int dA = static_cast<int>(grid.size());
  const int dB = static_cast<int>(width);

  // Labels in first-appearance order so error messages are deterministic.
  std::vector<std::string> order;
  std::map<std::string, std::vector<Cell>> cells_of;
  bool partial = false;
  for (int r = 0; r < dA; ++r) {
    for (int c = 0; c < dB; ++c) {
      const std::string& label = grid[r][c];
      if (label == ".") {
        partial = true;
        continue;
      }
      auto [it, inserted] = cells_of.try_emplace(label);
      if (inserted) order.push_back(label);
      it->second.push_back({r, c});
    }
  }

  std::vector<Tile> tiles;
  for (const std::string& label : order) {
    const auto& cells = cells_of[label];
    std::vector<int> rows, cols;
    for (Cell c : cells) {
      rows.push_back(c.row);
      cols.push_back(c.col);
    }
    Tile tile(rows, cols);
    if (tile.area() != cells.size()) {
      for (Cell c : tile.cells()) {
        if (grid[c.row][c.col] != label) {
          throw ValidationError("label '" + label + "' is not submatrix-shaped: cell " +
                                    cell_text(c) + " is labeled '" + grid[c.row][c.col] +
                                    "'",
                                ValidationError::Cell{c.row, c.col});
        }
      }
    }
    tiles.push_back(std::move(tile));
  }
  return Tiling(dA, dB, std::move(tiles),
                partial ? Tiling::Coverage::Partial : Tiling::Coverage::Full);
}

void for_each_domino_tiling(int dA, int dB, bool irreducible_only,
                            const std::function<bool(const Tiling&)>& visit) {
  if (dA < 1 || dB < 1) throw DomainError("grid dimensions must be positive");
  if (dA * dB > kMaxEnumerationCells) {
    throw DomainError("refusing to enumerate tilings of a " + std::to_string(dA) + "x" +
                      std::to_string(dB) + " grid (more than " +
                      std::to_string(kMaxEnumerationCells) + " cells)");
  }
  const int n = dA * dB;
  std::vector<char> used(n, 0);
  std::vector<Tile> placed;
  bool stop = false;

  // Always fill the first free cell in row-major order; each tiling then
  // has exactly one placement sequence, so there are no duplicates.
  std::function<void(int)> fill = [&](int from) {
    if (stop) return;
    int idx = from;
    while (idx < n && used[idx]) ++idx;
    if (idx == n) {
      Tiling tiling(dA, dB, placed);
      if (!irreducible_only || analyze(tiling).irreducible) {
        if (!visit(tiling)) stop = true;
      }
      return;
    }
    const int r = idx / dB;
    const int c = idx % dB;
    used[idx] = 1;
    placed.emplace_back(std::vector<int>{r}, std::vector<int>{c});
    fill(idx + 1);
    placed.pop_back();
    if (c + 1 < dB && !used[idx + 1]) {
      used[idx + 1] = 1;
      placed.emplace_back(std::vector<int>{r}, std::vector<int>{c, c + 1});
      fill(idx + 2);
      placed.pop_back();
      used[idx + 1] = 0;
    }
    if (r + 1 < dA && !used[idx + dB]) {
      used[idx + dB] = 1;
      placed.emplace_back(std::vector<int>{r, r + 1}, std::vector<int>{c});
      fill(idx + 1);
      placed.pop_back();
      used[idx + dB] = 0;
    }
    used[idx] = 0;
  };
  fill(0);
}

std::vector<Tiling> enumerate_domino_tilings(int dA, int dB, bool irreducible_only) {
  std::vector<Tiling> out;
  for_each_domino_tiling(dA, dB, irreducible_only, [&](const Tiling& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

}  // namespace nllab
