#include "tomeria/grid.hpp"

#include <algorithm>
#include <unordered_map>

#include "tomeria/error.hpp"

namespace tomeria {

Cell step(Cell c, Direction d) {
  switch (d) {
    case Direction::North: return {c.x, c.y - 1};
    case Direction::South: return {c.x, c.y + 1};
    case Direction::East: return {c.x + 1, c.y};
    case Direction::West: return {c.x - 1, c.y};
  }
  return c;
}

char direction_letter(Direction d) {
  switch (d) {
    case Direction::North: return 'N';
    case Direction::South: return 'S';
    case Direction::East: return 'E';
    case Direction::West: return 'W';
  }
  return '?';
}

Direction parse_direction(std::string_view text) {
  if (text.size() == 1) {
    switch (text[0]) {
      case 'N': case 'n': return Direction::North;
      case 'S': case 's': return Direction::South;
      case 'E': case 'e': return Direction::East;
      case 'W': case 'w': return Direction::West;
      default: break;
    }
  }
  fail(ErrorCode::InvalidArgument, "direction must be one of N, S, E, W");
}

Grid::Grid(int width, int height, Tile fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    fail(ErrorCode::InvalidArgument, "grid dimensions must be positive");
  }
  cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

std::size_t Grid::count(Tile t) const noexcept {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), t));
}

std::vector<Cell> diff_cells(const Grid& a, const Grid& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    fail(ErrorCode::InvalidArgument, "diff of grids with different dimensions");
  }
  std::vector<Cell> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.at(i) != b.at(i)) out.push_back(a.cell_of(i));
  }
  return out;
}

std::size_t boundary_pairs(const Grid& grid) {
  std::size_t pairs = 0;
  const int w = grid.width();
  const int h = grid.height();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Tile t = grid.at(Cell{x, y});
      if (x + 1 < w && grid.at(Cell{x + 1, y}) != t) ++pairs;
      if (y + 1 < h && grid.at(Cell{x, y + 1}) != t) ++pairs;
    }
  }
  return pairs;
}

namespace {

// Union-find over row-major indices; the root of each set is kept at its
// smallest member so that the final label is the component's minimum cell.
std::int32_t find_root(std::vector<std::int32_t>& parent, std::int32_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

void unite(std::vector<std::int32_t>& parent, std::int32_t a, std::int32_t b) {
  a = find_root(parent, a);
  b = find_root(parent, b);
  if (a == b) return;
  if (a < b) {
    parent[b] = a;
  } else {
    parent[a] = b;
  }
}

}  // namespace

std::vector<std::int32_t> label_components(const Grid& grid) {
  const int w = grid.width();
  const int h = grid.height();
  std::vector<std::int32_t> parent(grid.size(), -1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto i = static_cast<std::int32_t>(y * w + x);
      if (grid.at(static_cast<std::size_t>(i)) != Tile::Open) continue;
      parent[i] = i;
      if (x > 0 && parent[i - 1] >= 0) unite(parent, i - 1, i);
      if (y > 0 && parent[i - w] >= 0) unite(parent, i - w, i);
    }
  }
  for (std::size_t i = 0; i < parent.size(); ++i) {
    if (parent[i] >= 0) parent[i] = find_root(parent, static_cast<std::int32_t>(i));
  }
  return parent;
}

std::size_t largest_component_size(const Grid& grid) {
  const auto labels = label_components(grid);
  std::unordered_map<std::int32_t, std::size_t> sizes;
  std::size_t best = 0;
  for (auto l : labels) {
    if (l < 0) continue;
    best = std::max(best, ++sizes[l]);
  }
  return best;
}

}  // namespace tomeria
