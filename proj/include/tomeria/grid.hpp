#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tomeria {

/// A grid coordinate. Ordering is row-major (y first, then x).
struct Cell {
  int x = 0;
  int y = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend std::strong_ordering operator<=>(const Cell& a, const Cell& b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

enum class Tile : std::uint8_t { Open = 0, Block = 1 };

enum class Direction { North, South, East, West };

Cell step(Cell c, Direction d);
char direction_letter(Direction d);
/// Accepts N/S/E/W (either case); throws invalid-argument otherwise.
Direction parse_direction(std::string_view text);

/// Row-major block/open grid.
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, Tile fill = Tile::Open);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return cells_.size(); }

  bool in_bounds(Cell c) const noexcept {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }
  std::size_t index_of(Cell c) const noexcept {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }
  Cell cell_of(std::size_t index) const noexcept {
    return {static_cast<int>(index % static_cast<std::size_t>(width_)),
            static_cast<int>(index / static_cast<std::size_t>(width_))};
  }

  Tile at(Cell c) const noexcept { return cells_[index_of(c)]; }
  Tile at(std::size_t index) const noexcept { return cells_[index]; }
  bool is_open(Cell c) const noexcept { return in_bounds(c) && at(c) == Tile::Open; }
  void set(Cell c, Tile t) noexcept { cells_[index_of(c)] = t; }
  void set(std::size_t index, Tile t) noexcept { cells_[index] = t; }

  std::span<const Tile> cells() const noexcept { return cells_; }
  std::span<Tile> cells() noexcept { return cells_; }

  std::size_t count(Tile t) const noexcept;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Tile> cells_;
};

/// Cells whose tile differs between two equally sized grids, row-major.
std::vector<Cell> diff_cells(const Grid& a, const Grid& b);

/// Number of 4-adjacent cell pairs with one OPEN and one BLOCK cell.
std::size_t boundary_pairs(const Grid& grid);

/// 4-connected OPEN component labels. Each OPEN cell is labelled with the
/// row-major index of the smallest cell in its component; BLOCK cells get -1.
std::vector<std::int32_t> label_components(const Grid& grid);

/// Size of the largest 4-connected OPEN component (0 if none).
std::size_t largest_component_size(const Grid& grid);

}  // namespace tomeria
