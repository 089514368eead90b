#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace colex {

enum class CellState : std::uint8_t { Unknown = 0, Free = 1, Occupied = 2 };

// Row-major linear cell index: y * width + x.
using CellIndex = std::int32_t;

struct Cell {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

inline constexpr int kDx4[4] = {1, -1, 0, 0};
inline constexpr int kDy4[4] = {0, 0, 1, -1};
inline constexpr int kDx8[8] = {1, -1, 0, 0, 1, 1, -1, -1};
inline constexpr int kDy8[8] = {0, 0, 1, -1, 1, -1, 1, -1};

// Dense 2D occupancy lattice. Cell (0,0) has its lower-left corner at
// `origin`; x grows with column, y with row.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int width, int height, double resolution,
                CellState fill = CellState::Unknown,
                Eigen::Vector2d origin = Eigen::Vector2d::Zero());

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  const Eigen::Vector2d& origin() const { return origin_; }
  CellIndex size() const { return static_cast<CellIndex>(cells_.size()); }

  bool in_bounds(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  bool in_bounds(Cell c) const { return in_bounds(c.x, c.y); }
  CellIndex index(int x, int y) const { return y * width_ + x; }
  CellIndex index(Cell c) const { return index(c.x, c.y); }
  Cell cell(CellIndex i) const { return {i % width_, i / width_}; }

  bool on_border(CellIndex i) const {
    const Cell c = cell(i);
    return c.x == 0 || c.y == 0 || c.x == width_ - 1 || c.y == height_ - 1;
  }

  CellState operator[](CellIndex i) const { return cells_[i]; }
  CellState at(int x, int y) const { return cells_[index(x, y)]; }
  CellState at(Cell c) const { return at(c.x, c.y); }
  void set(CellIndex i, CellState s) { cells_[i] = s; }
  void set(int x, int y, CellState s) { cells_[index(x, y)] = s; }

  std::span<const CellState> cells() const { return cells_; }

  std::optional<Cell> world_to_cell(const Eigen::Vector2d& p) const;
  Eigen::Vector2d cell_to_world(Cell c) const;
  Eigen::Vector2d cell_to_world(CellIndex i) const { return cell_to_world(cell(i)); }

  // World-frame extent [origin, origin + size * resolution].
  Eigen::Vector2d upper_corner() const;

  CellIndex count(CellState s) const;

  friend bool operator==(const OccupancyGrid& a, const OccupancyGrid& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ &&
           a.resolution_ == b.resolution_ && a.origin_ == b.origin_ &&
           a.cells_ == b.cells_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 0.1;
  Eigen::Vector2d origin_ = Eigen::Vector2d::Zero();
  std::vector<CellState> cells_;
};

// Number of 4-connected components of Free cells.
int count_free_components(const OccupancyGrid& grid);

// Occupied cells with no 4-adjacent Free cell.
CellIndex count_obstacle_interior(const OccupancyGrid& grid);

}  // namespace colex
