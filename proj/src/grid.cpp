#include "colex/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace colex {

OccupancyGrid::OccupancyGrid(int width, int height, double resolution,
                             CellState fill, Eigen::Vector2d origin)
    : width_(width), height_(height), resolution_(resolution), origin_(origin) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("grid dimensions must be positive");
  if (!(resolution > 0.0)) throw std::invalid_argument("grid resolution must be positive");
  cells_.assign(static_cast<std::size_t>(width) * height, fill);
}

std::optional<Cell> OccupancyGrid::world_to_cell(const Eigen::Vector2d& p) const {
  const Eigen::Vector2d rel = (p - origin_) / resolution_;
  if (!(rel.x() >= 0.0) || !(rel.y() >= 0.0)) return std::nullopt;
  const double fx = std::floor(rel.x());
  const double fy = std::floor(rel.y());
  if (fx >= width_ || fy >= height_) return std::nullopt;
  return Cell{static_cast<int>(fx), static_cast<int>(fy)};
}

Eigen::Vector2d OccupancyGrid::cell_to_world(Cell c) const {
  return origin_ + resolution_ * Eigen::Vector2d(c.x + 0.5, c.y + 0.5);
}

Eigen::Vector2d OccupancyGrid::upper_corner() const {
  return origin_ + resolution_ * Eigen::Vector2d(width_, height_);
}

CellIndex OccupancyGrid::count(CellState s) const {
  return static_cast<CellIndex>(std::count(cells_.begin(), cells_.end(), s));
}

int count_free_components(const OccupancyGrid& grid) {
  std::vector<char> seen(grid.size(), 0);
  std::vector<CellIndex> stack;
  int components = 0;
  for (CellIndex start = 0; start < grid.size(); ++start) {
    if (seen[start] || grid[start] != CellState::Free) continue;
    ++components;
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      const Cell c = grid.cell(stack.back());
      stack.pop_back();
      for (int k = 0; k < 4; ++k) {
        const int nx = c.x + kDx4[k], ny = c.y + kDy4[k];
        if (!grid.in_bounds(nx, ny)) continue;
        const CellIndex n = grid.index(nx, ny);
        if (seen[n] || grid[n] != CellState::Free) continue;
        seen[n] = 1;
        stack.push_back(n);
      }
    }
  }
  return components;
}

CellIndex count_obstacle_interior(const OccupancyGrid& grid) {
  CellIndex interior = 0;
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (grid.at(x, y) != CellState::Occupied) continue;
      bool touches_free = false;
      for (int k = 0; k < 4 && !touches_free; ++k) {
        const int nx = x + kDx4[k], ny = y + kDy4[k];
        touches_free = grid.in_bounds(nx, ny) && grid.at(nx, ny) == CellState::Free;
      }
      if (!touches_free) ++interior;
    }
  }
  return interior;
}

}  // namespace colex
