#pragma once

#include "colex/grid.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

namespace colex {

// Frontier A: Unknown, 4-adjacent to a Free cell (reachable by both robots).
// Frontier B: Unknown, 4-adjacent to an Occupied cell and to no Free cell
// (only the aerial view resolves it). A cell touching both Free and Occupied
// is frontier A only.
struct FrontierSet {
  std::vector<CellIndex> frontier_a;  // ascending
  std::vector<CellIndex> frontier_b;  // ascending
};

enum class FrontierLabel : std::uint8_t { None = 0, A = 1, B = 2 };

struct FrontierLine {
  std::vector<CellIndex> cells;  // ascending
  double length = 0.0;           // cells.size() * resolution, meters
};

FrontierLabel classify_cell(const OccupancyGrid& belief, CellIndex i);

FrontierSet extract_frontiers(const OccupancyGrid& belief);

// Per-cell labels for a frontier set, indexed like the grid.
std::vector<FrontierLabel> label_frontiers(const FrontierSet& fs, CellIndex grid_size);

// 8-connected components of `cells`, each sorted ascending, ordered by their
// smallest member.
std::vector<std::vector<CellIndex>> cluster_8connected(std::span<const CellIndex> cells,
                                                       const OccupancyGrid& grid);

std::vector<FrontierLine> cluster_frontier_lines(const FrontierSet& fs, const OccupancyGrid& grid);

Eigen::Vector2d centroid(std::span<const CellIndex> cells, const OccupancyGrid& grid);

}  // namespace colex
