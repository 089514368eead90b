#pragma once

#include "colex/grid.hpp"

#include <cstdint>
#include <string>

namespace colex {

enum class MapKind { Maze, FenceAndClusters, UniformRandom };

std::string to_string(MapKind kind);
MapKind map_kind_from_string(const std::string& name);

struct MapGenConfig {
  MapKind kind = MapKind::UniformRandom;
  std::uint64_t seed = 0;

  int width = 200;
  int height = 200;
  double resolution = 0.1;

  // Fraction of interior cells to fill (UniformRandom).
  double obstacle_density = 0.10;
  // Maze passage width and wall thickness, meters.
  double corridor_width = 3.0;
  double wall_thickness = 0.2;
  // Fence and clusters.
  int cluster_count = 8;
  double cluster_radius = 0.6;
  int fence_gaps = 2;
  double fence_gap_width = 1.6;
  // UniformRandom rectangle side range, meters.
  double rect_min_side = 0.2;
  double rect_max_side = 1.0;

  // Obstacle-free square kept at the lower-left start corner, meters.
  double start_clearance = 1.5;
  // Occupied cells with no Free neighbour, as a fraction of all cells.
  double max_interior_fraction = 0.04;
  int max_attempts = 4000;
};

// Ground-truth world. Border ring Occupied, free space 4-connected, obstacle
// interiors capped. Throws GenerationError naming the constraint that could
// not be met.
OccupancyGrid generate_map(const MapGenConfig& config);

}  // namespace colex
