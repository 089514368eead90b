#include "colex/map_gen.hpp"

#include "colex/error.hpp"
#include "colex/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace colex {

std::string to_string(MapKind kind) {
  switch (kind) {
    case MapKind::Maze: return "maze";
    case MapKind::FenceAndClusters: return "fence";
    case MapKind::UniformRandom: return "random";
  }
  return "unknown";
}

MapKind map_kind_from_string(const std::string& name) {
  if (name == "maze") return MapKind::Maze;
  if (name == "fence") return MapKind::FenceAndClusters;
  if (name == "random") return MapKind::UniformRandom;
  throw Error("unknown map kind '" + name + "'");
}

namespace {

int to_cells(double meters, double resolution) {
  return std::max(1, static_cast<int>(std::lround(meters / resolution)));
}

OccupancyGrid empty_world(const MapGenConfig& cfg) {
  if (cfg.width < 3 || cfg.height < 3) throw GenerationError("grid too small for a closed border");
  OccupancyGrid grid(cfg.width, cfg.height, cfg.resolution, CellState::Free);
  for (int x = 0; x < cfg.width; ++x) {
    grid.set(x, 0, CellState::Occupied);
    grid.set(x, cfg.height - 1, CellState::Occupied);
  }
  for (int y = 0; y < cfg.height; ++y) {
    grid.set(0, y, CellState::Occupied);
    grid.set(cfg.width - 1, y, CellState::Occupied);
  }
  return grid;
}

// Tracks why candidate obstacles were rejected so failures can name the
// binding constraint.
struct Placement {
  const MapGenConfig& cfg;
  OccupancyGrid& grid;
  int clear_cells;
  CellIndex interior_cap;
  int rejected_connectivity = 0;
  int rejected_interior = 0;

  Placement(const MapGenConfig& c, OccupancyGrid& g)
      : cfg(c),
        grid(g),
        clear_cells(static_cast<int>(std::ceil(c.start_clearance / c.resolution))),
        interior_cap(static_cast<CellIndex>(c.max_interior_fraction * g.size())) {}

  bool in_start_zone(int x, int y) const { return x <= clear_cells && y <= clear_cells; }

  // Occupies `cells` if every constraint still holds afterwards.
  bool try_place(const std::vector<CellIndex>& cells) {
    std::vector<CellIndex> changed;
    for (CellIndex i : cells) {
      const Cell c = grid.cell(i);
      if (in_start_zone(c.x, c.y)) return false;
      if (grid[i] == CellState::Free) changed.push_back(i);
    }
    if (changed.empty()) return false;
    for (CellIndex i : changed) grid.set(i, CellState::Occupied);
    if (count_free_components(grid) != 1) {
      ++rejected_connectivity;
    } else if (count_obstacle_interior(grid) > interior_cap) {
      ++rejected_interior;
    } else {
      return true;
    }
    for (CellIndex i : changed) grid.set(i, CellState::Free);
    return false;
  }

  std::string dominant_reason() const {
    return rejected_interior > rejected_connectivity
               ? "obstacle-interior cap"
               : "free-space connectivity";
  }
};

void check_invariants(const MapGenConfig& cfg, const OccupancyGrid& grid) {
  if (count_free_components(grid) != 1)
    throw GenerationError("free-space connectivity violated");
  if (count_obstacle_interior(grid) > static_cast<CellIndex>(cfg.max_interior_fraction * grid.size()))
    throw GenerationError("obstacle-interior cap violated");
}

// Splits `usable` cells into `n` spans separated by `gap` cells; returns span
// starts offset by `first`.
std::vector<int> span_starts(int first, int usable, int n, int gap, std::vector<int>& sizes) {
  const int room_total = usable - (n - 1) * gap;
  std::vector<int> starts(n);
  sizes.assign(n, room_total / n);
  for (int i = 0; i < room_total % n; ++i) ++sizes[i];
  int pos = first;
  for (int i = 0; i < n; ++i) {
    starts[i] = pos;
    pos += sizes[i] + gap;
  }
  return starts;
}

OccupancyGrid make_maze(const MapGenConfig& cfg, Rng& rng) {
  OccupancyGrid grid = empty_world(cfg);
  const int wall = to_cells(cfg.wall_thickness, cfg.resolution);
  const int corridor = to_cells(cfg.corridor_width, cfg.resolution);
  const int usable_x = cfg.width - 2, usable_y = cfg.height - 2;
  const int nx = std::max(1, (usable_x + wall) / (corridor + wall));
  const int ny = std::max(1, (usable_y + wall) / (corridor + wall));
  std::vector<int> wx, wy;
  const std::vector<int> xs = span_starts(1, usable_x, nx, wall, wx);
  const std::vector<int> ys = span_starts(1, usable_y, ny, wall, wy);

  // closed_v[r][c]: wall between room (r,c) and (r,c+1).
  // closed_h[r][c]: wall between room (r,c) and (r+1,c).
  std::vector<std::vector<char>> closed_v(ny, std::vector<char>(std::max(0, nx - 1), 0));
  std::vector<std::vector<char>> closed_h(std::max(0, ny - 1), std::vector<char>(nx, 0));

  std::function<void(int, int, int, int)> divide = [&](int r0, int r1, int c0, int c1) {
    const int rows = r1 - r0, cols = c1 - c0;
    if (rows < 2 && cols < 2) return;
    bool vertical;
    if (rows < 2) vertical = true;
    else if (cols < 2) vertical = false;
    else if (cols != rows) vertical = cols > rows;
    else vertical = rng.uniform_int(0, 1) == 1;
    if (vertical) {
      const int split = static_cast<int>(rng.uniform_int(c0 + 1, c1 - 1));
      const int door = static_cast<int>(rng.uniform_int(r0, r1 - 1));
      for (int r = r0; r < r1; ++r) closed_v[r][split - 1] = (r != door);
      divide(r0, r1, c0, split);
      divide(r0, r1, split, c1);
    } else {
      const int split = static_cast<int>(rng.uniform_int(r0 + 1, r1 - 1));
      const int door = static_cast<int>(rng.uniform_int(c0, c1 - 1));
      for (int c = c0; c < c1; ++c) closed_h[split - 1][c] = (c != door);
      divide(r0, split, c0, c1);
      divide(split, r1, c0, c1);
    }
  };
  divide(0, ny, 0, nx);

  auto fill = [&](int x0, int y0, int w, int h) {
    for (int y = y0; y < y0 + h; ++y)
      for (int x = x0; x < x0 + w; ++x) grid.set(x, y, CellState::Occupied);
  };
  for (int r = 0; r < ny; ++r)
    for (int c = 0; c + 1 < nx; ++c)
      if (closed_v[r][c]) fill(xs[c] + wx[c], ys[r], wall, wy[r]);
  for (int r = 0; r + 1 < ny; ++r)
    for (int c = 0; c < nx; ++c)
      if (closed_h[r][c]) fill(xs[c], ys[r] + wy[r], wx[c], wall);
  for (int r = 0; r + 1 < ny; ++r) {
    for (int c = 0; c + 1 < nx; ++c) {
      const bool any = closed_v[r][c] || closed_v[r + 1][c] || closed_h[r][c] || closed_h[r][c + 1];
      if (any) fill(xs[c] + wx[c], ys[r] + wy[r], wall, wall);
    }
  }
  return grid;
}

std::vector<CellIndex> disc_cells(const OccupancyGrid& grid, double cx, double cy, double radius) {
  std::vector<CellIndex> cells;
  const double res = grid.resolution();
  const int x0 = std::max(1, static_cast<int>(std::floor((cx - radius) / res)));
  const int x1 = std::min(grid.width() - 2, static_cast<int>(std::ceil((cx + radius) / res)));
  const int y0 = std::max(1, static_cast<int>(std::floor((cy - radius) / res)));
  const int y1 = std::min(grid.height() - 2, static_cast<int>(std::ceil((cy + radius) / res)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const Eigen::Vector2d c = grid.cell_to_world(Cell{x, y});
      if ((c - Eigen::Vector2d(cx, cy)).norm() <= radius) cells.push_back(grid.index(x, y));
    }
  }
  return cells;
}

std::vector<CellIndex> rect_cells(const OccupancyGrid& grid, int x0, int y0, int w, int h) {
  std::vector<CellIndex> cells;
  for (int y = std::max(1, y0); y < std::min(grid.height() - 1, y0 + h); ++y)
    for (int x = std::max(1, x0); x < std::min(grid.width() - 1, x0 + w); ++x)
      cells.push_back(grid.index(x, y));
  return cells;
}

OccupancyGrid make_fence_and_clusters(const MapGenConfig& cfg, Rng& rng) {
  OccupancyGrid grid = empty_world(cfg);
  const double res = cfg.resolution;
  const int wall = to_cells(cfg.wall_thickness, res);
  const int gap = to_cells(cfg.fence_gap_width, res);

  // One long fence across the map, pierced by a few gaps.
  const int jitter = cfg.width / 8;
  const int fence_x = cfg.width / 2 - wall / 2 + static_cast<int>(rng.uniform_int(-jitter, jitter));
  std::vector<int> gap_starts;
  for (int attempt = 0; static_cast<int>(gap_starts.size()) < std::max(1, cfg.fence_gaps); ++attempt) {
    if (attempt > cfg.max_attempts) throw GenerationError("free-space connectivity: cannot place fence gaps");
    const int g = static_cast<int>(rng.uniform_int(1, cfg.height - 1 - gap));
    const bool clash = std::any_of(gap_starts.begin(), gap_starts.end(),
                                   [&](int s) { return std::abs(s - g) < 2 * gap; });
    if (!clash) gap_starts.push_back(g);
  }
  for (int y = 1; y < cfg.height - 1; ++y) {
    const bool in_gap = std::any_of(gap_starts.begin(), gap_starts.end(),
                                    [&](int s) { return y >= s && y < s + gap; });
    if (in_gap) continue;
    for (int x = fence_x; x < fence_x + wall; ++x) grid.set(x, y, CellState::Occupied);
  }
  check_invariants(cfg, grid);

  Placement place(cfg, grid);
  const double extent_x = cfg.width * res, extent_y = cfg.height * res;
  for (int k = 0; k < cfg.cluster_count; ++k) {
    const double cx = rng.uniform(1.0, extent_x - 1.0);
    const double cy = rng.uniform(1.0, extent_y - 1.0);
    const int blobs = static_cast<int>(rng.uniform_int(3, 5));
    for (int b = 0; b < blobs; ++b) {
      for (int attempt = 0; attempt < 20; ++attempt) {
        const double r = rng.uniform(0.25, std::max(0.25, cfg.cluster_radius));
        const double bx = cx + rng.uniform(-1.5 * cfg.cluster_radius, 1.5 * cfg.cluster_radius);
        const double by = cy + rng.uniform(-1.5 * cfg.cluster_radius, 1.5 * cfg.cluster_radius);
        if (place.try_place(disc_cells(grid, bx, by, r))) break;
      }
    }
  }
  return grid;
}

OccupancyGrid make_uniform_random(const MapGenConfig& cfg, Rng& rng) {
  OccupancyGrid grid = empty_world(cfg);
  if (cfg.obstacle_density <= 0.0) return grid;
  const CellIndex interior_cells = static_cast<CellIndex>(cfg.width - 2) * (cfg.height - 2);
  const CellIndex target = static_cast<CellIndex>(std::ceil(cfg.obstacle_density * interior_cells));
  CellIndex occupied = 0;
  Placement place(cfg, grid);
  const int lo = to_cells(cfg.rect_min_side, cfg.resolution);
  const int hi = std::max(lo, to_cells(cfg.rect_max_side, cfg.resolution));
  int attempts = 0;
  while (occupied < target) {
    if (++attempts > cfg.max_attempts)
      throw GenerationError("obstacle density " + std::to_string(cfg.obstacle_density) +
                            " unreachable; binding constraint: " + place.dominant_reason());
    const int w = static_cast<int>(rng.uniform_int(lo, hi));
    const int h = static_cast<int>(rng.uniform_int(lo, hi));
    const int x = static_cast<int>(rng.uniform_int(1, cfg.width - 1 - w));
    const int y = static_cast<int>(rng.uniform_int(1, cfg.height - 1 - h));
    if (place.try_place(rect_cells(grid, x, y, w, h)))
      occupied = grid.count(CellState::Occupied) - (2 * cfg.width + 2 * cfg.height - 4);
  }
  return grid;
}

}  // namespace

OccupancyGrid generate_map(const MapGenConfig& config) {
  if (!(config.resolution > 0.0)) throw GenerationError("resolution must be positive");
  if (config.obstacle_density < 0.0 || config.obstacle_density >= 1.0)
    throw GenerationError("obstacle density must lie in [0, 1)");
  Rng rng(config.seed);
  OccupancyGrid grid;
  switch (config.kind) {
    case MapKind::Maze: grid = make_maze(config, rng); break;
    case MapKind::FenceAndClusters: grid = make_fence_and_clusters(config, rng); break;
    case MapKind::UniformRandom: grid = make_uniform_random(config, rng); break;
  }
  check_invariants(config, grid);
  return grid;
}

}  // namespace colex
