#include "colex/frontier.hpp"

#include <algorithm>

namespace colex {

FrontierLabel classify_cell(const OccupancyGrid& belief, CellIndex i) {
  if (belief[i] != CellState::Unknown) return FrontierLabel::None;
  const Cell c = belief.cell(i);
  bool free = false, occupied = false;
  for (int k = 0; k < 4; ++k) {
    const int nx = c.x + kDx4[k], ny = c.y + kDy4[k];
    if (!belief.in_bounds(nx, ny)) continue;
    const CellState s = belief.at(nx, ny);
    free |= s == CellState::Free;
    occupied |= s == CellState::Occupied;
  }
  if (free) return FrontierLabel::A;
  if (occupied) return FrontierLabel::B;
  return FrontierLabel::None;
}

FrontierSet extract_frontiers(const OccupancyGrid& belief) {
  FrontierSet fs;
  for (CellIndex i = 0; i < belief.size(); ++i) {
    switch (classify_cell(belief, i)) {
      case FrontierLabel::A: fs.frontier_a.push_back(i); break;
      case FrontierLabel::B: fs.frontier_b.push_back(i); break;
      case FrontierLabel::None: break;
    }
  }
  return fs;
}

std::vector<FrontierLabel> label_frontiers(const FrontierSet& fs, CellIndex grid_size) {
  std::vector<FrontierLabel> labels(grid_size, FrontierLabel::None);
  for (CellIndex i : fs.frontier_a) labels[i] = FrontierLabel::A;
  for (CellIndex i : fs.frontier_b) labels[i] = FrontierLabel::B;
  return labels;
}

std::vector<std::vector<CellIndex>> cluster_8connected(std::span<const CellIndex> cells,
                                                       const OccupancyGrid& grid) {
  // 0 = not a member, 1 = unvisited member, 2 = assigned
  std::vector<std::uint8_t> mark(grid.size(), 0);
  for (CellIndex i : cells) mark[i] = 1;
  std::vector<CellIndex> sorted(cells.begin(), cells.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<std::vector<CellIndex>> components;
  std::vector<CellIndex> stack;
  for (CellIndex seed : sorted) {
    if (mark[seed] != 1) continue;
    std::vector<CellIndex> component;
    mark[seed] = 2;
    stack.push_back(seed);
    while (!stack.empty()) {
      const CellIndex cur = stack.back();
      stack.pop_back();
      component.push_back(cur);
      const Cell c = grid.cell(cur);
      for (int k = 0; k < 8; ++k) {
        const int nx = c.x + kDx8[k], ny = c.y + kDy8[k];
        if (!grid.in_bounds(nx, ny)) continue;
        const CellIndex n = grid.index(nx, ny);
        if (mark[n] != 1) continue;
        mark[n] = 2;
        stack.push_back(n);
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

std::vector<FrontierLine> cluster_frontier_lines(const FrontierSet& fs, const OccupancyGrid& grid) {
  std::vector<FrontierLine> lines;
  for (auto& component : cluster_8connected(fs.frontier_a, grid)) {
    const double length = static_cast<double>(component.size()) * grid.resolution();
    lines.push_back({std::move(component), length});
  }
  return lines;
}

Eigen::Vector2d centroid(std::span<const CellIndex> cells, const OccupancyGrid& grid) {
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  for (CellIndex i : cells) sum += grid.cell_to_world(i);
  return cells.empty() ? sum : Eigen::Vector2d(sum / static_cast<double>(cells.size()));
}

}  // namespace colex
