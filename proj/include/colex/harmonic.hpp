#pragma once

#include "colex/frontier.hpp"
#include "colex/grid.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace colex {

enum class CellRole : std::uint8_t { Excluded = 0, Domain = 1, Fixed = 2 };

// Dirichlet problem over the belief map. Occupied and border cells are held
// at 0, frontier-A cells at minus their line length (meters), Free cells are
// the unknowns, and every other Unknown cell is excluded from the solve.
struct BoundaryConditions {
  int width = 0;
  int height = 0;
  double resolution = 0.1;
  std::vector<CellRole> role;
  std::vector<double> fixed_value;    // meaningful where role == Fixed
  std::vector<std::uint8_t> frontier;  // 1 for fixed frontier-A cells
  std::vector<CellIndex> domain;       // ascending
  std::vector<CellIndex> fixed;        // ascending

  CellIndex size() const { return static_cast<CellIndex>(role.size()); }
  bool is_domain(CellIndex i) const { return role[i] == CellRole::Domain; }
  bool is_fixed(CellIndex i) const { return role[i] == CellRole::Fixed; }
  bool is_frontier(CellIndex i) const { return frontier[i] != 0; }
  bool participates(CellIndex i) const { return role[i] != CellRole::Excluded; }
  Cell cell(CellIndex i) const { return {i % width, i / width}; }
  CellIndex index(int x, int y) const { return y * width + x; }
  bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
};

struct SorParams {
  double omega = 1.8;
  double tolerance = 1e-4;  // max |update| over one sweep
  int max_sweeps = 10000;
};

struct UpdateOrdering {
  enum class Kind { RowMajor, Spreading };
  Kind kind = Kind::RowMajor;
  std::vector<CellIndex> seeds;

  static UpdateOrdering row_major() { return {}; }
  static UpdateOrdering spreading(std::vector<CellIndex> seeds) {
    return {Kind::Spreading, std::move(seeds)};
  }
};

struct HarmonicField {
  std::vector<double> values;  // per grid cell; 0 on excluded cells
  BoundaryConditions bc;
  bool converged = false;
  int iterations = 0;  // full sweeps performed
  double last_update = 0.0;

  double operator[](CellIndex i) const { return values[i]; }
};

// Throws EmptyProblemError when there is neither a frontier line nor a free
// cell to solve over.
BoundaryConditions build_boundary(const OccupancyGrid& belief, const std::vector<FrontierLine>& lines);

// Fixed cells that are new in `next` or whose value changed since `prev`;
// every fixed cell when there is no previous problem.
std::vector<CellIndex> boundary_changes(const BoundaryConditions* prev, const BoundaryConditions& next);

// Breadth-first order over domain cells by 4-adjacency hop distance from
// `seeds`, ties by row-major index; unreached domain cells follow in
// row-major order.
std::vector<CellIndex> spreading_order(const BoundaryConditions& bc, const std::vector<CellIndex>& seeds);

// Gauss-Seidel sweeps with over-relaxation until the largest update in a
// sweep drops below tolerance. A previous field warm-starts the values.
// Hitting max_sweeps returns the field with converged == false.
HarmonicField solve_sor(const HarmonicField* prev, const BoundaryConditions& bc, const SorParams& params,
                        const UpdateOrdering& ordering);

// Steps to the strictly lowest admissible 8-neighbour until a frontier cell
// is reached. Diagonal steps may not cut the corner of a non-admissible
// cell. Throws StuckError at a local minimum that is not a frontier.
std::vector<CellIndex> descend_path(const HarmonicField& field, CellIndex start);

// Central-difference gradient (east, north) in value per meter; one-sided
// where a neighbour does not participate.
Eigen::Vector2d gradient_at(const HarmonicField& field, CellIndex cell);

struct SorProblem {
  BoundaryConditions bc;
  std::vector<CellIndex> seeds;
};

struct SweepComparison {
  long rowmajor_sweeps = 0;
  long spreading_sweeps = 0;
  std::vector<int> rowmajor_per_step;
  std::vector<int> spreading_per_step;
  // Largest cell-wise gap between the two orderings' solutions.
  double max_field_difference = 0.0;
  bool all_converged = true;

  double ratio() const {
    return spreading_sweeps > 0 ? static_cast<double>(rowmajor_sweeps) / spreading_sweeps : 1.0;
  }
};

// Replays a recorded sequence of incremental problems with both orderings.
// Step k of both replays is warm-started from the same field: the spreading
// solution of step k-1.
SweepComparison count_sweeps_comparison(const std::vector<SorProblem>& sequence, const SorParams& params);

// CSV `cell_x,cell_y,value,grad_x,grad_y` over domain cells.
std::string field_to_csv(const HarmonicField& field);

}  // namespace colex
