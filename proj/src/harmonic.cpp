#include "colex/harmonic.hpp"

#include "colex/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace colex {

BoundaryConditions build_boundary(const OccupancyGrid& belief, const std::vector<FrontierLine>& lines) {
  BoundaryConditions bc;
  bc.width = belief.width();
  bc.height = belief.height();
  bc.resolution = belief.resolution();
  const CellIndex n = belief.size();
  bc.role.assign(n, CellRole::Excluded);
  bc.fixed_value.assign(n, 0.0);
  bc.frontier.assign(n, 0);

  for (const FrontierLine& line : lines) {
    for (CellIndex i : line.cells) {
      bc.role[i] = CellRole::Fixed;
      bc.fixed_value[i] = -line.length;
      bc.frontier[i] = 1;
    }
  }
  for (CellIndex i = 0; i < n; ++i) {
    if (bc.frontier[i]) continue;
    const CellState s = belief[i];
    if (s == CellState::Occupied || belief.on_border(i)) {
      bc.role[i] = CellRole::Fixed;
    } else if (s == CellState::Free) {
      bc.role[i] = CellRole::Domain;
    }
  }
  for (CellIndex i = 0; i < n; ++i) {
    if (bc.role[i] == CellRole::Domain) bc.domain.push_back(i);
    else if (bc.role[i] == CellRole::Fixed) bc.fixed.push_back(i);
  }
  if (lines.empty() && bc.domain.empty())
    throw EmptyProblemError("no frontier lines and no free cells to solve over");
  return bc;
}

std::vector<CellIndex> boundary_changes(const BoundaryConditions* prev, const BoundaryConditions& next) {
  if (prev == nullptr || prev->size() != next.size()) return next.fixed;
  std::vector<CellIndex> changed;
  for (CellIndex i : next.fixed) {
    if (!prev->is_fixed(i) || prev->fixed_value[i] != next.fixed_value[i]) changed.push_back(i);
  }
  return changed;
}

std::vector<CellIndex> spreading_order(const BoundaryConditions& bc, const std::vector<CellIndex>& seeds) {
  std::vector<char> visited(bc.size(), 0);
  std::vector<CellIndex> order;
  order.reserve(bc.domain.size());

  std::vector<CellIndex> layer(seeds.begin(), seeds.end());
  std::sort(layer.begin(), layer.end());
  layer.erase(std::unique(layer.begin(), layer.end()), layer.end());
  for (CellIndex s : layer) {
    visited[s] = 1;
    if (bc.is_domain(s)) order.push_back(s);
  }
  std::vector<CellIndex> next;
  while (!layer.empty()) {
    next.clear();
    for (CellIndex cur : layer) {
      const Cell c = bc.cell(cur);
      for (int k = 0; k < 4; ++k) {
        const int nx = c.x + kDx4[k], ny = c.y + kDy4[k];
        if (!bc.in_bounds(nx, ny)) continue;
        const CellIndex nb = bc.index(nx, ny);
        if (visited[nb] || !bc.is_domain(nb)) continue;
        visited[nb] = 1;
        next.push_back(nb);
      }
    }
    std::sort(next.begin(), next.end());
    order.insert(order.end(), next.begin(), next.end());
    layer.swap(next);
  }
  for (CellIndex i : bc.domain)
    if (!visited[i]) order.push_back(i);
  return order;
}

HarmonicField solve_sor(const HarmonicField* prev, const BoundaryConditions& bc, const SorParams& params,
                        const UpdateOrdering& ordering) {
  if (!(params.omega > 0.0 && params.omega < 2.0))
    throw std::invalid_argument("SOR relaxation factor must lie in (0, 2)");
  if (!(params.tolerance > 0.0)) throw std::invalid_argument("SOR tolerance must be positive");
  if (bc.domain.empty()) throw EmptyProblemError("harmonic problem has an empty domain");

  HarmonicField field;
  field.bc = bc;
  const CellIndex n = bc.size();
  field.values.assign(n, 0.0);

  double cold = 0.0;
  for (CellIndex i : bc.fixed) cold += bc.fixed_value[i];
  if (!bc.fixed.empty()) cold /= static_cast<double>(bc.fixed.size());

  const bool warm = prev != nullptr && prev->bc.size() == n;
  for (CellIndex i = 0; i < n; ++i) {
    switch (bc.role[i]) {
      case CellRole::Fixed: field.values[i] = bc.fixed_value[i]; break;
      case CellRole::Domain:
        field.values[i] = (warm && prev->bc.participates(i)) ? prev->values[i] : cold;
        break;
      case CellRole::Excluded: break;
    }
  }

  const std::vector<CellIndex> order =
      (ordering.kind == UpdateOrdering::Kind::Spreading && !ordering.seeds.empty())
          ? spreading_order(bc, ordering.seeds)
          : bc.domain;

  // Flattened stencil: four neighbour slots per cell, unused slots point at
  // the cell itself with zero weight.
  const std::size_t m = order.size();
  std::vector<CellIndex> nbr(4 * m);
  std::vector<double> inv_count(m, 0.0);
  for (std::size_t p = 0; p < m; ++p) {
    const CellIndex i = order[p];
    const Cell c = bc.cell(i);
    int count = 0;
    for (int k = 0; k < 4; ++k) {
      const int nx = c.x + kDx4[k], ny = c.y + kDy4[k];
      if (bc.in_bounds(nx, ny) && bc.participates(bc.index(nx, ny))) nbr[4 * p + count++] = bc.index(nx, ny);
    }
    for (int k = count; k < 4; ++k) nbr[4 * p + k] = -1;
    inv_count[p] = count > 0 ? 1.0 / count : 0.0;
  }

  double* v = field.values.data();
  const double omega = params.omega;
  while (field.iterations < params.max_sweeps) {
    double max_update = 0.0;
    for (std::size_t p = 0; p < m; ++p) {
      if (inv_count[p] == 0.0) continue;
      const CellIndex* nb = &nbr[4 * p];
      double sum = v[nb[0]];
      for (int k = 1; k < 4 && nb[k] >= 0; ++k) sum += v[nb[k]];
      const CellIndex i = order[p];
      const double update = omega * (sum * inv_count[p] - v[i]);
      v[i] += update;
      max_update = std::max(max_update, std::abs(update));
    }
    ++field.iterations;
    field.last_update = max_update;
    if (max_update < params.tolerance) {
      field.converged = true;
      break;
    }
  }
  return field;
}

namespace {

bool admissible_step(const BoundaryConditions& bc, CellIndex i) {
  return bc.is_domain(i) || bc.is_frontier(i);
}

}  // namespace

std::vector<CellIndex> descend_path(const HarmonicField& field, CellIndex start) {
  const BoundaryConditions& bc = field.bc;
  if (start < 0 || start >= bc.size() || !admissible_step(bc, start))
    throw InvalidPathError("descent must start on a domain or frontier cell");
  std::vector<CellIndex> path{start};
  CellIndex cur = start;
  const std::size_t limit = bc.domain.size() + 2;
  while (!bc.is_frontier(cur)) {
    const Cell c = bc.cell(cur);
    CellIndex best = -1;
    double best_value = field.values[cur];
    for (int k = 0; k < 8; ++k) {
      const int nx = c.x + kDx8[k], ny = c.y + kDy8[k];
      if (!bc.in_bounds(nx, ny)) continue;
      const CellIndex nb = bc.index(nx, ny);
      if (!admissible_step(bc, nb)) continue;
      if (kDx8[k] != 0 && kDy8[k] != 0) {
        if (!admissible_step(bc, bc.index(c.x + kDx8[k], c.y)) ||
            !admissible_step(bc, bc.index(c.x, c.y + kDy8[k])))
          continue;
      }
      const double value = field.values[nb];
      if (value < best_value || (value == best_value && best >= 0 && nb < best)) {
        best_value = value;
        best = nb;
      }
    }
    if (best < 0) {
      throw StuckError("gradient descent reached a local minimum at cell (" + std::to_string(c.x) + ", " +
                       std::to_string(c.y) + ") away from any frontier");
    }
    cur = best;
    path.push_back(cur);
    if (path.size() > limit) throw StuckError("gradient descent exceeded the domain size");
  }
  return path;
}

Eigen::Vector2d gradient_at(const HarmonicField& field, CellIndex cell) {
  const BoundaryConditions& bc = field.bc;
  const Cell c = bc.cell(cell);
  const double h = bc.resolution;
  auto value = [&](int x, int y) -> std::optional<double> {
    if (!bc.in_bounds(x, y)) return std::nullopt;
    const CellIndex i = bc.index(x, y);
    if (!bc.participates(i)) return std::nullopt;
    return field.values[i];
  };
  const double here = field.values[cell];
  auto axis = [&](std::optional<double> plus, std::optional<double> minus) {
    if (plus && minus) return (*plus - *minus) / (2.0 * h);
    if (plus) return (*plus - here) / h;
    if (minus) return (here - *minus) / h;
    return 0.0;
  };
  return {axis(value(c.x + 1, c.y), value(c.x - 1, c.y)), axis(value(c.x, c.y + 1), value(c.x, c.y - 1))};
}

SweepComparison count_sweeps_comparison(const std::vector<SorProblem>& sequence, const SorParams& params) {
  SweepComparison out;
  std::optional<HarmonicField> reference;
  for (const SorProblem& problem : sequence) {
    const HarmonicField* warm = reference ? &*reference : nullptr;
    HarmonicField row = solve_sor(warm, problem.bc, params, UpdateOrdering::row_major());
    HarmonicField spread = solve_sor(warm, problem.bc, params, UpdateOrdering::spreading(problem.seeds));
    out.rowmajor_sweeps += row.iterations;
    out.spreading_sweeps += spread.iterations;
    out.rowmajor_per_step.push_back(row.iterations);
    out.spreading_per_step.push_back(spread.iterations);
    out.all_converged = out.all_converged && row.converged && spread.converged;
    for (CellIndex i : problem.bc.domain)
      out.max_field_difference = std::max(out.max_field_difference, std::abs(row.values[i] - spread.values[i]));
    reference = std::move(spread);
  }
  return out;
}

std::string field_to_csv(const HarmonicField& field) {
  std::string out = "cell_x,cell_y,value,grad_x,grad_y\n";
  char buf[160];
  for (CellIndex i : field.bc.domain) {
    const Cell c = field.bc.cell(i);
    const Eigen::Vector2d g = gradient_at(field, i);
    std::snprintf(buf, sizeof buf, "%d,%d,%.9g,%.9g,%.9g\n", c.x, c.y, field.values[i], g.x(), g.y());
    out += buf;
  }
  return out;
}

}  // namespace colex
