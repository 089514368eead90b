#pragma once

#include "colex/grid.hpp"

#include <string>
#include <string_view>

namespace colex {

// Text map format:
//   line 1: "<width> <height> <resolution>"
//   then `height` lines of `width` chars: '#' Occupied, '.' Free, '?' Unknown.
// Row y = 0 is the first map line. Origin is always (0, 0).
OccupancyGrid load_map(std::string_view text);
std::string save_map(const OccupancyGrid& grid);

OccupancyGrid load_map_file(const std::string& path);
void save_map_file(const OccupancyGrid& grid, const std::string& path);

}  // namespace colex
