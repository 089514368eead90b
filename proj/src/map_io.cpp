#include "colex/map_io.hpp"

#include "colex/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace colex {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return lines;
}

template <typename T>
std::string_view parse_field(std::string_view rest, T& out, const char* name) {
  const char* first = rest.data();
  const char* last = rest.data() + rest.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc()) throw ParseError(1, std::string("malformed header: bad ") + name);
  rest.remove_prefix(static_cast<std::size_t>(ptr - first));
  return rest;
}

}  // namespace

OccupancyGrid load_map(std::string_view text) {
  const std::vector<std::string_view> lines = split_lines(text);
  if (lines.empty()) throw ParseError(1, "malformed header: empty input");

  std::string_view header = lines[0];
  int width = 0, height = 0;
  double resolution = 0.0;
  header = parse_field(header, width, "width");
  if (header.empty() || header.front() != ' ') throw ParseError(1, "malformed header: expected space");
  header = parse_field(header.substr(1), height, "height");
  if (header.empty() || header.front() != ' ') throw ParseError(1, "malformed header: expected space");
  header = parse_field(header.substr(1), resolution, "resolution");
  if (!header.empty()) throw ParseError(1, "malformed header: trailing characters");
  if (width <= 0 || height <= 0) throw ParseError(1, "malformed header: dimensions must be positive");
  if (!(resolution > 0.0)) throw ParseError(1, "malformed header: resolution must be positive");

  if (static_cast<int>(lines.size()) - 1 < height)
    throw ParseError(static_cast<int>(lines.size()) + 1, "expected " + std::to_string(height) + " map rows");
  if (static_cast<int>(lines.size()) - 1 > height)
    throw ParseError(height + 2, "unexpected content after last map row");

  OccupancyGrid grid(width, height, resolution);
  for (int y = 0; y < height; ++y) {
    const std::string_view row = lines[y + 1];
    const int line_no = y + 2;
    if (static_cast<int>(row.size()) != width)
      throw ParseError(line_no, "wrong line length " + std::to_string(row.size()) + ", expected " +
                                    std::to_string(width));
    for (int x = 0; x < width; ++x) {
      switch (row[x]) {
        case '#': grid.set(x, y, CellState::Occupied); break;
        case '.': grid.set(x, y, CellState::Free); break;
        case '?': grid.set(x, y, CellState::Unknown); break;
        default: throw ParseError(line_no, std::string("unknown character '") + row[x] + "'");
      }
    }
  }
  return grid;
}

std::string save_map(const OccupancyGrid& grid) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, grid.resolution());
  std::string out = std::to_string(grid.width()) + " " + std::to_string(grid.height()) + " " +
                    std::string(buf, res.ptr) + "\n";
  out.reserve(out.size() + static_cast<std::size_t>(grid.width() + 1) * grid.height());
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      switch (grid.at(x, y)) {
        case CellState::Occupied: out += '#'; break;
        case CellState::Free: out += '.'; break;
        case CellState::Unknown: out += '?'; break;
      }
    }
    out += '\n';
  }
  return out;
}

OccupancyGrid load_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open map file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_map(ss.str());
}

void save_map_file(const OccupancyGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write map file '" + path + "'");
  out << save_map(grid);
}

}  // namespace colex
