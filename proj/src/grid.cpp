#include "sealci/grid.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace sealci {

namespace {

bool in_bounds(Position p, const GridSpec& spec) {
  return p.x >= 0 && p.x < spec.width && p.y >= 0 && p.y < spec.height;
}

int wrap(int v, int n) {
  int r = v % n;
  return r < 0 ? r + n : r;
}

}  // namespace

std::optional<Position> neighbor(Position pos, Dir dir, const GridSpec& spec) {
  Position next = pos;
  switch (dir) {
    case Dir::Up: next.y -= 1; break;
    case Dir::Down: next.y += 1; break;
    case Dir::Left: next.x -= 1; break;
    case Dir::Right: next.x += 1; break;
  }
  if (spec.boundary == Boundary::Toroidal) {
    next.x = wrap(next.x, spec.width);
    next.y = wrap(next.y, spec.height);
    return next;
  }
  if (!in_bounds(next, spec)) return std::nullopt;
  return next;
}

double torus_distance(Position a, Position b, const GridSpec& spec) {
  int dx = std::abs(a.x - b.x);
  int dy = std::abs(a.y - b.y);
  if (spec.boundary == Boundary::Toroidal) {
    dx = std::min(dx, spec.width - dx);
    dy = std::min(dy, spec.height - dy);
  }
  return std::sqrt(static_cast<double>(dx) * dx +
                   static_cast<double>(dy) * dy);
}

LabeledMask::LabeledMask(int width, int height,
                         std::vector<std::uint8_t> cells)
    : width_(width), height_(height), cells_(std::move(cells)) {
  for (std::uint8_t c : cells_) labeled_count_ += (c != 0);
}

Pattern load_pattern(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (lines.empty()) throw PatternParseError("pattern: empty input");

  std::istringstream header(lines[0]);
  std::string magic;
  int width = 0, height = 0;
  header >> magic >> width >> height;
  if (magic != "P-PAT" || width < 1 || height < 1 || !header ||
      !(header >> std::ws).eof()) {
    throw PatternParseError("pattern: malformed header '" + lines[0] + "'");
  }
  if (static_cast<int>(lines.size()) < height + 1) {
    throw PatternParseError("pattern: expected " + std::to_string(height) +
                            " rows, got " + std::to_string(lines.size() - 1));
  }
  for (std::size_t i = height + 1; i < lines.size(); ++i) {
    if (!lines[i].empty()) {
      throw PatternParseError("pattern: trailing content after row " +
                              std::to_string(height));
    }
  }

  std::vector<std::uint8_t> cells;
  cells.reserve(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    const std::string& row = lines[y + 1];
    if (static_cast<int>(row.size()) != width) {
      throw PatternParseError("pattern: row " + std::to_string(y) + " has " +
                              std::to_string(row.size()) + " cells, expected " +
                              std::to_string(width));
    }
    for (char c : row) {
      if (c != '0' && c != '1') {
        throw PatternParseError(std::string("pattern: invalid cell '") + c +
                                "' in row " + std::to_string(y));
      }
      cells.push_back(c == '1');
    }
  }

  LabeledMask mask(width, height, std::move(cells));
  if (mask.labeled_count() == 0) {
    throw PatternParseError("pattern: zero labeled cells");
  }
  return Pattern{GridSpec{width, height, Boundary::Bounded}, std::move(mask)};
}

std::string pattern_to_text(const Pattern& pattern) {
  std::string out = "P-PAT " + std::to_string(pattern.spec.width) + " " +
                    std::to_string(pattern.spec.height) + "\n";
  for (int y = 0; y < pattern.spec.height; ++y) {
    for (int x = 0; x < pattern.spec.width; ++x) {
      out += pattern.mask.at({x, y}) ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

Occupancy::Occupancy(const GridSpec& spec)
    : spec_(spec), cells_(static_cast<std::size_t>(spec.cell_count()), -1) {}

void Occupancy::place(std::uint32_t agent, Position pos) {
  if (agents_.count(agent)) {
    throw std::invalid_argument("occupancy: agent " + std::to_string(agent) +
                                " already placed");
  }
  if (occupied(pos)) {
    throw std::invalid_argument("occupancy: cell already taken");
  }
  cells_[idx(pos)] = static_cast<std::int32_t>(agent);
  agents_.emplace(agent, pos);
}

MoveResult Occupancy::move_agent(std::uint32_t agent, Position to) {
  auto it = agents_.find(agent);
  if (it == agents_.end()) {
    throw std::invalid_argument("occupancy: unknown agent " +
                                std::to_string(agent));
  }
  Position from = it->second;
  if (from == to) return MoveResult::Ok;
  if (std::abs(from.x - to.x) + std::abs(from.y - to.y) != 1 &&
      !(spec_.boundary == Boundary::Toroidal &&
        torus_distance(from, to, spec_) == 1.0)) {
    throw std::invalid_argument("occupancy: non-adjacent move");
  }
  if (occupied(to)) return MoveResult::Occupied;
  cells_[idx(from)] = -1;
  cells_[idx(to)] = static_cast<std::int32_t>(agent);
  it->second = to;
  return MoveResult::Ok;
}

std::optional<std::uint32_t> Occupancy::agent_at(Position pos) const {
  std::int32_t v = cells_[idx(pos)];
  if (v < 0) return std::nullopt;
  return static_cast<std::uint32_t>(v);
}

Position Occupancy::position_of(std::uint32_t agent) const {
  auto it = agents_.find(agent);
  if (it == agents_.end()) {
    throw std::invalid_argument("occupancy: unknown agent " +
                                std::to_string(agent));
  }
  return it->second;
}

int Occupancy::neighbor_count(Position pos) const {
  int n = 0;
  for (Dir d : kDirs) {
    auto cell = neighbor(pos, d, spec_);
    if (cell && occupied(*cell)) ++n;
  }
  return n;
}

void Occupancy::check_consistency() const {
  std::size_t mapped = 0;
  for (int y = 0; y < spec_.height; ++y) {
    for (int x = 0; x < spec_.width; ++x) {
      std::int32_t v = cells_[idx({x, y})];
      if (v < 0) continue;
      ++mapped;
      auto it = agents_.find(static_cast<std::uint32_t>(v));
      if (it == agents_.end() || !(it->second == Position{x, y})) {
        throw InvariantViolation("occupancy: cell/agent map mismatch at (" +
                                 std::to_string(x) + "," + std::to_string(y) +
                                 ")");
      }
    }
  }
  if (mapped != agents_.size()) {
    throw InvariantViolation("occupancy: " + std::to_string(agents_.size()) +
                             " agents but " + std::to_string(mapped) +
                             " occupied cells");
  }
}

double similarity(const Occupancy& occ, const LabeledMask& mask) {
  int hit = 0;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      Position p{x, y};
      if (mask.at(p) && occ.occupied(p)) ++hit;
    }
  }
  return static_cast<double>(hit) / mask.labeled_count();
}

}  // namespace sealci
