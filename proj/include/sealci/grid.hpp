#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sealci/errors.hpp"

namespace sealci {

enum class Boundary { Bounded, Toroidal };

struct GridSpec {
  int width = 0;
  int height = 0;
  Boundary boundary = Boundary::Bounded;

  int cell_count() const { return width * height; }
};

/// Cell coordinate. Origin is the top-left corner; y grows downward
/// (pattern files are read in image row order).
struct Position {
  int x = 0;
  int y = 0;

  bool operator==(const Position&) const = default;
};

enum class Dir { Up, Down, Left, Right };

inline constexpr Dir kDirs[4] = {Dir::Up, Dir::Down, Dir::Left, Dir::Right};

/// One step from `pos`. Bounded grids return nullopt at the edge; toroidal
/// grids wrap.
std::optional<Position> neighbor(Position pos, Dir dir, const GridSpec& spec);

/// Euclidean distance with per-axis minimal displacement (wrapped on
/// toroidal grids, plain otherwise).
double torus_distance(Position a, Position b, const GridSpec& spec);

/// Target shape: per-cell labeled flag plus the derived labeled cell count.
class LabeledMask {
 public:
  LabeledMask() = default;
  LabeledMask(int width, int height, std::vector<std::uint8_t> cells);

  int width() const { return width_; }
  int height() const { return height_; }
  bool at(Position p) const { return cells_[idx(p)] != 0; }
  int labeled_count() const { return labeled_count_; }

  bool operator==(const LabeledMask&) const = default;

 private:
  std::size_t idx(Position p) const {
    return static_cast<std::size_t>(p.y) * width_ + p.x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> cells_;
  int labeled_count_ = 0;
};

struct Pattern {
  GridSpec spec;
  LabeledMask mask;
};

/// Parses the P-PAT text format:
///   line 1: "P-PAT <width> <height>"
///   then <height> rows of <width> characters, '1' labeled / '0' not.
/// Throws PatternParseError on malformed header, row mismatch, or a pattern
/// with zero labeled cells.
Pattern load_pattern(std::string_view text);

/// Canonical serialization (trailing newline). load_pattern round-trips it
/// byte-exactly.
std::string pattern_to_text(const Pattern& pattern);

enum class MoveResult { Ok, Occupied };

/// Exclusive cell -> agent assignment. At most one agent per cell; the
/// mapped agent set is exactly the set of placed agents.
class Occupancy {
 public:
  Occupancy() = default;
  explicit Occupancy(const GridSpec& spec);

  /// Puts a new agent on a free cell. Throws on duplicate id or taken cell.
  void place(std::uint32_t agent, Position pos);

  /// Moves an existing agent; `to == current` is a no-op success. A cell
  /// held by another agent yields Occupied and leaves the map unchanged.
  /// Unknown agents throw.
  MoveResult move_agent(std::uint32_t agent, Position to);

  bool occupied(Position pos) const { return cells_[idx(pos)] >= 0; }
  std::optional<std::uint32_t> agent_at(Position pos) const;
  Position position_of(std::uint32_t agent) const;
  std::size_t agent_count() const { return agents_.size(); }
  const std::map<std::uint32_t, Position>& agents() const { return agents_; }
  const GridSpec& spec() const { return spec_; }

  /// Number of occupied 4-neighbors of `pos` (out-of-bounds cells count as
  /// free on bounded grids).
  int neighbor_count(Position pos) const;

  /// Full cross-check of the cell array against the agent map. Throws
  /// InvariantViolation on any inconsistency.
  void check_consistency() const;

 private:
  std::size_t idx(Position p) const {
    return static_cast<std::size_t>(p.y) * spec_.width + p.x;
  }

  GridSpec spec_;
  std::vector<std::int32_t> cells_;  // agent id, -1 when free
  std::map<std::uint32_t, Position> agents_;
};

/// Fraction of labeled cells currently occupied, in [0, 1].
double similarity(const Occupancy& occ, const LabeledMask& mask);

}  // namespace sealci
