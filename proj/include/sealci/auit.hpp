#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sealci/grid.hpp"
#include "sealci/rng.hpp"

namespace sealci {

enum class AuitAction {
  Left,
  Right,
  Up,
  Down,
  UpLeft,
  UpRight,
  DownLeft,
  DownRight,
  Stay,
};

inline constexpr int kAuitActionCount = 9;

// dx, dy per action, same order as the enum
inline constexpr std::array<std::pair<int, int>, kAuitActionCount>
    kAuitOffsets{{{-1, 0},
                  {1, 0},
                  {0, -1},
                  {0, 1},
                  {-1, -1},
                  {1, -1},
                  {-1, 1},
                  {1, 1},
                  {0, 0}}};

const char* auit_action_mnemonic(AuitAction a);

/// Toroidal move; defined for every cell and every action.
Position auit_move(Position pos, AuitAction a, const GridSpec& spec);

/// Finite action string, repeated cyclically when walked.
struct MovementPattern {
  std::vector<AuitAction> actions;
};

/// Comma-separated mnemonics ("L,R,UL,S,..."); throws ConfigError on an
/// empty string or an unknown token.
MovementPattern parse_movement_pattern(std::string_view text);

std::string movement_pattern_text(const MovementPattern& p);

/// Uniform random action string, reproducible per seed.
MovementPattern random_movement_pattern(std::size_t length,
                                        std::uint64_t seed);

/// Cyclic expansion to exactly `length` symbols.
std::vector<AuitAction> expand_pattern(const MovementPattern& p,
                                       std::size_t length);

/// Walks a pattern cyclically, one symbol per step.
struct PatternCursor {
  const MovementPattern* pattern = nullptr;
  std::size_t index = 0;

  AuitAction advance();
};

/// Agents plus the two special objects on a shared torus. Cells are not
/// exclusive here; co-locating with Good is how the distance hits zero.
struct AuitSpace {
  GridSpec spec;
  std::vector<Position> agents;
  Position good;
  Position evil;
};

/// Largest torus distance any two cells can have.
double max_torus_distance(const GridSpec& spec);

/// (d_evil - d_good) / D, in [-1, 1]; positive means closer to Good.
double auit_reward(Position agent, Position good, Position evil,
                   const GridSpec& spec);

/// Agents move, the special objects advance one pattern symbol each, then
/// every agent collects its distance-mapped reward.
std::vector<double> step_auit(AuitSpace& space,
                              const std::vector<AuitAction>& actions,
                              PatternCursor& good_cursor,
                              PatternCursor& evil_cursor);

enum class CommMode { Direct, Indirect, Imitation };

const char* comm_mode_name(CommMode mode);

struct CommParams {
  CommMode mode = CommMode::Direct;
  double bias_std = 0.0;  // INDIRECT positional error
  int range = 0;          // IMITATION hearing range, Chebyshev cells
};

struct Sighting {
  bool seen = false;
  Position pos;

  bool operator==(const Sighting&) const = default;
};

/// What one agent saw this step: special-object positions within its own
/// sensing radius.
struct Observation {
  Sighting good;
  Sighting evil;

  bool operator==(const Observation&) const = default;
};

struct Report {
  std::uint32_t reporter = 0;
  Observation obs;

  bool operator==(const Report&) const = default;
};

struct Belief {
  std::vector<Report> reports;
  // IMITATION only: last actions of agents within range, excluding self.
  std::vector<std::pair<std::uint32_t, AuitAction>> observed_actions;

  bool operator==(const Belief&) const = default;
};

/// Chebyshev-disc sightings of Good and Evil for every agent.
std::vector<Observation> observe_objects(const AuitSpace& space,
                                         int sense_radius);

/// DIRECT: every belief is the exact union of all reports. INDIRECT: own
/// report exact, foreign positions arrive with per-coordinate normal bias,
/// rounded to the nearest cell and wrapped (std 0 degenerates to DIRECT).
/// IMITATION: own report only, plus the last actions of agents in range.
std::vector<Belief> share_observations(const AuitSpace& space,
                                       const std::vector<Observation>& obs,
                                       const std::vector<AuitAction>& last_actions,
                                       const CommParams& comm, Rng& rng);

/// Compressed size in bits of the pattern expanded to `length` symbols; a
/// dictionary-compressor stand-in for description length, ordinal use only.
int pattern_complexity(const MovementPattern& p, std::size_t length = 1024);

/// log2(width * height): entropy of the uniform position distribution.
double env_entropy(const GridSpec& spec);

enum class AuitPolicy { Stay, Random, GreedyGood };

const char* auit_policy_name(AuitPolicy policy);

/// One cell of the complexity grid.
struct AuitCell {
  std::string pattern_id;
  MovementPattern good_pattern;
  MovementPattern evil_pattern;
  GridSpec space;
};

struct AuitEvalConfig {
  int team_size = 5;
  AuitPolicy policy = AuitPolicy::GreedyGood;
  CommParams comm;
  int sense_radius = 3;
  int episodes = 10;
  int steps_per_episode = 100;
  // Prefix lengths at which the running mean is reported; empty means the
  // full episode only.
  std::vector<int> prefix_checkpoints;
  std::uint64_t seed = 1;
};

struct AuitScoreRow {
  std::string pattern_id;
  int space_w = 0;
  int space_h = 0;
  CommMode comm_mode = CommMode::Direct;
  int episode = 0;
  int prefix_steps = 0;
  double anytime_score = 0.0;
};

void validate_auit_config(const AuitEvalConfig& cfg,
                          const std::vector<AuitCell>& grid);

/// Runs the team over every complexity cell. The anytime score at prefix n
/// is the mean of the first n per-step team rewards; per-episode sub-seeds
/// make every row reproducible in isolation.
std::vector<AuitScoreRow> evaluate_ci(const AuitEvalConfig& cfg,
                                      const std::vector<AuitCell>& grid);

}  // namespace sealci
