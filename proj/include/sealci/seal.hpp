#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sealci/grid.hpp"
#include "sealci/pheromone.hpp"
#include "sealci/rng.hpp"

namespace sealci {

struct AgentState {
  std::uint32_t id = 0;
  Position pos;
  double priority = 0.0;
};

/// Priority deltas keyed on (cell label, occupied 4-neighbor count). The
/// same table read with the opposite sign is the per-step reward signal for
/// the learning engines.
struct RewardTable {
  // [unlabeled n=0..4, labeled n=0..4]
  std::array<double, 10> deltas{};

  double delta(bool on_labeled, int neighbor_count) const {
    return deltas[(on_labeled ? 5 : 0) + neighbor_count];
  }
  void set(bool on_labeled, int neighbor_count, double d) {
    deltas[(on_labeled ? 5 : 0) + neighbor_count] = d;
  }

  bool operator==(const RewardTable&) const = default;
};

/// Reference deltas. Off the pattern a flat +0.3 keeps the agent competing
/// for moves. On it the delta falls with the occupied-neighbor count and
/// turns negative at three: sparsely supported agents stay restless and keep
/// exploring, while agents in dense stretches of the pattern go quiet and
/// hold position. A strictly decreasing labeled row (negative everywhere)
/// freezes every arrival in place; thin strands then wall off interior
/// holes and the score plateaus well below its ceiling.
RewardTable reference_reward_table();

struct SealConfig {
  double active_fraction = 0.11;  // share of agents granted a move, (0, 1]
  int sense_radius = 10;          // Chebyshev sensing range
  double response_sigma = 2.0;    // Gaussian response scale (cells)
  PheromoneParams pheromone;
  ChannelNoise noise;
  RewardTable reward_table = reference_reward_table();
  int max_iterations = 300;
  std::uint64_t seed = 1;
  double priority_min = -10.0;
  double priority_max = 10.0;
};

/// Per-run trace. similarity[i] is the score after i completed iterations,
/// so similarity[0] is the score of the initial placement.
struct RunRecord {
  std::vector<double> similarity;
  double final_similarity = 0.0;
  Occupancy final_occupancy;
  std::uint64_t seed = 0;
  std::string config_hash;
};

/// Ids of the ceil(fraction * N) agents of highest priority; ties broken
/// uniformly at random.
std::vector<std::uint32_t> select_active(const std::vector<AgentState>& agents,
                                         double fraction, Rng& rng);

/// Samples one sensed cell with probability proportional to
/// perceived * response_amplitude(distance, sigma). Nullopt when every
/// weight is zero.
std::optional<Position> select_attractor(const AgentState& agent,
                                         const std::vector<SensedCell>& sensed,
                                         double sigma, const GridSpec& spec,
                                         Rng& rng);

/// One movement step. With an attractor: the axis of larger displacement
/// first (ties by coin flip), then the two perpendicular directions in rng
/// order, never the opposite direction; all blocked means stay. Without an
/// attractor: a uniformly random free neighbor, stay if none.
Position step_move(const AgentState& agent, std::optional<Position> attractor,
                   const Occupancy& occ, const GridSpec& spec, Rng& rng);

/// priority + table(on_labeled, occupied neighbor count), clamped.
double update_priority(const AgentState& agent, const RewardTable& table,
                       const Occupancy& occ, const LabeledMask& mask,
                       double priority_min, double priority_max);

/// Throws ConfigError when parameters are out of range or the agent count
/// does not fit the grid.
void validate_seal_config(const SealConfig& cfg, const Pattern& pattern,
                          int agent_count);

/// Seeded uniform draw of agent_count distinct cells; agent i starts at
/// entry i. Shared by every engine so equal seeds mean equal placements.
std::vector<Position> initial_positions(const GridSpec& spec, int agent_count,
                                        Rng& rng);

struct MoveEvent {
  std::uint32_t id = 0;
  Position from;
  Position to;
};

/// The cooperation loop over one grid, one field, and one agent team.
class SealWorld {
 public:
  SealWorld(const Pattern& pattern, const SealConfig& cfg, int agent_count);

  /// One iteration: activate, sense, move, deposit, update priorities,
  /// decay. Returns the ids activated this tick.
  std::vector<std::uint32_t> tick();

  /// Activation, sensing, movement, and deposits only — the caller supplies
  /// its own priority update before closing the tick with finish_tick().
  std::vector<MoveEvent> tick_movement();

  /// Decays the field and checks invariants; closes a tick_movement() tick.
  void finish_tick();

  void set_priority(std::uint32_t id, double priority) {
    agents_[id].priority = priority;
  }

  /// Executes cfg.max_iterations ticks and collects the similarity trace.
  RunRecord run();

  double current_similarity() const { return similarity(occ_, mask_); }
  const std::vector<AgentState>& agents() const { return agents_; }
  const Occupancy& occupancy() const { return occ_; }
  const PheromoneField& field() const { return field_; }
  const LabeledMask& mask() const { return mask_; }
  const GridSpec& spec() const { return spec_; }

  /// Exclusivity, agent conservation, pheromone bounds. Runs after every
  /// tick; throws InvariantViolation on failure.
  void check_invariants() const;

 private:
  GridSpec spec_;
  LabeledMask mask_;
  SealConfig cfg_;
  Occupancy occ_;
  PheromoneField field_;
  std::vector<AgentState> agents_;
  Rng rng_;
};

/// Places agents uniformly over free cells (seeded), runs the configured
/// number of iterations, and returns the trace.
RunRecord run_seal(const SealConfig& cfg, const Pattern& pattern,
                   int agent_count);

/// Occupancy frame in pattern-file text: 'A' marks agents, '1' unfilled
/// labeled cells, '0' everything else.
std::string frame_to_text(const Occupancy& occ, const LabeledMask& mask);

}  // namespace sealci
