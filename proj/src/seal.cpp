#include "sealci/seal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sealci/errors.hpp"

namespace sealci {

RewardTable reference_reward_table() {
  RewardTable t;
  const double labeled[5] = {0.3, 0.15, 0.0, -0.4, -0.8};
  for (int n = 0; n <= 4; ++n) {
    t.set(false, n, 0.3);
    t.set(true, n, labeled[n]);
  }
  return t;
}

std::vector<std::uint32_t> select_active(const std::vector<AgentState>& agents,
                                         double fraction, Rng& rng) {
  const std::size_t n = agents.size();
  const std::size_t k = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(n)));
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  // Shuffle first so the stable sort breaks priority ties uniformly.
  rng.shuffle(order);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return agents[a].priority > agents[b].priority;
                   });
  order.resize(std::min(k, n));
  std::vector<std::uint32_t> ids(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) ids[i] = agents[order[i]].id;
  return ids;
}

std::optional<Position> select_attractor(const AgentState& agent,
                                         const std::vector<SensedCell>& sensed,
                                         double sigma, const GridSpec& spec,
                                         Rng& rng) {
  std::vector<double> weights(sensed.size());
  double total = 0.0;
  for (std::size_t i = 0; i < sensed.size(); ++i) {
    double d = torus_distance(agent.pos, sensed[i].pos, spec);
    weights[i] = sensed[i].perceived * response_amplitude(d, sigma);
    total += weights[i];
  }
  if (total <= 0.0) return std::nullopt;
  double r = rng.uniform01() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < sensed.size(); ++i) {
    acc += weights[i];
    if (r < acc) return sensed[i].pos;
  }
  return sensed.back().pos;  // guards against rounding at r == total
}

namespace {

// Minimal signed displacement from a to b along one axis.
int axis_delta(int a, int b, int extent, bool wraps) {
  int d = b - a;
  if (!wraps) return d;
  if (d > extent / 2) d -= extent;
  if (d < -extent / 2) d += extent;
  return d;
}

bool free_cell(const std::optional<Position>& cell, const Occupancy& occ) {
  return cell.has_value() && !occ.occupied(*cell);
}

}  // namespace

Position step_move(const AgentState& agent, std::optional<Position> attractor,
                   const Occupancy& occ, const GridSpec& spec, Rng& rng) {
  const Position pos = agent.pos;
  if (!attractor) {
    std::vector<Position> free;
    for (Dir d : kDirs) {
      auto cell = neighbor(pos, d, spec);
      if (free_cell(cell, occ)) free.push_back(*cell);
    }
    if (free.empty()) return pos;
    return free[rng.uniform_below(free.size())];
  }

  const bool wraps = spec.boundary == Boundary::Toroidal;
  const int dx = axis_delta(pos.x, attractor->x, spec.width, wraps);
  const int dy = axis_delta(pos.y, attractor->y, spec.height, wraps);

  bool along_x;
  if (std::abs(dx) > std::abs(dy)) {
    along_x = true;
  } else if (std::abs(dy) > std::abs(dx)) {
    along_x = false;
  } else {
    along_x = rng.uniform_below(2) == 0;
  }

  Dir primary = along_x ? (dx > 0 ? Dir::Right : Dir::Left)
                        : (dy > 0 ? Dir::Down : Dir::Up);
  auto cell = neighbor(pos, primary, spec);
  if (free_cell(cell, occ)) return *cell;

  Dir perp[2] = {along_x ? Dir::Up : Dir::Left,
                 along_x ? Dir::Down : Dir::Right};
  if (rng.uniform_below(2) == 1) std::swap(perp[0], perp[1]);
  for (Dir d : perp) {
    cell = neighbor(pos, d, spec);
    if (free_cell(cell, occ)) return *cell;
  }
  return pos;
}

double update_priority(const AgentState& agent, const RewardTable& table,
                       const Occupancy& occ, const LabeledMask& mask,
                       double priority_min, double priority_max) {
  double d = table.delta(mask.at(agent.pos), occ.neighbor_count(agent.pos));
  return std::clamp(agent.priority + d, priority_min, priority_max);
}

void validate_seal_config(const SealConfig& cfg, const Pattern& pattern,
                          int agent_count) {
  if (!(cfg.active_fraction > 0.0) || cfg.active_fraction > 1.0) {
    throw ConfigError("active_fraction must be in (0, 1]");
  }
  if (cfg.sense_radius < 1 ||
      2 * cfg.sense_radius + 1 >
          std::min(pattern.spec.width, pattern.spec.height)) {
    throw ConfigError("sense_radius out of range for this grid");
  }
  if (!(cfg.response_sigma > 0.0)) {
    throw ConfigError("response_sigma must be positive");
  }
  if (cfg.pheromone.decay_factor < 0.0 || cfg.pheromone.decay_factor >= 1.0) {
    throw ConfigError("decay_factor must be in [0, 1)");
  }
  if (!(cfg.pheromone.deposit_inc > 0.0) ||
      !(cfg.pheromone.deposit_dec > 0.0) || !(cfg.pheromone.amount_cap > 0.0)) {
    throw ConfigError("pheromone deposit/cap parameters must be positive");
  }
  if (cfg.noise.std < 0.0) throw ConfigError("noise std must be >= 0");
  if (cfg.max_iterations < 0) throw ConfigError("max_iterations must be >= 0");
  if (!(cfg.priority_min < cfg.priority_max)) {
    throw ConfigError("priority clamp must satisfy min < max");
  }
  if (agent_count < 0) throw ConfigError("agent_count must be >= 0");
  if (agent_count > pattern.spec.cell_count()) {
    throw ConfigError("agent_count " + std::to_string(agent_count) +
                      " exceeds grid capacity " +
                      std::to_string(pattern.spec.cell_count()));
  }
}

std::vector<Position> initial_positions(const GridSpec& spec, int agent_count,
                                        Rng& rng) {
  std::vector<std::uint32_t> cells(spec.cell_count());
  std::iota(cells.begin(), cells.end(), 0u);
  rng.shuffle(cells);
  std::vector<Position> out;
  out.reserve(agent_count);
  for (int i = 0; i < agent_count; ++i) {
    out.push_back({static_cast<int>(cells[i]) % spec.width,
                   static_cast<int>(cells[i]) / spec.width});
  }
  return out;
}

SealWorld::SealWorld(const Pattern& pattern, const SealConfig& cfg,
                     int agent_count)
    : spec_(pattern.spec),
      mask_(pattern.mask),
      cfg_(cfg),
      occ_(pattern.spec),
      field_(pattern.spec, cfg.pheromone),
      rng_(cfg.seed) {
  validate_seal_config(cfg, pattern, agent_count);
  std::vector<Position> placed = initial_positions(spec_, agent_count, rng_);
  agents_.reserve(agent_count);
  for (int i = 0; i < agent_count; ++i) {
    occ_.place(static_cast<std::uint32_t>(i), placed[i]);
    agents_.push_back({static_cast<std::uint32_t>(i), placed[i], 0.0});
  }
}

std::vector<MoveEvent> SealWorld::tick_movement() {
  std::vector<std::uint32_t> active =
      select_active(agents_, cfg_.active_fraction, rng_);
  rng_.shuffle(active);
  std::vector<MoveEvent> moves;
  moves.reserve(active.size());
  for (std::uint32_t id : active) {
    AgentState& agent = agents_[id];
    auto sensed = field_.sense(agent.pos, cfg_.sense_radius, cfg_.noise, rng_);
    auto attractor =
        select_attractor(agent, sensed, cfg_.response_sigma, spec_, rng_);
    Position next = step_move(agent, attractor, occ_, spec_, rng_);
    moves.push_back({id, agent.pos, next});
    occ_.move_agent(id, next);
    agent.pos = next;
    field_.deposit(next, mask_.at(next));
  }
  return moves;
}

void SealWorld::finish_tick() {
  field_.decay_tick();
  check_invariants();
}

std::vector<std::uint32_t> SealWorld::tick() {
  std::vector<MoveEvent> moves = tick_movement();
  for (AgentState& agent : agents_) {
    agent.priority = update_priority(agent, cfg_.reward_table, occ_, mask_,
                                     cfg_.priority_min, cfg_.priority_max);
  }
  finish_tick();
  std::vector<std::uint32_t> active(moves.size());
  for (std::size_t i = 0; i < moves.size(); ++i) active[i] = moves[i].id;
  return active;
}

RunRecord SealWorld::run() {
  RunRecord record;
  record.seed = cfg_.seed;
  record.similarity.reserve(cfg_.max_iterations);
  for (int i = 0; i < cfg_.max_iterations; ++i) {
    record.similarity.push_back(current_similarity());
    tick();
  }
  record.final_similarity = current_similarity();
  record.final_occupancy = occ_;
  return record;
}

void SealWorld::check_invariants() const {
  occ_.check_consistency();
  if (occ_.agent_count() != agents_.size()) {
    throw InvariantViolation("seal: agent count drifted");
  }
  field_.check_bounds();
}

RunRecord run_seal(const SealConfig& cfg, const Pattern& pattern,
                   int agent_count) {
  SealWorld world(pattern, cfg, agent_count);
  return world.run();
}

std::string frame_to_text(const Occupancy& occ, const LabeledMask& mask) {
  const GridSpec& spec = occ.spec();
  std::string out = "P-PAT " + std::to_string(spec.width) + " " +
                    std::to_string(spec.height) + "\n";
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      Position p{x, y};
      out += occ.occupied(p) ? 'A' : (mask.at(p) ? '1' : '0');
    }
    out += '\n';
  }
  return out;
}

}  // namespace sealci
