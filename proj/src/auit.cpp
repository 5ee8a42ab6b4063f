#include "sealci/auit.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sealci/errors.hpp"

namespace sealci {

namespace {

constexpr const char* kMnemonics[kAuitActionCount] = {
    "L", "R", "U", "D", "UL", "UR", "DL", "DR", "S"};

int wrap_coord(int v, int extent) {
  int m = v % extent;
  return m < 0 ? m + extent : m;
}

// Minimal signed displacement from a to b on a ring of this extent.
int wrap_delta(int from, int to, int extent) {
  int d = to - from;
  if (d > extent / 2) d -= extent;
  if (d < -extent / 2) d += extent;
  return d;
}

int axis_gap(int a, int b, int extent) {
  int d = std::abs(a - b);
  return std::min(d, extent - d);
}

int chebyshev_torus(Position a, Position b, const GridSpec& spec) {
  return std::max(axis_gap(a.x, b.x, spec.width),
                  axis_gap(a.y, b.y, spec.height));
}

std::string_view trimmed(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r' || s.front() == '\n')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

const char* auit_action_mnemonic(AuitAction a) {
  return kMnemonics[static_cast<int>(a)];
}

Position auit_move(Position pos, AuitAction a, const GridSpec& spec) {
  auto [dx, dy] = kAuitOffsets[static_cast<int>(a)];
  return {wrap_coord(pos.x + dx, spec.width),
          wrap_coord(pos.y + dy, spec.height)};
}

MovementPattern parse_movement_pattern(std::string_view text) {
  MovementPattern p;
  std::string_view rest = trimmed(text);
  if (rest.empty()) throw ConfigError("movement pattern: empty");
  while (true) {
    std::size_t comma = rest.find(',');
    std::string_view token = trimmed(rest.substr(0, comma));
    bool found = false;
    for (int i = 0; i < kAuitActionCount; ++i) {
      if (token == kMnemonics[i]) {
        p.actions.push_back(static_cast<AuitAction>(i));
        found = true;
        break;
      }
    }
    if (!found) {
      throw ConfigError("movement pattern: unknown action '" +
                        std::string(token) + "'");
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return p;
}

std::string movement_pattern_text(const MovementPattern& p) {
  std::string out;
  for (std::size_t i = 0; i < p.actions.size(); ++i) {
    if (i) out += ',';
    out += auit_action_mnemonic(p.actions[i]);
  }
  return out;
}

MovementPattern random_movement_pattern(std::size_t length,
                                        std::uint64_t seed) {
  Rng rng(seed);
  MovementPattern p;
  p.actions.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    p.actions.push_back(static_cast<AuitAction>(
        rng.uniform_below(kAuitActionCount)));
  }
  return p;
}

std::vector<AuitAction> expand_pattern(const MovementPattern& p,
                                       std::size_t length) {
  if (p.actions.empty()) {
    throw std::invalid_argument("expand_pattern: empty pattern");
  }
  std::vector<AuitAction> out(length);
  for (std::size_t i = 0; i < length; ++i) {
    out[i] = p.actions[i % p.actions.size()];
  }
  return out;
}

AuitAction PatternCursor::advance() {
  if (!pattern || pattern->actions.empty()) {
    throw std::invalid_argument("pattern cursor: empty pattern");
  }
  AuitAction a = pattern->actions[index % pattern->actions.size()];
  ++index;
  return a;
}

double max_torus_distance(const GridSpec& spec) {
  return std::hypot(spec.width / 2, spec.height / 2);
}

double auit_reward(Position agent, Position good, Position evil,
                   const GridSpec& spec) {
  double d_good = torus_distance(agent, good, spec);
  double d_evil = torus_distance(agent, evil, spec);
  return (d_evil - d_good) / max_torus_distance(spec);
}

std::vector<double> step_auit(AuitSpace& space,
                              const std::vector<AuitAction>& actions,
                              PatternCursor& good_cursor,
                              PatternCursor& evil_cursor) {
  if (actions.size() != space.agents.size()) {
    throw std::invalid_argument("step_auit: one action per agent required");
  }
  for (std::size_t i = 0; i < actions.size(); ++i) {
    space.agents[i] = auit_move(space.agents[i], actions[i], space.spec);
  }
  space.good = auit_move(space.good, good_cursor.advance(), space.spec);
  space.evil = auit_move(space.evil, evil_cursor.advance(), space.spec);

  std::vector<double> rewards(space.agents.size());
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    rewards[i] = auit_reward(space.agents[i], space.good, space.evil,
                             space.spec);
  }
  return rewards;
}

const char* comm_mode_name(CommMode mode) {
  switch (mode) {
    case CommMode::Direct:
      return "DIRECT";
    case CommMode::Indirect:
      return "INDIRECT";
    case CommMode::Imitation:
      return "IMITATION";
  }
  return "?";
}

std::vector<Observation> observe_objects(const AuitSpace& space,
                                         int sense_radius) {
  std::vector<Observation> obs(space.agents.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    Position p = space.agents[i];
    if (chebyshev_torus(p, space.good, space.spec) <= sense_radius) {
      obs[i].good = {true, space.good};
    }
    if (chebyshev_torus(p, space.evil, space.spec) <= sense_radius) {
      obs[i].evil = {true, space.evil};
    }
  }
  return obs;
}

namespace {

Sighting biased_sighting(const Sighting& s, double std, const GridSpec& spec,
                         Rng& rng) {
  if (!s.seen || std <= 0.0) return s;
  long bx = std::llround(s.pos.x + rng.normal(0.0, std));
  long by = std::llround(s.pos.y + rng.normal(0.0, std));
  return {true,
          {wrap_coord(static_cast<int>(bx % spec.width), spec.width),
           wrap_coord(static_cast<int>(by % spec.height), spec.height)}};
}

}  // namespace

std::vector<Belief> share_observations(const AuitSpace& space,
                                       const std::vector<Observation>& obs,
                                       const std::vector<AuitAction>& last_actions,
                                       const CommParams& comm, Rng& rng) {
  const std::size_t n = space.agents.size();
  if (obs.size() != n || last_actions.size() != n) {
    throw std::invalid_argument("share_observations: size mismatch");
  }
  std::vector<Belief> beliefs(n);
  for (std::size_t i = 0; i < n; ++i) {
    Belief& b = beliefs[i];
    switch (comm.mode) {
      case CommMode::Direct:
        for (std::size_t j = 0; j < n; ++j) {
          b.reports.push_back({static_cast<std::uint32_t>(j), obs[j]});
        }
        break;
      case CommMode::Indirect:
        for (std::size_t j = 0; j < n; ++j) {
          Observation o = obs[j];
          if (j != i) {
            o.good = biased_sighting(o.good, comm.bias_std, space.spec, rng);
            o.evil = biased_sighting(o.evil, comm.bias_std, space.spec, rng);
          }
          b.reports.push_back({static_cast<std::uint32_t>(j), o});
        }
        break;
      case CommMode::Imitation:
        b.reports.push_back({static_cast<std::uint32_t>(i), obs[i]});
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          if (chebyshev_torus(space.agents[i], space.agents[j], space.spec) <=
              comm.range) {
            b.observed_actions.emplace_back(static_cast<std::uint32_t>(j),
                                            last_actions[j]);
          }
        }
        break;
    }
  }
  return beliefs;
}

int pattern_complexity(const MovementPattern& p, std::size_t length) {
  std::vector<AuitAction> symbols = expand_pattern(p, length);
  std::vector<unsigned char> bytes(length);
  for (std::size_t i = 0; i < length; ++i) {
    bytes[i] = static_cast<unsigned char>('0' + static_cast<int>(symbols[i]));
  }
  uLongf dest_len = compressBound(static_cast<uLong>(length));
  std::vector<unsigned char> out(dest_len);
  int rc = compress2(out.data(), &dest_len, bytes.data(),
                     static_cast<uLong>(length), 9);
  if (rc != Z_OK) {
    throw std::runtime_error("pattern_complexity: compression failed");
  }
  return static_cast<int>(dest_len) * 8;
}

double env_entropy(const GridSpec& spec) {
  return std::log2(static_cast<double>(spec.width) *
                   static_cast<double>(spec.height));
}

const char* auit_policy_name(AuitPolicy policy) {
  switch (policy) {
    case AuitPolicy::Stay:
      return "STAY";
    case AuitPolicy::Random:
      return "RANDOM";
    case AuitPolicy::GreedyGood:
      return "GREEDY_GOOD";
  }
  return "?";
}

void validate_auit_config(const AuitEvalConfig& cfg,
                          const std::vector<AuitCell>& grid) {
  if (cfg.team_size < 1) throw ConfigError("team_size must be >= 1");
  if (cfg.sense_radius < 0) throw ConfigError("sense_radius must be >= 0");
  if (cfg.episodes < 0) throw ConfigError("episodes must be >= 0");
  if (cfg.steps_per_episode < 1) {
    throw ConfigError("steps_per_episode must be >= 1");
  }
  if (cfg.comm.bias_std < 0.0) throw ConfigError("bias_std must be >= 0");
  if (cfg.comm.range < 0) throw ConfigError("comm range must be >= 0");
  int prev = 0;
  for (int n : cfg.prefix_checkpoints) {
    if (n <= prev || n > cfg.steps_per_episode) {
      throw ConfigError("prefix checkpoints must ascend within the episode");
    }
    prev = n;
  }
  for (const AuitCell& cell : grid) {
    if (cell.space.boundary != Boundary::Toroidal) {
      throw ConfigError("auit space must be toroidal");
    }
    if (cell.space.width < 1 || cell.space.height < 1) {
      throw ConfigError("auit space must be non-empty");
    }
    if (cell.good_pattern.actions.empty() ||
        cell.evil_pattern.actions.empty()) {
      throw ConfigError("auit movement patterns must be non-empty");
    }
  }
}

namespace {

AuitAction action_toward(int sx, int sy) {
  if (sx < 0 && sy == 0) return AuitAction::Left;
  if (sx > 0 && sy == 0) return AuitAction::Right;
  if (sx == 0 && sy < 0) return AuitAction::Up;
  if (sx == 0 && sy > 0) return AuitAction::Down;
  if (sx < 0 && sy < 0) return AuitAction::UpLeft;
  if (sx > 0 && sy < 0) return AuitAction::UpRight;
  if (sx < 0 && sy > 0) return AuitAction::DownLeft;
  if (sx > 0 && sy > 0) return AuitAction::DownRight;
  return AuitAction::Stay;
}

AuitAction policy_action(AuitPolicy policy, const AuitSpace& space,
                         std::size_t i, const Belief& belief, Rng& rng) {
  switch (policy) {
    case AuitPolicy::Stay:
      return AuitAction::Stay;
    case AuitPolicy::Random:
      return static_cast<AuitAction>(rng.uniform_below(kAuitActionCount));
    case AuitPolicy::GreedyGood: {
      for (const Report& rep : belief.reports) {
        if (!rep.obs.good.seen) continue;
        Position target = rep.obs.good.pos;
        int dx = wrap_delta(space.agents[i].x, target.x, space.spec.width);
        int dy = wrap_delta(space.agents[i].y, target.y, space.spec.height);
        return action_toward((dx > 0) - (dx < 0), (dy > 0) - (dy < 0));
      }
      // Nothing known about Good: copy a neighbor if one was heard.
      if (!belief.observed_actions.empty()) {
        return belief.observed_actions.front().second;
      }
      return AuitAction::Stay;
    }
  }
  return AuitAction::Stay;
}

}  // namespace

std::vector<AuitScoreRow> evaluate_ci(const AuitEvalConfig& cfg,
                                      const std::vector<AuitCell>& grid) {
  validate_auit_config(cfg, grid);

  std::vector<int> checkpoints = cfg.prefix_checkpoints;
  if (checkpoints.empty()) checkpoints.push_back(cfg.steps_per_episode);

  std::vector<AuitScoreRow> rows;
  rows.reserve(grid.size() * cfg.episodes * checkpoints.size());

  for (std::size_t c = 0; c < grid.size(); ++c) {
    const AuitCell& cell = grid[c];
    for (int ep = 0; ep < cfg.episodes; ++ep) {
      Rng rng(derive_seed(derive_seed(cfg.seed, c), ep));

      AuitSpace space;
      space.spec = cell.space;
      auto random_cell = [&] {
        return Position{
            static_cast<int>(rng.uniform_below(cell.space.width)),
            static_cast<int>(rng.uniform_below(cell.space.height))};
      };
      space.agents.resize(cfg.team_size);
      for (Position& p : space.agents) p = random_cell();
      space.good = random_cell();
      space.evil = random_cell();

      PatternCursor good_cursor{&cell.good_pattern, 0};
      PatternCursor evil_cursor{&cell.evil_pattern, 0};
      std::vector<AuitAction> last(cfg.team_size, AuitAction::Stay);
      std::vector<AuitAction> actions(cfg.team_size, AuitAction::Stay);

      std::vector<double> team_scores;
      team_scores.reserve(cfg.steps_per_episode);
      for (int step = 0; step < cfg.steps_per_episode; ++step) {
        auto obs = observe_objects(space, cfg.sense_radius);
        auto beliefs = share_observations(space, obs, last, cfg.comm, rng);
        for (int i = 0; i < cfg.team_size; ++i) {
          actions[i] = policy_action(cfg.policy, space,
                                     static_cast<std::size_t>(i), beliefs[i],
                                     rng);
        }
        auto rewards = step_auit(space, actions, good_cursor, evil_cursor);
        double sum = 0.0;
        for (double r : rewards) sum += r;
        team_scores.push_back(sum / static_cast<double>(cfg.team_size));
        last = actions;
      }

      double running = 0.0;
      std::size_t next_cp = 0;
      for (int step = 0; step < cfg.steps_per_episode; ++step) {
        running += team_scores[step];
        while (next_cp < checkpoints.size() &&
               checkpoints[next_cp] == step + 1) {
          rows.push_back({cell.pattern_id, cell.space.width,
                          cell.space.height, cfg.comm.mode, ep, step + 1,
                          running / static_cast<double>(step + 1)});
          ++next_cp;
        }
      }
    }
  }
  return rows;
}

}  // namespace sealci
