#include "sealci/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sealci/errors.hpp"

namespace sealci {

int encode_state(const LocalView& view) {
  return (view.on_labeled ? 1 : 0) + 2 * view.neighbor_bits +
         32 * view.gradient_dir;
}

LocalView decode_state(int key) {
  if (key < 0 || key >= kStateCount) {
    throw std::invalid_argument("decode_state: key out of range");
  }
  LocalView v;
  v.on_labeled = (key & 1) != 0;
  v.neighbor_bits = static_cast<std::uint8_t>((key >> 1) & 15);
  v.gradient_dir = key >> 5;
  return v;
}

double QTable::max_value(int s) const {
  const auto& row = rows[s];
  return *std::max_element(row.begin(), row.end());
}

TemperatureTable::TemperatureTable(double t0) : rows(kStateCount) {
  for (auto& row : rows) row.fill(t0);
}

double leniency(double temperature, double k) {
  return std::exp(-k / std::max(temperature, 1e-12));
}

void iql_update(QTable& q, int s, int a, double r, int s_next, double alpha,
                double gamma) {
  double delta = r + gamma * q.max_value(s_next) - q.at(s, a);
  q.at(s, a) += alpha * delta;
}

void hql_update(QTable& q, int s, int a, double r, int s_next,
                const HqlParams& p) {
  double delta = r + p.gamma * q.max_value(s_next) - q.at(s, a);
  q.at(s, a) += (delta >= 0.0 ? p.alpha : p.beta) * delta;
}

bool lmrl_update(QTable& q, TemperatureTable& temps, int s, int a, double r,
                 int s_next, const LenientParams& p, Rng& rng) {
  double delta = r + p.gamma * q.max_value(s_next) - q.at(s, a);
  bool apply = true;
  if (delta <= 0.0) {
    double l = leniency(temps.at(s, a), p.k);
    if (l > 0.0) apply = rng.uniform01() < 1.0 - l;
  }
  if (apply) q.at(s, a) += p.alpha * delta;
  temps.at(s, a) *= p.kappa;
  return apply;
}

int epsilon_greedy(const QTable& q, int s, double epsilon, Rng& rng) {
  if (epsilon > 0.0 && rng.uniform01() < epsilon) {
    return static_cast<int>(rng.uniform_below(kMoveActions));
  }
  double best = q.at(s, 0);
  for (int a = 1; a < kMoveActions; ++a) best = std::max(best, q.at(s, a));
  int ties[kMoveActions];
  int tie_count = 0;
  for (int a = 0; a < kMoveActions; ++a) {
    if (q.at(s, a) == best) ties[tie_count++] = a;
  }
  if (tie_count == 1) return ties[0];
  return ties[rng.uniform_below(static_cast<std::uint64_t>(tie_count))];
}

const char* algo_name(BaselineAlgo algo) {
  switch (algo) {
    case BaselineAlgo::Iql:
      return "IQL";
    case BaselineAlgo::Hql:
      return "HQL";
    case BaselineAlgo::Lmrl:
      return "LMRL";
  }
  return "?";
}

void validate_baseline_params(const BaselineParams& p) {
  if (!(p.alpha > 0.0) || p.alpha > 1.0) {
    throw ConfigError("alpha must be in (0, 1]");
  }
  if (!(p.beta > 0.0) || p.beta > p.alpha) {
    throw ConfigError("beta must be in (0, alpha]");
  }
  if (p.gamma < 0.0 || p.gamma >= 1.0) {
    throw ConfigError("gamma must be in [0, 1)");
  }
  if (p.epsilon_start < 0.0 || p.epsilon_start > 1.0 || p.epsilon_end < 0.0 ||
      p.epsilon_end > 1.0) {
    throw ConfigError("epsilon bounds must be in [0, 1]");
  }
  if (p.t0 < 0.0) throw ConfigError("t0 must be >= 0");
  if (!(p.kappa > 0.0) || p.kappa >= 1.0) {
    throw ConfigError("kappa must be in (0, 1)");
  }
  if (!(p.k > 0.0)) throw ConfigError("k must be positive");
}

namespace {

double epsilon_at(const BaselineParams& p, int iter, int total) {
  if (total <= 1) return p.epsilon_start;
  double t = static_cast<double>(iter) / static_cast<double>(total - 1);
  return p.epsilon_start + (p.epsilon_end - p.epsilon_start) * t;
}

void check_q_bounds(const std::vector<QTable>& tables, double r_max,
                    double gamma) {
  double bound = r_max / (1.0 - gamma) + 1e-9;
  for (const QTable& q : tables) {
    for (int s = 0; s < kStateCount; ++s) {
      for (int a = 0; a < kMoveActions; ++a) {
        double v = q.at(s, a);
        if (!std::isfinite(v) || std::abs(v) > bound) {
          throw InvariantViolation("baseline: q-value escaped reward bound");
        }
      }
    }
  }
}

}  // namespace

RunRecord run_baseline(BaselineAlgo algo, const SealConfig& env,
                       const Pattern& pattern, int agent_count,
                       const BaselineParams& params) {
  validate_seal_config(env, pattern, agent_count);
  validate_baseline_params(params);

  const GridSpec& spec = pattern.spec;
  const LabeledMask& mask = pattern.mask;
  Rng rng(env.seed);

  Occupancy occ(spec);
  std::vector<Position> pos = initial_positions(spec, agent_count, rng);
  for (int i = 0; i < agent_count; ++i) {
    occ.place(static_cast<std::uint32_t>(i), pos[i]);
  }

  // The untouched field keeps every view's gradient component at 0.
  PheromoneField no_field(spec, env.pheromone);

  std::vector<QTable> q(agent_count);
  std::vector<TemperatureTable> temps;
  if (algo == BaselineAlgo::Lmrl) {
    temps.assign(agent_count, TemperatureTable(params.t0));
  }
  HqlParams hql{params.alpha, params.beta, params.gamma};
  LenientParams lmrl{params.alpha, params.gamma, params.t0, params.kappa,
                     params.k};

  double r_max = 0.0;
  for (double d : env.reward_table.deltas) r_max = std::max(r_max, std::abs(d));

  RunRecord record;
  record.seed = env.seed;
  record.similarity.reserve(env.max_iterations);

  std::vector<std::uint32_t> order(agent_count);
  std::iota(order.begin(), order.end(), 0u);

  for (int iter = 0; iter < env.max_iterations; ++iter) {
    record.similarity.push_back(similarity(occ, mask));
    double eps = epsilon_at(params, iter, env.max_iterations);
    rng.shuffle(order);
    for (std::uint32_t id : order) {
      int s = encode_state(observe_view(pos[id], occ, mask, no_field));
      int a = epsilon_greedy(q[id], s, eps, rng);

      Position next = pos[id];
      if (a < 4) {
        auto target = neighbor(pos[id], kDirs[a], spec);
        if (target && occ.move_agent(id, *target) == MoveResult::Ok) {
          next = *target;
        }
      }
      pos[id] = next;

      double r = -env.reward_table.delta(mask.at(next),
                                         occ.neighbor_count(next));
      int s_next = encode_state(observe_view(next, occ, mask, no_field));
      switch (algo) {
        case BaselineAlgo::Iql:
          iql_update(q[id], s, a, r, s_next, params.alpha, params.gamma);
          break;
        case BaselineAlgo::Hql:
          hql_update(q[id], s, a, r, s_next, hql);
          break;
        case BaselineAlgo::Lmrl:
          lmrl_update(q[id], temps[id], s, a, r, s_next, lmrl, rng);
          break;
      }
    }
    occ.check_consistency();
  }

  check_q_bounds(q, r_max, params.gamma);
  record.final_similarity = similarity(occ, mask);
  record.final_occupancy = occ;
  return record;
}

}  // namespace sealci
