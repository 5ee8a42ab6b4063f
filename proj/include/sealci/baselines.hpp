#pragma once

#include <array>
#include <vector>

#include "sealci/federated.hpp"
#include "sealci/rng.hpp"
#include "sealci/seal.hpp"

namespace sealci {

// 2 labels x 16 neighbor patterns x 9 gradient directions.
inline constexpr int kStateCount = 288;

/// Injective key for a local view: label + 2 * neighbor_bits +
/// 32 * gradient_dir.
int encode_state(const LocalView& view);

/// Inverse of encode_state; throws std::invalid_argument outside [0, 288).
LocalView decode_state(int key);

/// Dense table over the full state space, zero-initialized. Unvisited
/// entries therefore read as 0.
struct QTable {
  std::vector<std::array<double, kMoveActions>> rows;

  QTable() : rows(kStateCount) {}

  double& at(int s, int a) { return rows[s][a]; }
  double at(int s, int a) const { return rows[s][a]; }
  double max_value(int s) const;
};

/// Per-pair leniency temperatures, all starting at t0.
struct TemperatureTable {
  std::vector<std::array<double, kMoveActions>> rows;

  explicit TemperatureTable(double t0);

  double& at(int s, int a) { return rows[s][a]; }
  double at(int s, int a) const { return rows[s][a]; }
};

struct HqlParams {
  double alpha = 0.1;
  double beta = 0.01;  // learning rate under negative error, beta <= alpha
  double gamma = 0.9;
};

struct LenientParams {
  double alpha = 0.1;
  double gamma = 0.9;
  double t0 = 1.0;     // initial temperature
  double kappa = 0.995;  // multiplicative cooling per visit
  double k = 1.0;      // leniency shape
};

/// exp(-k / max(temperature, guard)). Underflows to exactly 0 once cooled,
/// which is what makes a cooled lenient learner collapse onto IQL.
double leniency(double temperature, double k);

/// Q(s,a) += alpha * (r + gamma * max_a' Q(s',a') - Q(s,a)). Touches only
/// the (s,a) entry.
void iql_update(QTable& q, int s, int a, double r, int s_next, double alpha,
                double gamma);

/// Like iql_update but the step size drops to beta when the TD error is
/// negative.
void hql_update(QTable& q, int s, int a, double r, int s_next,
                const HqlParams& p);

/// Lenient update: positive TD errors always apply; non-positive ones apply
/// with probability 1 - leniency(T(s,a)), and the pair's temperature cools
/// by kappa either way. Zero leniency skips the random draw entirely.
/// Returns whether the update was applied.
bool lmrl_update(QTable& q, TemperatureTable& temps, int s, int a, double r,
                 int s_next, const LenientParams& p, Rng& rng);

/// Uniform action with probability epsilon, otherwise the argmax with
/// uniform tie-breaking.
int epsilon_greedy(const QTable& q, int s, double epsilon, Rng& rng);

enum class BaselineAlgo { Iql, Hql, Lmrl };

const char* algo_name(BaselineAlgo algo);

struct BaselineParams {
  double alpha = 0.1;
  double beta = 0.01;
  double gamma = 0.9;
  double epsilon_start = 0.1;
  double epsilon_end = 0.01;
  double t0 = 1.0;
  double kappa = 0.995;
  double k = 1.0;
};

void validate_baseline_params(const BaselineParams& p);

/// Independent tabular learners on the pattern task: same grid, mask, seeded
/// placement, and reward signal as the cooperative engine, but each agent
/// follows its own epsilon-greedy table over the 5 moves. No pheromone, so
/// the gradient component of every observed view is 0.
RunRecord run_baseline(BaselineAlgo algo, const SealConfig& env,
                       const Pattern& pattern, int agent_count,
                       const BaselineParams& params);

}  // namespace sealci
