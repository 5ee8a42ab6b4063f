#pragma once

#include <cstdint>
#include <vector>

#include "sealci/pheromone.hpp"
#include "sealci/seal.hpp"

namespace sealci {

/// What one agent can observe at its own cell: the cell label, which of the
/// four neighbor cells are occupied, and the quantized direction of steepest
/// pheromone ascent (0 = none, 1..8 compass order N, NE, E, SE, S, SW, W, NW).
struct LocalView {
  bool on_labeled = false;
  std::uint8_t neighbor_bits = 0;  // bit order: up, down, left, right
  int gradient_dir = 0;            // 0..8

  bool operator==(const LocalView&) const = default;
};

LocalView observe_view(Position pos, const Occupancy& occ,
                       const LabeledMask& mask, const PheromoneField& field);

/// 0 when no 8-neighbor exceeds the local amount, else 1..8 for the first
/// steepest-ascent direction in compass order.
int pheromone_gradient_direction(const PheromoneField& field, Position pos);

inline constexpr int kFeatureDim = 14;  // 1 label + 4 neighbor bits + 9 dirs
inline constexpr int kMoveActions = 5;  // UP, DOWN, LEFT, RIGHT, STAY

/// Binary/one-hot encoding of a local view, dimension kFeatureDim.
std::vector<double> featurize(const LocalView& view);

struct Transition {
  std::vector<double> features;
  int action = 0;
  double reward = 0.0;
  std::vector<double> next_features;
  bool terminal = false;
};

using ExperienceBatch = std::vector<Transition>;
using ParamVector = std::vector<double>;
using GradientVector = std::vector<double>;

/// Parameter count for a linear per-action value function.
inline constexpr int kParamDim = kMoveActions * kFeatureDim;

/// Dot product of the features with the action's parameter block. Throws on
/// dimension mismatch.
double q_value(const ParamVector& params, const std::vector<double>& features,
               int action);

/// Gradient of the mean squared TD error over the batch, with the bootstrap
/// target held fixed (semi-gradient).
GradientVector local_gradient(const ParamVector& params,
                              const ExperienceBatch& batch, double gamma);

/// Element-wise mean. Throws on an empty list or mismatched dimensions.
GradientVector aggregate(const std::vector<GradientVector>& grads);

ParamVector apply_update(const ParamVector& params, const GradientVector& grad,
                         double learning_rate);

/// One synchronous round: every batch contributes a local gradient, the
/// fused mean is applied once.
ParamVector federated_round(const ParamVector& params,
                            const std::vector<ExperienceBatch>& batches,
                            double gamma, double learning_rate);

/// Mean squared TD error with frozen targets; the loss local_gradient
/// differentiates.
double td_loss(const ParamVector& params, const ExperienceBatch& batch,
               double gamma);

struct LearnedSealResult {
  std::vector<double> similarity;
  ParamVector params;
};

/// SEAL variant that replaces the reward-table priority update with the
/// learned value function: per tick each agent contributes the gradient from
/// its own transition, the cloud fuses them, and priorities become the
/// agents' value estimates.
LearnedSealResult run_seal_learned(const SealConfig& cfg,
                                   const Pattern& pattern, int agent_count,
                                   double gamma, double learning_rate);

}  // namespace sealci
