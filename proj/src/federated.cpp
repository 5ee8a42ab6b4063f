#include "sealci/federated.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sealci {

namespace {

// Compass offsets in reporting order N, NE, E, SE, S, SW, W, NW.
constexpr int kCompass[8][2] = {{0, -1}, {1, -1}, {1, 0},  {1, 1},
                                {0, 1},  {-1, 1}, {-1, 0}, {-1, -1}};

}  // namespace

int pheromone_gradient_direction(const PheromoneField& field, Position pos) {
  const GridSpec& spec = field.spec();
  const bool wrap = spec.boundary == Boundary::Toroidal;
  double best = field.amount(pos);
  int dir = 0;
  for (int i = 0; i < 8; ++i) {
    Position p{pos.x + kCompass[i][0], pos.y + kCompass[i][1]};
    if (wrap) {
      p.x = ((p.x % spec.width) + spec.width) % spec.width;
      p.y = ((p.y % spec.height) + spec.height) % spec.height;
    } else if (p.x < 0 || p.x >= spec.width || p.y < 0 || p.y >= spec.height) {
      continue;
    }
    if (field.amount(p) > best) {
      best = field.amount(p);
      dir = i + 1;
    }
  }
  return dir;
}

LocalView observe_view(Position pos, const Occupancy& occ,
                       const LabeledMask& mask, const PheromoneField& field) {
  LocalView view;
  view.on_labeled = mask.at(pos);
  const GridSpec& spec = occ.spec();
  for (int i = 0; i < 4; ++i) {
    auto cell = neighbor(pos, kDirs[i], spec);
    if (cell && occ.occupied(*cell)) view.neighbor_bits |= (1u << i);
  }
  view.gradient_dir = pheromone_gradient_direction(field, pos);
  return view;
}

std::vector<double> featurize(const LocalView& view) {
  std::vector<double> f(kFeatureDim, 0.0);
  f[0] = view.on_labeled ? 1.0 : 0.0;
  for (int i = 0; i < 4; ++i) {
    f[1 + i] = (view.neighbor_bits >> i) & 1u ? 1.0 : 0.0;
  }
  f[5 + view.gradient_dir] = 1.0;
  return f;
}

double q_value(const ParamVector& params, const std::vector<double>& features,
               int action) {
  const std::size_t dim = features.size();
  if (action < 0 || params.size() % dim != 0 ||
      static_cast<std::size_t>(action + 1) * dim > params.size()) {
    throw std::invalid_argument("q_value: dimension mismatch");
  }
  double q = 0.0;
  const double* block = params.data() + static_cast<std::size_t>(action) * dim;
  for (std::size_t i = 0; i < dim; ++i) q += block[i] * features[i];
  return q;
}

namespace {

int action_count(const ParamVector& params, std::size_t feature_dim) {
  return static_cast<int>(params.size() / feature_dim);
}

double max_next_q(const ParamVector& params, const Transition& t) {
  if (t.terminal) return 0.0;
  const int actions = action_count(params, t.next_features.size());
  double best = q_value(params, t.next_features, 0);
  for (int a = 1; a < actions; ++a) {
    best = std::max(best, q_value(params, t.next_features, a));
  }
  return best;
}

}  // namespace

double td_loss(const ParamVector& params, const ExperienceBatch& batch,
               double gamma) {
  double loss = 0.0;
  for (const Transition& t : batch) {
    double target = t.reward + gamma * max_next_q(params, t);
    double delta = target - q_value(params, t.features, t.action);
    loss += delta * delta;
  }
  return loss / static_cast<double>(batch.size());
}

GradientVector local_gradient(const ParamVector& params,
                              const ExperienceBatch& batch, double gamma) {
  if (batch.empty()) {
    throw std::invalid_argument("local_gradient: empty batch");
  }
  GradientVector grad(params.size(), 0.0);
  const double scale = 2.0 / static_cast<double>(batch.size());
  for (const Transition& t : batch) {
    double target = t.reward + gamma * max_next_q(params, t);
    double delta = target - q_value(params, t.features, t.action);
    double* block =
        grad.data() + static_cast<std::size_t>(t.action) * t.features.size();
    for (std::size_t i = 0; i < t.features.size(); ++i) {
      block[i] -= scale * delta * t.features[i];
    }
  }
  return grad;
}

GradientVector aggregate(const std::vector<GradientVector>& grads) {
  if (grads.empty()) throw std::invalid_argument("aggregate: empty list");
  const std::size_t dim = grads.front().size();
  GradientVector mean(dim, 0.0);
  for (const GradientVector& g : grads) {
    if (g.size() != dim) {
      throw std::invalid_argument("aggregate: dimension mismatch");
    }
    for (std::size_t i = 0; i < dim; ++i) mean[i] += g[i];
  }
  for (double& v : mean) v /= static_cast<double>(grads.size());
  return mean;
}

ParamVector apply_update(const ParamVector& params, const GradientVector& grad,
                         double learning_rate) {
  if (params.size() != grad.size()) {
    throw std::invalid_argument("apply_update: dimension mismatch");
  }
  ParamVector next(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    next[i] = params[i] - learning_rate * grad[i];
  }
  return next;
}

ParamVector federated_round(const ParamVector& params,
                            const std::vector<ExperienceBatch>& batches,
                            double gamma, double learning_rate) {
  std::vector<GradientVector> grads;
  grads.reserve(batches.size());
  for (const ExperienceBatch& b : batches) {
    grads.push_back(local_gradient(params, b, gamma));
  }
  return apply_update(params, aggregate(grads), learning_rate);
}

namespace {

int move_action(Position from, Position to, const GridSpec& spec) {
  int dx = to.x - from.x;
  int dy = to.y - from.y;
  if (std::abs(dx) > 1) dx = dx > 0 ? dx - spec.width : dx + spec.width;
  if (std::abs(dy) > 1) dy = dy > 0 ? dy - spec.height : dy + spec.height;
  if (dy == -1) return 0;  // UP
  if (dy == 1) return 1;   // DOWN
  if (dx == -1) return 2;  // LEFT
  if (dx == 1) return 3;   // RIGHT
  return 4;                // STAY
}

}  // namespace

LearnedSealResult run_seal_learned(const SealConfig& cfg,
                                   const Pattern& pattern, int agent_count,
                                   double gamma, double learning_rate) {
  SealWorld world(pattern, cfg, agent_count);
  ParamVector params(kParamDim, 0.0);

  LearnedSealResult result;
  result.similarity.reserve(cfg.max_iterations);
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    result.similarity.push_back(world.current_similarity());

    // Value estimates act as action priorities for the activation step.
    std::vector<std::vector<double>> features(agent_count);
    for (const AgentState& agent : world.agents()) {
      features[agent.id] = featurize(observe_view(
          agent.pos, world.occupancy(), world.mask(), world.field()));
      double best = q_value(params, features[agent.id], 0);
      for (int a = 1; a < kMoveActions; ++a) {
        best = std::max(best, q_value(params, features[agent.id], a));
      }
      world.set_priority(agent.id, best);
    }

    std::vector<MoveEvent> moves = world.tick_movement();

    // Movers report their transition; the cloud fuses one gradient per
    // agent and applies the mean.
    std::vector<ExperienceBatch> batches;
    for (const MoveEvent& move : moves) {
      Transition t;
      t.features = features[move.id];
      t.action = move_action(move.from, move.to, world.occupancy().spec());
      t.reward = -cfg.reward_table.delta(
          world.mask().at(move.to), world.occupancy().neighbor_count(move.to));
      t.next_features = featurize(observe_view(
          move.to, world.occupancy(), world.mask(), world.field()));
      batches.push_back({std::move(t)});
    }
    if (!batches.empty()) {
      params = federated_round(params, batches, gamma, learning_rate);
    }
    world.finish_tick();
  }
  result.params = std::move(params);
  return result;
}

}  // namespace sealci
