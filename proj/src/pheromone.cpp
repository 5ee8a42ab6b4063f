#include "sealci/pheromone.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sealci/errors.hpp"

namespace sealci {

double response_amplitude(double distance, double sigma) {
  return std::exp(-(distance * distance) / (2.0 * sigma * sigma));
}

PheromoneField::PheromoneField(const GridSpec& spec,
                               const PheromoneParams& params)
    : spec_(spec),
      params_(params),
      amounts_(static_cast<std::size_t>(spec.cell_count()), 0.0) {}

void PheromoneField::set_amount(Position p, double v) {
  amounts_[idx(p)] = std::clamp(v, 0.0, params_.amount_cap);
}

void PheromoneField::deposit(Position pos, bool on_labeled) {
  double delta = on_labeled ? params_.deposit_inc : -params_.deposit_dec;
  amounts_[idx(pos)] =
      std::clamp(amounts_[idx(pos)] + delta, 0.0, params_.amount_cap);
}

void PheromoneField::decay_tick() {
  for (double& a : amounts_) {
    a *= params_.decay_factor;
    if (a < params_.floor) a = 0.0;
  }
}

std::vector<SensedCell> PheromoneField::sense(Position pos, int radius,
                                              const ChannelNoise& noise,
                                              Rng& rng) const {
  std::vector<SensedCell> out;
  out.reserve(static_cast<std::size_t>(2 * radius + 1) * (2 * radius + 1) - 1);
  const bool wrap = spec_.boundary == Boundary::Toroidal;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dx == 0 && dy == 0) continue;
      Position p{pos.x + dx, pos.y + dy};
      if (wrap) {
        p.x = ((p.x % spec_.width) + spec_.width) % spec_.width;
        p.y = ((p.y % spec_.height) + spec_.height) % spec_.height;
      } else if (p.x < 0 || p.x >= spec_.width || p.y < 0 ||
                 p.y >= spec_.height) {
        continue;
      }
      double perceived = amounts_[idx(p)];
      if (noise.std > 0.0) {
        perceived = std::max(0.0, perceived + rng.normal(0.0, noise.std));
      }
      out.push_back({p, perceived});
    }
  }
  return out;
}

double PheromoneField::total_mass() const {
  double sum = 0.0;
  for (double a : amounts_) sum += a;
  return sum;
}

void PheromoneField::check_bounds() const {
  for (double a : amounts_) {
    if (!(a >= 0.0) || !(a <= params_.amount_cap)) {
      throw InvariantViolation("pheromone: amount " + std::to_string(a) +
                               " outside [0, " +
                               std::to_string(params_.amount_cap) + "]");
    }
  }
}

std::string field_to_text(const PheromoneField& field) {
  std::string out;
  char buf[32];
  for (int y = 0; y < field.spec().height; ++y) {
    for (int x = 0; x < field.spec().width; ++x) {
      std::snprintf(buf, sizeof(buf), "%.6f", field.amount({x, y}));
      if (x > 0) out += ' ';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace sealci
