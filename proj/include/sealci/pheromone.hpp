#pragma once

#include <vector>

#include "sealci/grid.hpp"
#include "sealci/rng.hpp"

namespace sealci {

struct PheromoneParams {
  double decay_factor = 0.98;  // multiplicative decay per tick, in [0, 1)
  double deposit_inc = 1.0;    // added on labeled cells
  double deposit_dec = 1.0;    // removed on unlabeled cells
  double amount_cap = 1.0;     // per-cell ceiling
  double floor = 1e-6;         // amounts below this snap to zero on decay
};

/// Additive sensing noise, zero-mean normal with this standard deviation.
struct ChannelNoise {
  double std = 0.0;
};

struct SensedCell {
  Position pos;
  double perceived = 0.0;
};

/// Gaussian response to a pheromone source at the given distance, in (0, 1].
double response_amplitude(double distance, double sigma);

/// Scalar stigmergy medium. Amounts stay within [0, amount_cap] through
/// every operation.
class PheromoneField {
 public:
  PheromoneField() = default;
  PheromoneField(const GridSpec& spec, const PheromoneParams& params);

  const GridSpec& spec() const { return spec_; }
  const PheromoneParams& params() const { return params_; }
  double amount(Position p) const { return amounts_[idx(p)]; }
  void set_amount(Position p, double v);

  /// Adds deposit_inc on labeled cells, removes deposit_dec otherwise,
  /// clamped to [0, amount_cap].
  void deposit(Position pos, bool on_labeled);

  /// Multiplies every cell by decay_factor; amounts below the floor snap
  /// to exactly zero.
  void decay_tick();

  /// All cells within Chebyshev distance `radius` of `pos`, excluding `pos`
  /// itself, in row-major neighborhood order. Perceived amounts carry one
  /// independent noise draw per cell, clamped at zero; noise.std == 0 reads
  /// the field exactly and consumes no randomness.
  std::vector<SensedCell> sense(Position pos, int radius,
                                const ChannelNoise& noise, Rng& rng) const;

  double total_mass() const;

  /// Throws InvariantViolation if any amount is outside [0, amount_cap].
  void check_bounds() const;

 private:
  std::size_t idx(Position p) const {
    return static_cast<std::size_t>(p.y) * spec_.width + p.x;
  }

  GridSpec spec_;
  PheromoneParams params_;
  std::vector<double> amounts_;
};

/// Field snapshot: fixed-point amounts (6 decimals), row-major, one grid row
/// per line.
std::string field_to_text(const PheromoneField& field);

}  // namespace sealci
