#pragma once

#include <random>

#include "aic/est/butterworth.hpp"
#include "aic/types.hpp"

namespace aic::est {

struct ForceSensorConfig {
  /// Per-axis zero-mean Gaussian noise [N].
  double noise_sigma = 0.05;
  /// Peak of the slow bias ramp [N]; reached after bias_period seconds.
  double bias_ramp = 0.0;
  double bias_period = 60.0;
  /// Low-pass cutoff of the filtered output [Hz].
  double filter_cutoff_hz = 5.0;
};

/// Simulated tool force/torque sensor (force channels only). Reports the
/// reaction force exerted by the environment on the tool, expressed in B,
/// corrupted by Gaussian noise and an optional slowly growing bias, then
/// low-passed by the measurement filter.
class ForceSensor {
 public:
  ForceSensor(const ForceSensorConfig& config, double sample_hz, unsigned seed)
      : config_(config),
        filter_(config.filter_cutoff_hz, sample_hz),
        rng_(seed) {
    if (!(config.noise_sigma >= 0.0) || !(config.bias_ramp >= 0.0) ||
        !(config.bias_period > 0.0)) {
      throw std::invalid_argument("ForceSensor: invalid noise configuration");
    }
    bias_direction_ = Vec3(0.6, -0.48, 0.64);  // arbitrary fixed unit vector
  }

  /// `true_force_B`: reaction force on the tool in B. Returns the filtered
  /// measurement.
  Vec3 measure(const Vec3& true_force_B, double t) {
    Vec3 raw = true_force_B;
    if (config_.noise_sigma > 0.0) {
      for (int i = 0; i < 3; ++i) {
        raw[i] += config_.noise_sigma * gauss_(rng_);
      }
    }
    if (config_.bias_ramp > 0.0) {
      const double ramp = std::min(t / config_.bias_period, 1.0);
      raw += config_.bias_ramp * ramp * bias_direction_;
    }
    return filter_.step(raw);
  }

 private:
  ForceSensorConfig config_;
  ButterworthFilter filter_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
  Vec3 bias_direction_;
};

}  // namespace aic::est
