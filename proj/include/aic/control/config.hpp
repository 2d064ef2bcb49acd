#pragma once

#include <optional>

#include "aic/types.hpp"

namespace aic::control {

/// Axis-selective impedance parameters. Stiffness and damping are the
/// normalized (inertia-independent) diagonal gains; the virtual inertia
/// entries are dimensionless multipliers of the system inertia. The tool-axis
/// multiplier ramps from `mass_free` down to `mass_wall` as the perceived
/// surface distance falls from `d_max` to `d_min`.
struct ImpedanceConfig {
  Vec6 stiffness = (Vec6() << 100.0, 100.0, 100.0, 3.5, 3.5, 3.5).finished();
  Vec6 damping = (Vec6() << 35.0, 35.0, 35.0, 1.2, 1.2, 1.2).finished();
  double mass_wall = 0.5;
  double mass_free = 5.0;
  double inertia_multiplier = 5.0;
  double d_min = 0.2;
  double d_max = 0.4;

  void validate() const {
    if ((stiffness.array() < 0.0).any() || (damping.array() < 0.0).any()) {
      throw std::invalid_argument("ImpedanceConfig: negative gain");
    }
    if (!(mass_wall > 0.0) || !(mass_free > 0.0) || !(inertia_multiplier > 0.0)) {
      throw std::invalid_argument("ImpedanceConfig: inertia multipliers must be > 0");
    }
    if (!(d_min >= 0.0) || !(d_max > d_min)) {
      throw std::invalid_argument("ImpedanceConfig: need 0 <= d_min < d_max");
    }
  }
};

/// Direct force control parameters: PI gains on the measured-force error,
/// confidence ramp breakpoints on the projected tool error, and the blend
/// constant of the confidence low-pass.
struct ForceControlConfig {
  double kp = 0.1;
  double ki = 1.0;
  double e_min = 0.15;
  double e_max = 0.25;
  double blend = 0.01;
  /// Per-axis clamp of the force-error integral [N s].
  double integral_limit = 200.0;
  /// The integral only accumulates while the confidence exceeds this gate.
  double integral_gate = 0.5;
  /// Integral resets after this long without a surface distance estimate [s].
  double contact_loss_reset = 0.5;
  /// Apply the 1/m factor to the direct force command. Steady-state tracking
  /// is unaffected either way; disabling it speeds up transients.
  bool scale_by_inverse_mass = true;

  void validate() const {
    if (!(kp >= 0.0) || !(ki >= 0.0)) {
      throw std::invalid_argument("ForceControlConfig: negative PI gain");
    }
    if (!(e_min >= 0.0) || !(e_max > e_min)) {
      throw std::invalid_argument("ForceControlConfig: need 0 <= e_min < e_max");
    }
    if (!(blend > 0.0) || !(blend <= 1.0)) {
      throw std::invalid_argument("ForceControlConfig: blend outside (0, 1]");
    }
    if (!(integral_limit >= 0.0) || !(integral_gate >= 0.0) ||
        !(contact_loss_reset >= 0.0)) {
      throw std::invalid_argument("ForceControlConfig: negative limit");
    }
  }
};

/// Mutable controller state threaded through control steps. Everything else
/// in the control path is a pure function of its inputs.
struct ControllerState {
  double confidence = 0.0;
  Vec3 force_integral = Vec3::Zero();
  double time_without_distance = 0.0;
};

}  // namespace aic::control
