#pragma once

#include <optional>
#include <vector>

#include "aic/sim/disturbance.hpp"
#include "aic/sim/rigid_body.hpp"
#include "aic/sim/surface.hpp"

namespace aic::sim {

/// Raised when the integrator produces non-finite or diverging state.
class SimulationFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Integrator { SemiImplicitEuler, RungeKutta4 };

struct IntegratorConfig {
  Integrator scheme = Integrator::SemiImplicitEuler;
  /// First-order actuation lag time constant [s]; 0 means ideal actuation.
  double actuator_lag = 0.0;
  /// Per-axis absolute saturation of the commanded wrench; infinity = none.
  Vec6 saturation = Vec6::Constant(std::numeric_limits<double>::infinity());
};

struct StepResult {
  SimState state;
  /// External wrench applied over the step, about the body origin in B,
  /// evaluated at the pre-step state: contact plus scripted disturbances.
  Wrench applied_external_B;
  /// Raw contact force at the tool tip in W (pre-step state), the signal the
  /// simulated force sensor sees.
  Vec3 tip_force_W = Vec3::Zero();
  bool in_contact = false;
};

/// Rigid-body plant. The truth dynamics are written about the center of mass
/// (the body origin may be offset by params.com_offset), so the controller's
/// simplified model sees a genuine COM disturbance when the offset is
/// nonzero. Actuation lag state persists across steps; reset() clears it.
class Plant {
 public:
  Plant(const RigidBodyParams& params, const IntegratorConfig& config)
      : params_(params), config_(config) {
    params_.validate();
    if (!(config_.actuator_lag >= 0.0)) {
      throw std::invalid_argument("Plant: negative actuator lag");
    }
  }

  const RigidBodyParams& params() const { return params_; }
  const IntegratorConfig& config() const { return config_; }

  void reset() { actuator_state_.reset(); }

  StepResult step(const SimState& state, const Wrench& commanded_B,
                  const std::vector<ContactSurface>& surfaces,
                  const DisturbanceProfile& disturbances, double dt);

 private:
  RigidBodyParams params_;
  IntegratorConfig config_;
  std::optional<Vec6> actuator_state_;
};

/// Total mechanical energy of a state: kinetic about the COM + gravitational
/// potential of the COM + elastic energy stored in penetrated surfaces at the
/// tool tip. Used by the conservation audits.
double mechanical_energy(const RigidBodyParams& params, const SimState& state,
                         const std::vector<ContactSurface>& surfaces);

}  // namespace aic::sim
