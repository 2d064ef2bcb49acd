#pragma once

#include "aic/types.hpp"

namespace aic::est {

/// Momentum-based external wrench observer. Needs no acceleration signal:
/// the estimate is gain * (momentum - integral of the commanded/model terms),
/// which in the continuous limit behaves as a first-order low-pass of the true
/// external wrench with per-axis bandwidth equal to the gain.
///
/// The integral starts at the initial momentum so the estimate starts at zero.
/// Integration is trapezoidal in the integrand, preserving the low-pass
/// contract to second order in dt.
class WrenchObserver {
 public:
  /// `gain` must be diagonal with positive entries.
  WrenchObserver(const Mat6& gain, const Vec6& initial_momentum)
      : gain_(gain), integral_(initial_momentum) {
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        if (i == j ? !(gain(i, j) > 0.0) : gain(i, j) != 0.0) {
          throw std::invalid_argument(
              "WrenchObserver: gain must be diagonal positive");
        }
      }
    }
  }

  static WrenchObserver with_uniform_gain(double k, const Vec6& initial_momentum) {
    return WrenchObserver(Mat6::Identity() * k, initial_momentum);
  }

  const Wrench& estimate() const { return estimate_; }

  /// Advances the observer one control period. `inertia`, `coriolis` and
  /// `gravity_term` are the model terms of the momentum balance (gravity_term
  /// is the compensation term, the negative of the physical gravity wrench);
  /// `commanded` is the wrench commanded over the last period.
  const Wrench& update(const Mat6& inertia, const Mat6& coriolis,
                       const Vec6& gravity_term, const Twist& twist_B,
                       const Wrench& commanded, double dt) {
    if (!(dt > 0.0)) {
      throw std::invalid_argument("WrenchObserver: dt must be positive");
    }
    const Vec6 integrand = commanded.stacked() - coriolis * twist_B.stacked() -
                           gravity_term + estimate_.stacked();
    if (primed_) {
      integral_ += 0.5 * dt * (integrand + previous_integrand_);
    } else {
      integral_ += dt * integrand;
      primed_ = true;
    }
    previous_integrand_ = integrand;
    estimate_ = Wrench::from_stacked(gain_ * (inertia * twist_B.stacked() -
                                              integral_));
    return estimate_;
  }

 private:
  Mat6 gain_;
  Vec6 integral_;
  Vec6 previous_integrand_ = Vec6::Zero();
  Wrench estimate_;
  bool primed_ = false;
};

}  // namespace aic::est
