#pragma once

#include <cmath>

#include "aic/types.hpp"

namespace aic::est {

/// Second-order low-pass biquad designed by bilinear transform with frequency
/// prewarping, so the -3 dB point lands exactly on the requested cutoff.
/// Unity DC gain by construction. Direct form II transposed per channel.
class ButterworthFilter {
 public:
  ButterworthFilter(double cutoff_hz, double sample_hz) {
    if (!(cutoff_hz > 0.0) || !(sample_hz > 0.0) ||
        !(cutoff_hz < 0.5 * sample_hz)) {
      throw std::invalid_argument(
          "ButterworthFilter: need 0 < cutoff < sample_rate / 2");
    }
    const double c = 1.0 / std::tan(M_PI * cutoff_hz / sample_hz);
    const double k = 1.0 / (1.0 + std::sqrt(2.0) * c + c * c);
    b0_ = k;
    b1_ = 2.0 * k;
    b2_ = k;
    a1_ = 2.0 * k * (1.0 - c * c);
    a2_ = k * (1.0 - std::sqrt(2.0) * c + c * c);
  }

  double step(double x) { return step_channel(0, x); }

  Vec3 step(const Vec3& x) {
    return Vec3(step_channel(0, x.x()), step_channel(1, x.y()),
                step_channel(2, x.z()));
  }

  void reset() {
    for (auto& s : s1_) s = 0.0;
    for (auto& s : s2_) s = 0.0;
  }

  /// Seeds every channel's state to the steady state of a constant input `x`,
  /// so the output starts at `x` with no transient.
  void prime(const Vec3& x) {
    for (int i = 0; i < 3; ++i) {
      s1_[i] = (1.0 - b0_) * x[i];
      s2_[i] = (b2_ - a2_) * x[i];
    }
  }

 private:
  double step_channel(int i, double x) {
    const double y = b0_ * x + s1_[i];
    s1_[i] = b1_ * x - a1_ * y + s2_[i];
    s2_[i] = b2_ * x - a2_ * y;
    return y;
  }

  double b0_, b1_, b2_, a1_, a2_;
  double s1_[3] = {0.0, 0.0, 0.0};
  double s2_[3] = {0.0, 0.0, 0.0};
};

}  // namespace aic::est
