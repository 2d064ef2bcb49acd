#pragma once

#include <vector>

#include "aic/types.hpp"

namespace aic::sim {

/// Time envelope of a scripted disturbance within its window.
enum class Envelope { Constant, Triangle, HalfSine };

/// One scripted external wrench: active on [t_start, t_end), given in W,
/// applied at `point_B` on the body, scaled by the envelope.
struct DisturbanceEvent {
  double t_start = 0.0;
  double t_end = 0.0;
  Wrench wrench_W;
  Vec3 point_B = Vec3::Zero();
  Envelope envelope = Envelope::Constant;

  double scale(double t) const {
    if (t < t_start || t >= t_end || t_end <= t_start) return 0.0;
    const double u = (t - t_start) / (t_end - t_start);
    switch (envelope) {
      case Envelope::Constant: return 1.0;
      case Envelope::Triangle: return 1.0 - std::abs(2.0 * u - 1.0);
      case Envelope::HalfSine: return std::sin(M_PI * u);
    }
    return 0.0;
  }
};

struct ActiveDisturbance {
  Vec3 force_W;
  Vec3 torque_W;
  Vec3 point_B;
};

/// Schedule of scripted disturbances. Overlapping windows are rejected unless
/// the overlapping events act on disjoint wrench channels.
class DisturbanceProfile {
 public:
  DisturbanceProfile() = default;
  explicit DisturbanceProfile(std::vector<DisturbanceEvent> events)
      : events_(std::move(events)) {
    validate();
  }

  void add(const DisturbanceEvent& e) {
    events_.push_back(e);
    validate();
  }

  bool empty() const { return events_.empty(); }
  const std::vector<DisturbanceEvent>& events() const { return events_; }

  std::vector<ActiveDisturbance> sample(double t) const {
    std::vector<ActiveDisturbance> out;
    for (const auto& e : events_) {
      const double s = e.scale(t);
      if (s != 0.0) {
        out.push_back({e.wrench_W.force * s, e.wrench_W.torque * s, e.point_B});
      }
    }
    return out;
  }

  void validate() const {
    for (size_t i = 0; i < events_.size(); ++i) {
      const auto& a = events_[i];
      if (!(a.t_end > a.t_start)) {
        throw std::invalid_argument("DisturbanceProfile: empty time window");
      }
      for (size_t j = i + 1; j < events_.size(); ++j) {
        const auto& b = events_[j];
        const bool overlap = a.t_start < b.t_end && b.t_start < a.t_end;
        if (!overlap) continue;
        const Vec6 pa = a.wrench_W.stacked().cwiseAbs();
        const Vec6 pb = b.wrench_W.stacked().cwiseAbs();
        if (pa.cwiseProduct(pb).maxCoeff() > 0.0) {
          throw std::invalid_argument(
              "DisturbanceProfile: overlapping windows on the same wrench "
              "channel");
        }
      }
    }
  }

 private:
  std::vector<DisturbanceEvent> events_;
};

}  // namespace aic::sim
