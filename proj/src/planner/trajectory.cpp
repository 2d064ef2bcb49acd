#include "aic/planner/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aic::planner {

Trajectory::Trajectory(std::vector<TrajectorySetpoint> samples)
    : samples_(std::move(samples)) {
  for (size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i].time)) {
      throw std::invalid_argument("Trajectory: non-finite sample time");
    }
    if (i > 0 && !(samples_[i].time > samples_[i - 1].time)) {
      throw std::invalid_argument(
          "Trajectory: sample times must be strictly increasing");
    }
  }
}

Trajectory Trajectory::hold(const Pose& pose_WB, double duration) {
  if (!(duration > 0.0)) {
    throw std::invalid_argument("Trajectory::hold: duration must be positive");
  }
  TrajectorySetpoint a;
  a.position = pose_WB.position;
  a.orientation = pose_WB.orientation;
  TrajectorySetpoint b = a;
  b.time = duration;
  return Trajectory({a, b});
}

TrajectorySetpoint Trajectory::at(double t) const {
  if (samples_.empty()) {
    throw std::logic_error("Trajectory::at: empty trajectory");
  }
  if (t <= samples_.front().time) {
    TrajectorySetpoint s = samples_.front();
    s.time = t;
    s.velocity_W.setZero();
    s.angular_velocity_W.setZero();
    return s;
  }
  if (t >= samples_.back().time) {
    TrajectorySetpoint s = samples_.back();
    s.time = t;
    s.velocity_W.setZero();
    s.angular_velocity_W.setZero();
    return s;
  }
  const auto it = std::upper_bound(
      samples_.begin(), samples_.end(), t,
      [](double v, const TrajectorySetpoint& s) { return v < s.time; });
  const TrajectorySetpoint& b = *it;
  const TrajectorySetpoint& a = *(it - 1);
  const double u = (t - a.time) / (b.time - a.time);

  TrajectorySetpoint s;
  s.time = t;
  s.position = (1.0 - u) * a.position + u * b.position;
  s.orientation = Rotation::from_quaternion(
      a.orientation.quaternion().slerp(u, b.orientation.quaternion()));
  s.velocity_W = (1.0 - u) * a.velocity_W + u * b.velocity_W;
  s.angular_velocity_W =
      (1.0 - u) * a.angular_velocity_W + u * b.angular_velocity_W;
  s.force_W = (1.0 - u) * a.force_W + u * b.force_W;
  return s;
}

void Trajectory::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("Trajectory::save_csv: cannot open " + path);
  }
  out << "t,px,py,pz,qw,qx,qy,qz,vx,vy,vz,wx,wy,wz,fx,fy,fz\n";
  char buf[64];
  const auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf << sep;
  };
  for (const auto& s : samples_) {
    const Quat& q = s.orientation.quaternion();
    put(s.time, ',');
    put(s.position.x(), ',');
    put(s.position.y(), ',');
    put(s.position.z(), ',');
    put(q.w(), ',');
    put(q.x(), ',');
    put(q.y(), ',');
    put(q.z(), ',');
    put(s.velocity_W.x(), ',');
    put(s.velocity_W.y(), ',');
    put(s.velocity_W.z(), ',');
    put(s.angular_velocity_W.x(), ',');
    put(s.angular_velocity_W.y(), ',');
    put(s.angular_velocity_W.z(), ',');
    put(s.force_W.x(), ',');
    put(s.force_W.y(), ',');
    put(s.force_W.z(), '\n');
  }
  if (!out) {
    throw std::runtime_error("Trajectory::save_csv: write failed on " + path);
  }
}

Trajectory Trajectory::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("Trajectory::load_csv: cannot open " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("Trajectory::load_csv: empty file " + path);
  }
  std::vector<TrajectorySetpoint> samples;
  size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream ss(line);
    double v[17];
    std::string cell;
    for (int i = 0; i < 17; ++i) {
      if (!std::getline(ss, cell, ',')) {
        throw std::runtime_error("Trajectory::load_csv: row " +
                                 std::to_string(row) + " has too few columns");
      }
      try {
        v[i] = std::stod(cell);
      } catch (const std::exception&) {
        throw std::runtime_error("Trajectory::load_csv: bad number in row " +
                                 std::to_string(row));
      }
    }
    TrajectorySetpoint s;
    s.time = v[0];
    s.position = Vec3(v[1], v[2], v[3]);
    s.orientation = Rotation::from_quaternion(Quat(v[4], v[5], v[6], v[7]));
    s.velocity_W = Vec3(v[8], v[9], v[10]);
    s.angular_velocity_W = Vec3(v[11], v[12], v[13]);
    s.force_W = Vec3(v[14], v[15], v[16]);
    samples.push_back(s);
  }
  return Trajectory(std::move(samples));
}

Trajectory Trajectory::then(const Trajectory& other) const {
  if (samples_.empty()) return other;
  if (other.samples_.empty()) return *this;
  std::vector<TrajectorySetpoint> merged = samples_;
  const double offset = duration() - other.start_time();
  for (TrajectorySetpoint s : other.samples_) {
    s.time += offset;
    if (s.time <= merged.back().time + 1e-12) continue;
    merged.push_back(s);
  }
  return Trajectory(std::move(merged));
}

}  // namespace aic::planner
