#include "aic/harness/metrics.hpp"

#include <cmath>

namespace aic::harness {
namespace {

/// Projected force error of one row: reference-direction component of the
/// measurement minus the reference magnitude. Empty when no force is
/// referenced.
std::optional<double> projected_force_error(const LogRow& row) {
  const double mag = row.force_ref_B.norm();
  if (!(mag > 0.0)) return std::nullopt;
  const Vec3 n = row.force_ref_B / mag;
  return n.dot(row.force_meas_B) - mag;
}

constexpr double kPushThreshold = 0.5;  // [N] a row counts as "pushing"

}  // namespace

StiffnessFit fit_stiffness(const RunLog& log, int axis, ForceSignal signal) {
  if (axis < 0 || axis > 2) {
    throw std::invalid_argument("fit_stiffness: axis must be 0, 1 or 2");
  }
  const size_t n = log.rows.size();
  if (n < 3) throw MetricError("fit_stiffness: too few rows");

  std::vector<double> x(n), y(n);
  for (size_t i = 0; i < n; ++i) {
    const LogRow& r = log.rows[i];
    x[i] = r.errors.position[axis];
    switch (signal) {
      case ForceSignal::MeasuredTip: y[i] = r.force_meas_B[axis]; break;
      case ForceSignal::EstimatedExternal:
        y[i] = r.external_estimate_B.force[axis];
        break;
      case ForceSignal::AppliedExternal:
        y[i] = r.applied_external_B.force[axis];
        break;
    }
  }
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, yspan_lo = y[0], yspan_hi = y[0];
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    yspan_lo = std::min(yspan_lo, y[i]);
    yspan_hi = std::max(yspan_hi, y[i]);
  }
  if (!(sxx > 1e-12)) {
    throw MetricError("fit_stiffness: degenerate sweep, no deflection");
  }
  if (!(yspan_hi - yspan_lo > 1e-9)) {
    throw MetricError("fit_stiffness: degenerate sweep, no force variation");
  }
  StiffnessFit fit;
  fit.samples = static_cast<int>(n);
  fit.k = sxy / sxx;
  double ss_res = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double r = y[i] - my - fit.k * (x[i] - mx);
    ss_res += r * r;
  }
  fit.sigma_k = std::sqrt(ss_res / (static_cast<double>(n) - 2.0) / sxx);
  return fit;
}

Summary summarize(const RunLog& log) {
  if (log.rows.empty()) throw MetricError("summarize: empty log");
  Summary s;
  s.rows = log.rows.size();
  s.fault = log.fault;

  size_t begin = 0;
  for (size_t i = 0; i < log.rows.size(); ++i) {
    if (log.rows[i].in_contact) {
      begin = i;
      s.contact_start = log.rows[i].t;
      break;
    }
  }
  const bool touched = std::isfinite(s.contact_start);
  if (!touched) begin = 0;

  Vec3 body_sq = Vec3::Zero();
  Vec3 tool_sq = Vec3::Zero();
  size_t count = 0;
  for (size_t i = begin; i < log.rows.size(); ++i) {
    const LogRow& r = log.rows[i];
    const Vec3 eb = r.position - r.ref_position;
    const Vec3 et = r.tool_position - r.ref_tool_position;
    body_sq += eb.cwiseProduct(eb);
    tool_sq += et.cwiseProduct(et);
    ++count;
  }
  body_sq /= static_cast<double>(count);
  tool_sq /= static_cast<double>(count);
  s.rmse_body_x = std::sqrt(body_sq.x());
  s.rmse_body_y = std::sqrt(body_sq.y());
  s.rmse_body_z = std::sqrt(body_sq.z());
  s.rmse_tool_x = std::sqrt(tool_sq.x());
  s.rmse_tool_y = std::sqrt(tool_sq.y());
  s.rmse_tool_z = std::sqrt(tool_sq.z());

  double force_sq = 0.0;
  size_t force_rows = 0;
  size_t push_rows = 0;
  size_t push_contact = 0;
  for (const LogRow& r : log.rows) {
    if (const auto err = projected_force_error(r)) {
      force_sq += *err * *err;
      ++force_rows;
    }
    if (r.force_ref_B.norm() >= kPushThreshold) {
      ++push_rows;
      if (r.in_contact) ++push_contact;
    }
  }
  s.pushing_rows = push_rows;
  s.rmse_force = force_rows ? std::sqrt(force_sq / force_rows) : 0.0;
  s.contact_ratio =
      push_rows ? static_cast<double>(push_contact) / push_rows : 1.0;
  return s;
}

double max_force_error(const RunLog& log, double t0, double t1) {
  double worst = 0.0;
  for (const LogRow& r : log.rows) {
    if (r.t < t0 || r.t > t1) continue;
    if (const auto err = projected_force_error(r)) {
      worst = std::max(worst, std::abs(*err));
    }
  }
  return worst;
}

double force_peak_to_peak(const RunLog& log, double t0, double t1) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const LogRow& r : log.rows) {
    if (r.t < t0 || r.t > t1) continue;
    const double mag = r.force_ref_B.norm();
    if (!(mag > 0.0)) continue;
    const double f = (r.force_ref_B / mag).dot(r.force_meas_B);
    lo = std::min(lo, f);
    hi = std::max(hi, f);
  }
  return hi > lo ? hi - lo : 0.0;
}

double contact_fraction(const RunLog& log, double t0, double t1) {
  size_t total = 0, touching = 0;
  for (const LogRow& r : log.rows) {
    if (r.t < t0 || r.t > t1) continue;
    ++total;
    if (r.in_contact) ++touching;
  }
  return total ? static_cast<double>(touching) / total : 0.0;
}

double max_confidence(const RunLog& log, double t0, double t1) {
  double worst = 0.0;
  for (const LogRow& r : log.rows) {
    if (r.t < t0 || r.t > t1) continue;
    worst = std::max(worst, r.confidence);
  }
  return worst;
}

}  // namespace aic::harness
