#pragma once

#include <limits>
#include <stdexcept>

#include "aic/harness/run_log.hpp"

namespace aic::harness {

/// Raised by metric computations on degenerate input (e.g. a stiffness fit
/// over a sweep with no force variation).
class MetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Which force signal a fit consumes: the tool sensor measurement, the
/// observer estimate, or the simulation truth.
enum class ForceSignal { MeasuredTip, EstimatedExternal, AppliedExternal };

struct StiffnessFit {
  /// Least-squares slope of force against body position error [N/m].
  double k = 0.0;
  /// Standard error of the slope.
  double sigma_k = 0.0;
  int samples = 0;
};

/// Ordinary least squares of force (selected signal, B frame) against the
/// body position error, both along `axis`. Throws MetricError when either
/// signal carries no variation.
StiffnessFit fit_stiffness(const RunLog& log, int axis,
                           ForceSignal signal = ForceSignal::MeasuredTip);

/// Run-level metrics. Position RMSEs are W-frame components over the contact
/// phase (from the first in-contact row; the whole log when contact never
/// happens). The force RMSE projects the measured force onto the reference
/// force direction over the rows that reference a push. The contact ratio is
/// the fraction of rows referencing at least 0.5 N that are in contact.
struct Summary {
  double rmse_body_x = 0.0;
  double rmse_body_y = 0.0;
  double rmse_body_z = 0.0;
  double rmse_tool_x = 0.0;
  double rmse_tool_y = 0.0;
  double rmse_tool_z = 0.0;
  double rmse_force = 0.0;
  double contact_ratio = 1.0;
  std::size_t rows = 0;
  std::size_t pushing_rows = 0;
  /// First in-contact time; NaN when the run never touches.
  double contact_start = std::numeric_limits<double>::quiet_NaN();
  bool fault = false;
};

Summary summarize(const RunLog& log);

/// Largest |projected force error| over rows with t in [t0, t1]; rows without
/// a force reference are skipped. The projection is onto the row's reference
/// force direction.
double max_force_error(const RunLog& log, double t0, double t1);

/// Peak-to-peak of the projected measured force over [t0, t1].
double force_peak_to_peak(const RunLog& log, double t0, double t1);

/// Fraction of rows in [t0, t1] that are in contact.
double contact_fraction(const RunLog& log, double t0, double t1);

/// Largest confidence value over [t0, t1].
double max_confidence(const RunLog& log, double t0, double t1);

}  // namespace aic::harness
