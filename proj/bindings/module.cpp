#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "aic/control/config.hpp"
#include "aic/control/controller.hpp"
#include "aic/control/ops.hpp"
#include "aic/est/com_calibration.hpp"
#include "aic/est/wrench_observer.hpp"
#include "aic/harness/metrics.hpp"
#include "aic/harness/presets.hpp"
#include "aic/harness/scenario.hpp"
#include "aic/perception/patch.hpp"
#include "aic/sim/rigid_body.hpp"
#include "aic/tracking.hpp"
#include "aic/types.hpp"

namespace py = pybind11;
using namespace aic;

namespace {

using Vec12 = Eigen::Matrix<double, 12, 1>;
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

ErrorVector errors_from_stacked(const Vec12& v) {
  ErrorVector e;
  e.position = v.segment<3>(0);
  e.attitude = v.segment<3>(3);
  e.linear_velocity = v.segment<3>(6);
  e.angular_velocity = v.segment<3>(9);
  return e;
}

Vec12 errors_to_stacked(const ErrorVector& e) {
  Vec12 v;
  v << e.position, e.attitude, e.linear_velocity, e.angular_velocity;
  return v;
}

Pose body_pose(const Vec3& p, const Mat3& r) {
  return Pose(p, Rotation::from_matrix(r), Frame::World, Frame::Body);
}

perception::PointCloud tool_cloud(const PointMatrix& points) {
  perception::PointCloud cloud;
  cloud.frame = Frame::Tool;
  cloud.points.reserve(static_cast<size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    cloud.points.emplace_back(points.row(i).transpose());
  }
  return cloud;
}

PointMatrix cloud_matrix(const perception::PointCloud& cloud) {
  PointMatrix m(static_cast<Eigen::Index>(cloud.points.size()), 3);
  for (size_t i = 0; i < cloud.points.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = cloud.points[i].transpose();
  }
  return m;
}

template <typename Getter>
Eigen::VectorXd column(const harness::RunLog& log, Getter get) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(log.rows.size()));
  for (size_t i = 0; i < log.rows.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = get(log.rows[i]);
  }
  return out;
}

template <typename Getter>
PointMatrix columns3(const harness::RunLog& log, Getter get) {
  PointMatrix out(static_cast<Eigen::Index>(log.rows.size()), 3);
  for (size_t i = 0; i < log.rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = get(log.rows[i]).transpose();
  }
  return out;
}

char preset_id_from(const std::string& id) {
  if (id.size() != 1) {
    throw std::invalid_argument("preset id must be a single character");
  }
  return id[0];
}

}  // namespace

PYBIND11_MODULE(_aic, m) {
  m.doc() =
      "Interaction control for a fully actuated aerial vehicle: control-law "
      "operations, estimation, perception fitting, and the closed-loop "
      "scenario harness.";
  m.attr("__version__") = "0.1.0";

  // ---- configuration ------------------------------------------------------
  py::class_<control::ImpedanceConfig>(m, "ImpedanceConfig")
      .def(py::init<>())
      .def_readwrite("stiffness", &control::ImpedanceConfig::stiffness)
      .def_readwrite("damping", &control::ImpedanceConfig::damping)
      .def_readwrite("mass_wall", &control::ImpedanceConfig::mass_wall)
      .def_readwrite("mass_free", &control::ImpedanceConfig::mass_free)
      .def_readwrite("inertia_multiplier",
                     &control::ImpedanceConfig::inertia_multiplier)
      .def_readwrite("d_min", &control::ImpedanceConfig::d_min)
      .def_readwrite("d_max", &control::ImpedanceConfig::d_max)
      .def("validate", &control::ImpedanceConfig::validate);

  py::class_<control::ForceControlConfig>(m, "ForceControlConfig")
      .def(py::init<>())
      .def_readwrite("kp", &control::ForceControlConfig::kp)
      .def_readwrite("ki", &control::ForceControlConfig::ki)
      .def_readwrite("e_min", &control::ForceControlConfig::e_min)
      .def_readwrite("e_max", &control::ForceControlConfig::e_max)
      .def_readwrite("blend", &control::ForceControlConfig::blend)
      .def_readwrite("integral_limit",
                     &control::ForceControlConfig::integral_limit)
      .def_readwrite("integral_gate",
                     &control::ForceControlConfig::integral_gate)
      .def_readwrite("contact_loss_reset",
                     &control::ForceControlConfig::contact_loss_reset)
      .def_readwrite("scale_by_inverse_mass",
                     &control::ForceControlConfig::scale_by_inverse_mass)
      .def("validate", &control::ForceControlConfig::validate);

  py::class_<sim::RigidBodyParams>(m, "RigidBodyParams")
      .def(py::init<>())
      .def_readwrite("mass", &sim::RigidBodyParams::mass)
      .def_readwrite("inertia", &sim::RigidBodyParams::inertia)
      .def_readwrite("com_offset", &sim::RigidBodyParams::com_offset)
      .def_readwrite("tool_offset", &sim::RigidBodyParams::tool_offset)
      .def_property(
          "tool_rotation",
          [](const sim::RigidBodyParams& p) { return p.tool_rotation.matrix(); },
          [](sim::RigidBodyParams& p, const Mat3& r) {
            p.tool_rotation = Rotation::from_matrix(r);
          })
      .def_readwrite("gravity", &sim::RigidBodyParams::gravity)
      .def("validate", &sim::RigidBodyParams::validate);

  py::class_<control::ControllerState>(m, "ControllerState")
      .def(py::init<>())
      .def_readwrite("confidence", &control::ControllerState::confidence)
      .def_readwrite("force_integral",
                     &control::ControllerState::force_integral)
      .def_readwrite("time_without_distance",
                     &control::ControllerState::time_without_distance);

  // ---- vehicle model terms ------------------------------------------------
  m.def(
      "mass_matrix",
      [](const sim::RigidBodyParams& p) { return sim::mass_matrix(p); },
      py::arg("params"), "Generalized inertia blockdiag(m I3, J).");
  m.def(
      "coriolis_matrix",
      [](const sim::RigidBodyParams& p, const Vec6& twist) {
        return sim::coriolis_matrix(p, Twist::from_stacked(twist));
      },
      py::arg("params"), py::arg("twist_B"),
      "Velocity-product matrix for a body twist stacked as [v; w].");
  m.def(
      "gravity_wrench",
      [](const sim::RigidBodyParams& p, const Mat3& r_WB) {
        return sim::gravity_wrench(p, Rotation::from_matrix(r_WB)).stacked();
      },
      py::arg("params"), py::arg("r_WB"),
      "Physical gravity wrench in B, stacked as [force; torque].");
  m.def(
      "tracking_errors",
      [](const Vec3& p, const Mat3& r, const Vec3& v_W, const Vec3& w_W,
         const Vec3& p_ref, const Mat3& r_ref, const Vec3& v_ref_W,
         const Vec3& w_ref_W) {
        return errors_to_stacked(
            tracking_errors(body_pose(p, r), Twist(v_W, w_W),
                            body_pose(p_ref, r_ref), Twist(v_ref_W, w_ref_W)));
      },
      py::arg("position"), py::arg("rotation"), py::arg("velocity_W"),
      py::arg("angular_velocity_W"), py::arg("ref_position"),
      py::arg("ref_rotation"), py::arg("ref_velocity_W"),
      py::arg("ref_angular_velocity_W"),
      "Body-frame tracking errors stacked as [e_p; e_R; e_v; e_w].");

  // ---- control-law operations ---------------------------------------------
  m.def("cosine_ramp", &control::cosine_ramp, py::arg("x"), py::arg("lo"),
        py::arg("hi"),
        "Half-cosine 1 -> 0 transition: 1 for x <= lo, 0 for x > hi.");

  py::class_<control::VirtualInertia>(m, "VirtualInertia")
      .def_readonly("normalized", &control::VirtualInertia::normalized)
      .def_readonly("normalized_inverse",
                    &control::VirtualInertia::normalized_inverse)
      .def_readonly("tool_axis_multiplier",
                    &control::VirtualInertia::tool_axis_multiplier)
      .def_readonly("ramp", &control::VirtualInertia::ramp);

  m.def(
      "virtual_mass",
      [](const std::optional<double>& distance,
         const control::ImpedanceConfig& cfg, const Mat3& r_BT) {
        return control::virtual_mass(distance, cfg, Rotation::from_matrix(r_BT));
      },
      py::arg("distance"), py::arg("config"), py::arg("r_BT"),
      "Distance-scheduled normalized virtual inertia; distance=None selects "
      "the free-space mass.");

  m.def("confidence", &control::confidence, py::arg("distance"),
        py::arg("tool_error"), py::arg("force_ref"), py::arg("previous"),
        py::arg("impedance_config"), py::arg("force_config"),
        "One step of the force-control confidence recursion.");

  m.def("selection_matrix", &control::selection_matrix, py::arg("lam"),
        py::arg("force_ref"),
        "Rank-one selector lam * n n^T of the force-controlled direction.");
  m.def("selection_matrix6", &control::selection_matrix6, py::arg("selection"),
        "Embeds the 3x3 force selector in wrench space.");

  m.def(
      "direct_force_command",
      [](const Vec3& f_meas_B, const Vec3& f_ref_B, const Mat3& selection,
         double lam, const Vec3& integral,
         const control::ForceControlConfig& cfg, double mass, double dt) {
        const control::DirectForceResult r = control::direct_force_command(
            f_meas_B, f_ref_B, selection, lam, integral, cfg, mass, dt);
        return py::make_tuple(r.command.stacked(), r.integral);
      },
      py::arg("f_meas_B"), py::arg("f_ref_B"), py::arg("selection"),
      py::arg("lam"), py::arg("integral"), py::arg("config"), py::arg("mass"),
      py::arg("dt"),
      "Selected PI force law with feedforward; returns (wrench, integral).");

  m.def(
      "impedance_command",
      [](const Vec12& errors, const Vec6& external_B,
         const control::VirtualInertia& inertia, const Mat6& selection6,
         const control::ImpedanceConfig& cfg) {
        return control::impedance_command(errors_from_stacked(errors),
                                          Wrench::from_stacked(external_B),
                                          inertia, selection6, cfg)
            .stacked();
      },
      py::arg("errors"), py::arg("external_B"), py::arg("inertia"),
      py::arg("selection6"), py::arg("config"),
      "Axis-selective impedance wrench from stacked errors [e_p; e_R; e_v; "
      "e_w].");

  m.def(
      "unified_command",
      [](const Vec6& direct, const Vec6& impedance, const Vec6& coriolis_term,
         const Vec6& gravity_term, const Vec3& com_offset) {
        return control::unified_command(Wrench::from_stacked(direct),
                                        Wrench::from_stacked(impedance),
                                        coriolis_term,
                                        Wrench::from_stacked(gravity_term),
                                        com_offset)
            .stacked();
      },
      py::arg("direct"), py::arg("impedance"), py::arg("coriolis_term"),
      py::arg("gravity_term"), py::arg("com_offset"),
      "Sums the command contributions and adds the COM-offset couple.");

  m.def(
      "control_step",
      [](const sim::RigidBodyParams& params,
         const control::ImpedanceConfig& icfg,
         const control::ForceControlConfig& fcfg,
         control::ControllerState& state, const Vec3& position,
         const Mat3& rotation, const Vec6& twist_B, const Vec6& external_B,
         const Vec3& contact_force_B, const std::optional<double>& distance,
         double dt, const Vec3& ref_position, const Mat3& ref_rotation,
         const Vec6& ref_twist_W, const Vec3& ref_force_W) {
        control::ControlInputs in;
        in.pose_WB = body_pose(position, rotation);
        in.twist_B = Twist::from_stacked(twist_B);
        in.external_B = Wrench::from_stacked(external_B);
        in.contact_force_B = contact_force_B;
        in.surface_distance = distance;
        in.dt = dt;
        control::ControlReference ref;
        ref.pose_WB = body_pose(ref_position, ref_rotation);
        ref.twist_W = Twist::from_stacked(ref_twist_W);
        ref.force_W = ref_force_W;
        const control::ControlOutputs out =
            control::control_step(params, icfg, fcfg, state, in, ref);
        py::dict d;
        d["command"] = out.command_B.stacked();
        d["errors"] = errors_to_stacked(out.telemetry.errors);
        d["confidence"] = out.telemetry.confidence;
        d["mass_ramp"] = out.telemetry.mass_ramp;
        d["tool_axis_mass"] = out.telemetry.tool_axis_mass;
        d["force_error_B"] = out.telemetry.force_error_B;
        d["force_integral"] = out.telemetry.force_integral;
        d["direct"] = out.telemetry.direct_B.stacked();
        d["impedance"] = out.telemetry.impedance_B.stacked();
        return d;
      },
      py::arg("params"), py::arg("impedance_config"), py::arg("force_config"),
      py::arg("state"), py::arg("position"), py::arg("rotation"),
      py::arg("twist_B"), py::arg("external_B"), py::arg("contact_force_B"),
      py::arg("distance"), py::arg("dt"), py::arg("ref_position"),
      py::arg("ref_rotation"), py::arg("ref_twist_W"), py::arg("ref_force_W"),
      "One controller pass; mutates `state` and returns the command wrench "
      "plus telemetry.");

  // ---- estimation -----------------------------------------------------------
  py::class_<est::WrenchObserver>(m, "WrenchObserver")
      .def(py::init<const Mat6&, const Vec6&>(), py::arg("gain"),
           py::arg("initial_momentum"))
      .def_static("with_uniform_gain", &est::WrenchObserver::with_uniform_gain,
                  py::arg("gain"), py::arg("initial_momentum"))
      .def(
          "update",
          [](est::WrenchObserver& obs, const Mat6& inertia,
             const Mat6& coriolis, const Vec6& gravity_term,
             const Vec6& twist_B, const Vec6& commanded, double dt) {
            return obs
                .update(inertia, coriolis, gravity_term,
                        Twist::from_stacked(twist_B),
                        Wrench::from_stacked(commanded), dt)
                .stacked();
          },
          py::arg("inertia"), py::arg("coriolis"), py::arg("gravity_term"),
          py::arg("twist_B"), py::arg("commanded"), py::arg("dt"))
      .def_property_readonly("estimate", [](const est::WrenchObserver& obs) {
        return obs.estimate().stacked();
      });

  py::class_<est::ComCalibration>(m, "ComCalibration")
      .def_readonly("offset", &est::ComCalibration::offset)
      .def_readonly("condition", &est::ComCalibration::condition)
      .def_readonly("covariance_shape", &est::ComCalibration::covariance_shape);

  m.def(
      "com_calibrate",
      [](const PointMatrix& forces, const PointMatrix& torques) {
        if (forces.rows() != torques.rows()) {
          throw std::invalid_argument(
              "com_calibrate: forces and torques must have the same number of "
              "rows");
        }
        std::vector<est::ComSample> samples(
            static_cast<size_t>(forces.rows()));
        for (Eigen::Index i = 0; i < forces.rows(); ++i) {
          samples[static_cast<size_t>(i)] = {forces.row(i).transpose(),
                                             torques.row(i).transpose()};
        }
        return est::com_calibrate(samples);
      },
      py::arg("forces"), py::arg("torques"),
      "Least-squares COM offset from hover balance samples (N x 3 each).");

  // ---- perception -----------------------------------------------------------
  py::class_<perception::SurfacePatch>(m, "SurfacePatch")
      .def_readonly("normal", &perception::SurfacePatch::normal)
      .def_readonly("centroid", &perception::SurfacePatch::centroid)
      .def_readonly("distance", &perception::SurfacePatch::distance)
      .def_readonly("contact_point", &perception::SurfacePatch::contact_point)
      .def_readonly("point_count", &perception::SurfacePatch::point_count);

  m.def(
      "select_cylinder",
      [](const PointMatrix& points, double radius) {
        return cloud_matrix(
            perception::select_cylinder(tool_cloud(points), radius));
      },
      py::arg("points"), py::arg("radius") = 0.1,
      "Keeps tool-frame points within `radius` of the tool z axis.");

  m.def(
      "fit_patch",
      [](const PointMatrix& points) {
        return perception::fit_patch(tool_cloud(points));
      },
      py::arg("points"),
      "Plane fit of tool-frame points; None when the fit is degenerate.");

  // ---- harness ---------------------------------------------------------------
  py::class_<harness::RunLog>(m, "RunLog")
      .def_readonly("scenario", &harness::RunLog::scenario)
      .def_readonly("seed", &harness::RunLog::seed)
      .def_readonly("dt_control", &harness::RunLog::dt_control)
      .def_readonly("config_hash", &harness::RunLog::config_hash)
      .def_readonly("fault", &harness::RunLog::fault)
      .def_readonly("fault_message", &harness::RunLog::fault_message)
      .def("__len__",
           [](const harness::RunLog& log) { return log.rows.size(); })
      .def("duration", &harness::RunLog::duration)
      .def("save_csv", &harness::RunLog::save_csv, py::arg("path"))
      .def_static("load_csv", &harness::RunLog::load_csv, py::arg("path"))
      .def("times",
           [](const harness::RunLog& log) {
             return column(log, [](const harness::LogRow& r) { return r.t; });
           })
      .def("positions",
           [](const harness::RunLog& log) {
             return columns3(
                 log, [](const harness::LogRow& r) { return r.position; });
           })
      .def("tool_positions",
           [](const harness::RunLog& log) {
             return columns3(
                 log, [](const harness::LogRow& r) { return r.tool_position; });
           })
      .def("ref_tool_positions",
           [](const harness::RunLog& log) {
             return columns3(log, [](const harness::LogRow& r) {
               return r.ref_tool_position;
             });
           })
      .def("ref_force_W",
           [](const harness::RunLog& log) {
             return columns3(
                 log, [](const harness::LogRow& r) { return r.ref_force_W; });
           })
      .def("force_meas_B",
           [](const harness::RunLog& log) {
             return columns3(
                 log, [](const harness::LogRow& r) { return r.force_meas_B; });
           })
      .def("confidence",
           [](const harness::RunLog& log) {
             return column(
                 log, [](const harness::LogRow& r) { return r.confidence; });
           })
      .def(
          "distance",
          [](const harness::RunLog& log) {
            return column(log, [](const harness::LogRow& r) {
              return r.distance ? *r.distance
                                : std::numeric_limits<double>::quiet_NaN();
            });
          },
          "Perceived surface distance; NaN where perception had no estimate.")
      .def("in_contact", [](const harness::RunLog& log) {
        return column(log, [](const harness::LogRow& r) {
          return r.in_contact ? 1.0 : 0.0;
        });
      });

  py::class_<harness::Summary>(m, "Summary")
      .def_readonly("rmse_body_x", &harness::Summary::rmse_body_x)
      .def_readonly("rmse_body_y", &harness::Summary::rmse_body_y)
      .def_readonly("rmse_body_z", &harness::Summary::rmse_body_z)
      .def_readonly("rmse_tool_x", &harness::Summary::rmse_tool_x)
      .def_readonly("rmse_tool_y", &harness::Summary::rmse_tool_y)
      .def_readonly("rmse_tool_z", &harness::Summary::rmse_tool_z)
      .def_readonly("rmse_force", &harness::Summary::rmse_force)
      .def_readonly("contact_ratio", &harness::Summary::contact_ratio)
      .def_readonly("rows", &harness::Summary::rows)
      .def_readonly("pushing_rows", &harness::Summary::pushing_rows)
      .def_readonly("contact_start", &harness::Summary::contact_start)
      .def_readonly("fault", &harness::Summary::fault);

  py::register_exception<harness::MetricError>(m, "MetricError",
                                               PyExc_RuntimeError);

  m.def(
      "run_scenario",
      [](const std::string& json_text) {
        return harness::run_scenario(harness::config_from_json_text(json_text));
      },
      py::arg("config_json"), py::call_guard<py::gil_scoped_release>(),
      "Runs the closed loop described by a scenario JSON document.");

  m.def(
      "default_config_json",
      [] { return harness::config_to_json_text(harness::ScenarioConfig{}); },
      "Canonical JSON form of the default scenario configuration.");

  m.def(
      "config_hash",
      [](const std::string& json_text) {
        return harness::config_hash(harness::config_from_json_text(json_text));
      },
      py::arg("config_json"),
      "Deterministic hash of a scenario configuration's canonical form.");

  m.def("summarize", &harness::summarize, py::arg("log"),
        "Run-level tracking and force metrics.");
  m.def("max_force_error", &harness::max_force_error, py::arg("log"),
        py::arg("t0"), py::arg("t1"));
  m.def("force_peak_to_peak", &harness::force_peak_to_peak, py::arg("log"),
        py::arg("t0"), py::arg("t1"));
  m.def("contact_fraction", &harness::contact_fraction, py::arg("log"),
        py::arg("t0"), py::arg("t1"));
  m.def("max_confidence", &harness::max_confidence, py::arg("log"),
        py::arg("t0"), py::arg("t1"));

  py::enum_<harness::ForceSignal>(m, "ForceSignal")
      .value("MeasuredTip", harness::ForceSignal::MeasuredTip)
      .value("EstimatedExternal", harness::ForceSignal::EstimatedExternal)
      .value("AppliedExternal", harness::ForceSignal::AppliedExternal);

  py::class_<harness::StiffnessFit>(m, "StiffnessFit")
      .def_readonly("k", &harness::StiffnessFit::k)
      .def_readonly("sigma_k", &harness::StiffnessFit::sigma_k)
      .def_readonly("samples", &harness::StiffnessFit::samples);

  m.def("fit_stiffness", &harness::fit_stiffness, py::arg("log"),
        py::arg("axis"), py::arg("signal") = harness::ForceSignal::MeasuredTip,
        "Least-squares force-vs-position-error slope along one axis.");

  // ---- presets ---------------------------------------------------------------
  py::class_<harness::CheckResult>(m, "CheckResult")
      .def_readonly("label", &harness::CheckResult::label)
      .def_readonly("passed", &harness::CheckResult::pass)
      .def_readonly("detail", &harness::CheckResult::detail);

  py::class_<harness::PresetReport>(m, "PresetReport")
      .def_property_readonly(
          "id",
          [](const harness::PresetReport& r) { return std::string(1, r.id); })
      .def_readonly("title", &harness::PresetReport::title)
      .def_readonly("checks", &harness::PresetReport::checks)
      .def("passed", &harness::PresetReport::passed)
      .def_property_readonly("runs", [](const harness::PresetReport& r) {
        py::list out;
        for (const auto& run : r.runs) {
          out.append(py::make_tuple(run.name, run.log));
        }
        return out;
      });

  m.def("preset_ids", [] {
    std::vector<std::string> out;
    for (char id : harness::preset_ids()) out.emplace_back(1, id);
    return out;
  });
  m.def(
      "preset_title",
      [](const std::string& id) {
        return harness::preset_title(preset_id_from(id));
      },
      py::arg("id"));
  m.def(
      "run_preset",
      [](const std::string& id, unsigned seed) {
        return harness::run_preset(preset_id_from(id), seed);
      },
      py::arg("id"), py::arg("seed") = 1,
      py::call_guard<py::gil_scoped_release>(),
      "Runs a canned closed-loop experiment with its built-in checks.");
}
