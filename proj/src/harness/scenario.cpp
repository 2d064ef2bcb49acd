#include "aic/harness/scenario.hpp"

#include <cmath>
#include <fstream>

#include "aic/control/controller.hpp"
#include "aic/est/wrench_observer.hpp"
#include "aic/perception/patch.hpp"
#include "json.hpp"

namespace aic::harness {
namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

[[noreturn]] void config_error(const std::string& msg) {
  throw std::runtime_error("config: " + msg);
}

// The schema is strict: every object walker names its allowed keys and any
// stranger is an error, so typos cannot silently fall back to defaults.
void check_keys(const json& j, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) config_error(ctx + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* a : allowed) {
      if (it.key() == a) {
        known = true;
        break;
      }
    }
    if (!known) config_error("unknown key '" + it.key() + "' in " + ctx);
  }
}

double get_number(const json& j, const std::string& ctx) {
  if (!j.is_number()) config_error(ctx + " must be a number");
  return j.get<double>();
}

Vec3 get_vec3(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 3) config_error(ctx + " must be [x, y, z]");
  return Vec3(get_number(j[0], ctx), get_number(j[1], ctx),
              get_number(j[2], ctx));
}

Vec6 get_vec6(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 6) {
    config_error(ctx + " must be an array of 6 numbers");
  }
  Vec6 v;
  for (int i = 0; i < 6; ++i) v[i] = get_number(j[i], ctx);
  return v;
}

/// Orientation inside an object: "quaternion" [w, x, y, z] or "rpy"
/// [roll, pitch, yaw] in radians (yaw-pitch-roll composition).
Rotation get_rotation(const json& obj, const std::string& ctx) {
  const bool has_q = obj.contains("quaternion");
  const bool has_rpy = obj.contains("rpy");
  if (has_q && has_rpy) {
    config_error(ctx + " has both 'quaternion' and 'rpy'");
  }
  if (has_q) {
    const json& q = obj["quaternion"];
    if (!q.is_array() || q.size() != 4) {
      config_error(ctx + ".quaternion must be [w, x, y, z]");
    }
    return Rotation::from_quaternion(
        Quat(get_number(q[0], ctx), get_number(q[1], ctx),
             get_number(q[2], ctx), get_number(q[3], ctx)));
  }
  if (has_rpy) {
    const Vec3 rpy = get_vec3(obj["rpy"], ctx + ".rpy");
    return Rotation::from_axis_angle(Vec3::UnitZ(), rpy.z()) *
           Rotation::from_axis_angle(Vec3::UnitY(), rpy.y()) *
           Rotation::from_axis_angle(Vec3::UnitX(), rpy.x());
  }
  return Rotation::identity();
}

json put_vec3(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }
json put_vec6(const Vec6& v) {
  json a = json::array();
  for (int i = 0; i < 6; ++i) a.push_back(v[i]);
  return a;
}
json put_quat(const Rotation& r) {
  const Quat& q = r.quaternion();
  return json::array({q.w(), q.x(), q.y(), q.z()});
}

Pose get_pose(const json& j, const std::string& ctx) {
  check_keys(j, ctx, {"position", "quaternion", "rpy"});
  Pose p(Vec3::Zero(), get_rotation(j, ctx), Frame::World, Frame::Body);
  if (j.contains("position")) {
    p.position = get_vec3(j["position"], ctx + ".position");
  }
  return p;
}

json put_pose(const Pose& p) {
  json j;
  j["position"] = put_vec3(p.position);
  j["quaternion"] = put_quat(p.orientation);
  return j;
}

sim::PenaltyParams get_contact(const json& j, const std::string& ctx) {
  check_keys(j, ctx, {"stiffness", "damping", "friction"});
  sim::PenaltyParams p;
  if (j.contains("stiffness")) p.stiffness = get_number(j["stiffness"], ctx);
  if (j.contains("damping")) p.damping = get_number(j["damping"], ctx);
  if (j.contains("friction")) p.friction = get_number(j["friction"], ctx);
  return p;
}

sim::ContactSurface get_surface(const json& j, size_t index) {
  const std::string ctx = "surfaces[" + std::to_string(index) + "]";
  check_keys(j, ctx,
             {"type", "name", "visible", "contact", "point", "normal", "origin",
              "quaternion", "rpy", "extent_x", "extent_y", "terms",
              "doubly_curved", "vertices", "faces"});
  if (!j.contains("type")) config_error(ctx + " needs a 'type'");
  const std::string type = j["type"].get<std::string>();

  sim::ContactSurface s;
  if (j.contains("name")) s.name = j["name"].get<std::string>();
  if (j.contains("visible")) s.visible = j["visible"].get<bool>();
  if (j.contains("contact")) s.contact = get_contact(j["contact"], ctx + ".contact");

  if (type == "plane") {
    sim::Plane plane;
    if (j.contains("point")) plane.point = get_vec3(j["point"], ctx + ".point");
    if (j.contains("normal")) {
      plane.normal = get_vec3(j["normal"], ctx + ".normal");
    }
    s.geometry = plane;
  } else if (type == "heightfield") {
    sim::HeightField hf;
    if (j.contains("origin")) hf.origin_W = get_vec3(j["origin"], ctx + ".origin");
    hf.rotation_WS = get_rotation(j, ctx);
    if (j.contains("extent_x")) hf.extent_x = get_number(j["extent_x"], ctx);
    if (j.contains("extent_y")) hf.extent_y = get_number(j["extent_y"], ctx);
    const bool has_terms = j.contains("terms");
    const bool has_gen = j.contains("doubly_curved");
    if (has_terms == has_gen) {
      config_error(ctx + " needs exactly one of 'terms' or 'doubly_curved'");
    }
    if (has_gen) {
      const json& g = j["doubly_curved"];
      check_keys(g, ctx + ".doubly_curved", {"amplitude", "seed"});
      if (!g.contains("amplitude") || !g.contains("seed")) {
        config_error(ctx + ".doubly_curved needs 'amplitude' and 'seed'");
      }
      sim::HeightField gen = sim::HeightField::doubly_curved(
          hf.extent_x, hf.extent_y, get_number(g["amplitude"], ctx),
          g["seed"].get<unsigned>());
      hf.terms = gen.terms;
    } else {
      for (const json& t : j["terms"]) {
        check_keys(t, ctx + ".terms[]", {"amplitude", "kx", "ky", "phase"});
        sim::HeightFieldTerm term;
        term.amplitude = get_number(t.value("amplitude", json(0.0)), ctx);
        term.kx = get_number(t.value("kx", json(0.0)), ctx);
        term.ky = get_number(t.value("ky", json(0.0)), ctx);
        term.phase = get_number(t.value("phase", json(0.0)), ctx);
        hf.terms.push_back(term);
      }
    }
    s.geometry = hf;
  } else if (type == "mesh") {
    sim::TriMesh mesh;
    if (!j.contains("vertices") || !j.contains("faces")) {
      config_error(ctx + " mesh needs 'vertices' and 'faces'");
    }
    for (const json& v : j["vertices"]) {
      mesh.vertices.push_back(get_vec3(v, ctx + ".vertices[]"));
    }
    for (const json& f : j["faces"]) {
      if (!f.is_array() || f.size() != 3) {
        config_error(ctx + ".faces[] must be [i, j, k]");
      }
      mesh.faces.push_back({f[0].get<int>(), f[1].get<int>(), f[2].get<int>()});
    }
    s.geometry = mesh;
  } else {
    config_error(ctx + " has unknown type '" + type + "'");
  }
  return s;
}

json put_surface(const sim::ContactSurface& s) {
  json j;
  j["name"] = s.name;
  j["visible"] = s.visible;
  j["contact"] = {{"stiffness", s.contact.stiffness},
                  {"damping", s.contact.damping},
                  {"friction", s.contact.friction}};
  std::visit(overloaded{
                 [&](const sim::Plane& p) {
                   j["type"] = "plane";
                   j["point"] = put_vec3(p.point);
                   j["normal"] = put_vec3(p.normal);
                 },
                 [&](const sim::HeightField& h) {
                   j["type"] = "heightfield";
                   j["origin"] = put_vec3(h.origin_W);
                   j["quaternion"] = put_quat(h.rotation_WS);
                   j["extent_x"] = h.extent_x;
                   j["extent_y"] = h.extent_y;
                   json terms = json::array();
                   for (const auto& t : h.terms) {
                     terms.push_back({{"amplitude", t.amplitude},
                                      {"kx", t.kx},
                                      {"ky", t.ky},
                                      {"phase", t.phase}});
                   }
                   j["terms"] = terms;
                 },
                 [&](const sim::TriMesh& m) {
                   j["type"] = "mesh";
                   json verts = json::array();
                   for (const auto& v : m.vertices) verts.push_back(put_vec3(v));
                   j["vertices"] = verts;
                   json faces = json::array();
                   for (const auto& f : m.faces) {
                     faces.push_back(json::array({f[0], f[1], f[2]}));
                   }
                   j["faces"] = faces;
                 },
             },
             s.geometry);
  return j;
}

sim::DisturbanceEvent get_disturbance(const json& j, size_t index) {
  const std::string ctx = "disturbances[" + std::to_string(index) + "]";
  check_keys(j, ctx,
             {"t_start", "t_end", "force", "torque", "point", "envelope"});
  sim::DisturbanceEvent e;
  if (j.contains("t_start")) e.t_start = get_number(j["t_start"], ctx);
  if (j.contains("t_end")) e.t_end = get_number(j["t_end"], ctx);
  if (j.contains("force")) e.wrench_W.force = get_vec3(j["force"], ctx);
  if (j.contains("torque")) e.wrench_W.torque = get_vec3(j["torque"], ctx);
  if (j.contains("point")) e.point_B = get_vec3(j["point"], ctx);
  if (j.contains("envelope")) {
    const std::string env = j["envelope"].get<std::string>();
    if (env == "constant") {
      e.envelope = sim::Envelope::Constant;
    } else if (env == "triangle") {
      e.envelope = sim::Envelope::Triangle;
    } else if (env == "half_sine") {
      e.envelope = sim::Envelope::HalfSine;
    } else {
      config_error(ctx + " has unknown envelope '" + env + "'");
    }
  }
  return e;
}

json put_disturbance(const sim::DisturbanceEvent& e) {
  json j;
  j["t_start"] = e.t_start;
  j["t_end"] = e.t_end;
  j["force"] = put_vec3(e.wrench_W.force);
  j["torque"] = put_vec3(e.wrench_W.torque);
  j["point"] = put_vec3(e.point_B);
  switch (e.envelope) {
    case sim::Envelope::Constant: j["envelope"] = "constant"; break;
    case sim::Envelope::Triangle: j["envelope"] = "triangle"; break;
    case sim::Envelope::HalfSine: j["envelope"] = "half_sine"; break;
  }
  return j;
}

TrajectorySpec get_trajectory(const json& j) {
  const std::string ctx = "trajectory";
  if (!j.contains("type")) config_error(ctx + " needs a 'type'");
  const std::string type = j["type"].get<std::string>();
  if (type == "hold") {
    check_keys(j, ctx, {"type", "position", "quaternion", "rpy", "duration"});
    HoldSpec s;
    if (j.contains("position")) {
      s.pose_WB.position = get_vec3(j["position"], ctx + ".position");
    }
    s.pose_WB.orientation = get_rotation(j, ctx);
    if (j.contains("duration")) s.duration = get_number(j["duration"], ctx);
    return s;
  }
  if (type == "csv") {
    check_keys(j, ctx, {"type", "path"});
    if (!j.contains("path")) config_error(ctx + " csv needs a 'path'");
    return CsvSpec{j["path"].get<std::string>()};
  }
  if (type == "contact_sequence") {
    check_keys(j, ctx,
               {"type", "start", "contacts", "transit_time", "sample_dt"});
    ContactSequenceSpec s;
    if (j.contains("start")) s.start_WB = get_pose(j["start"], ctx + ".start");
    if (!j.contains("contacts")) config_error(ctx + " needs 'contacts'");
    size_t i = 0;
    for (const json& c : j["contacts"]) {
      const std::string cctx = ctx + ".contacts[" + std::to_string(i++) + "]";
      check_keys(c, cctx, {"target", "dwell", "force", "ramp"});
      planner::ContactSpec spec;
      if (!c.contains("target")) config_error(cctx + " needs a 'target'");
      spec.target_W = get_vec3(c["target"], cctx + ".target");
      if (c.contains("dwell")) spec.dwell = get_number(c["dwell"], cctx);
      if (c.contains("force")) spec.force = get_number(c["force"], cctx);
      if (c.contains("ramp")) spec.ramp = get_number(c["ramp"], cctx);
      s.contacts.push_back(spec);
    }
    if (j.contains("transit_time")) {
      s.options.transit_time = get_number(j["transit_time"], ctx);
    }
    if (j.contains("sample_dt")) {
      s.options.sample_dt = get_number(j["sample_dt"], ctx);
    }
    return s;
  }
  if (type == "force_profile") {
    check_keys(j, ctx,
               {"type", "position", "quaternion", "rpy", "push_dir", "levels",
                "level_time", "transition", "sample_dt"});
    ForceProfileSpec s;
    if (j.contains("position")) {
      s.pose_WB.position = get_vec3(j["position"], ctx + ".position");
    }
    s.pose_WB.orientation = get_rotation(j, ctx);
    if (j.contains("push_dir")) {
      s.push_dir_W = get_vec3(j["push_dir"], ctx + ".push_dir");
    }
    if (!j.contains("levels")) config_error(ctx + " needs 'levels'");
    for (const json& l : j["levels"]) s.levels.push_back(get_number(l, ctx));
    if (j.contains("level_time")) s.level_time = get_number(j["level_time"], ctx);
    if (j.contains("transition")) s.transition = get_number(j["transition"], ctx);
    if (j.contains("sample_dt")) s.sample_dt = get_number(j["sample_dt"], ctx);
    return s;
  }
  if (type == "slide") {
    check_keys(j, ctx,
               {"type", "waypoints", "speed", "force", "ramp", "sample_dt"});
    SlideSpec s;
    if (!j.contains("waypoints")) config_error(ctx + " needs 'waypoints'");
    for (const json& w : j["waypoints"]) {
      s.waypoints_W.push_back(get_vec3(w, ctx + ".waypoints[]"));
    }
    if (j.contains("speed")) s.options.speed = get_number(j["speed"], ctx);
    if (j.contains("force")) s.options.force = get_number(j["force"], ctx);
    if (j.contains("ramp")) s.options.ramp = get_number(j["ramp"], ctx);
    if (j.contains("sample_dt")) {
      s.options.sample_dt = get_number(j["sample_dt"], ctx);
    }
    return s;
  }
  config_error(ctx + " has unknown type '" + type + "'");
}

json put_trajectory(const TrajectorySpec& spec) {
  json j;
  std::visit(overloaded{
                 [&](const HoldSpec& s) {
                   j["type"] = "hold";
                   j["position"] = put_vec3(s.pose_WB.position);
                   j["quaternion"] = put_quat(s.pose_WB.orientation);
                   j["duration"] = s.duration;
                 },
                 [&](const CsvSpec& s) {
                   j["type"] = "csv";
                   j["path"] = s.path;
                 },
                 [&](const ContactSequenceSpec& s) {
                   j["type"] = "contact_sequence";
                   if (s.start_WB) j["start"] = put_pose(*s.start_WB);
                   json contacts = json::array();
                   for (const auto& c : s.contacts) {
                     contacts.push_back({{"target", put_vec3(c.target_W)},
                                         {"dwell", c.dwell},
                                         {"force", c.force},
                                         {"ramp", c.ramp}});
                   }
                   j["contacts"] = contacts;
                   j["transit_time"] = s.options.transit_time;
                   j["sample_dt"] = s.options.sample_dt;
                 },
                 [&](const ForceProfileSpec& s) {
                   j["type"] = "force_profile";
                   j["position"] = put_vec3(s.pose_WB.position);
                   j["quaternion"] = put_quat(s.pose_WB.orientation);
                   j["push_dir"] = put_vec3(s.push_dir_W);
                   j["levels"] = s.levels;
                   j["level_time"] = s.level_time;
                   j["transition"] = s.transition;
                   j["sample_dt"] = s.sample_dt;
                 },
                 [&](const SlideSpec& s) {
                   j["type"] = "slide";
                   json wps = json::array();
                   for (const auto& w : s.waypoints_W) wps.push_back(put_vec3(w));
                   j["waypoints"] = wps;
                   j["speed"] = s.options.speed;
                   j["force"] = s.options.force;
                   j["ramp"] = s.options.ramp;
                   j["sample_dt"] = s.options.sample_dt;
                 },
             },
             spec);
  return j;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (!(duration > 0.0)) config_error("duration must be positive");
  if (!(rates.physics_hz > 0.0) || !(rates.control_hz > 0.0) ||
      !(rates.camera_hz > 0.0)) {
    config_error("rates must be positive");
  }
  if (rates.physics_hz < rates.control_hz ||
      rates.control_hz < rates.camera_hz) {
    config_error("need physics_hz >= control_hz >= camera_hz");
  }
  const double ratio = rates.physics_hz / rates.control_hz;
  if (std::abs(ratio - std::round(ratio)) > 1e-9) {
    config_error("physics_hz must be an integer multiple of control_hz");
  }
  vehicle.validate();
  impedance.validate();
  force.validate();
  if (!(observer_gain > 0.0)) config_error("observer gain must be positive");
  if (camera_enabled) camera.validate();
  if (!(integrator.actuator_lag >= 0.0)) config_error("negative actuator lag");
  for (const auto& s : surfaces) s.validate();
  sim::DisturbanceProfile profile(disturbances);  // validates windows
}

ScenarioConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    config_error(std::string("not valid JSON: ") + e.what());
  }
  check_keys(j, "top level",
             {"name", "duration", "seed", "rates", "vehicle", "integrator",
              "impedance", "force", "observer", "sensor", "camera", "initial",
              "surfaces", "disturbances", "trajectory"});
  ScenarioConfig cfg;
  if (j.contains("name")) cfg.name = j["name"].get<std::string>();
  if (j.contains("duration")) cfg.duration = get_number(j["duration"], "duration");
  if (j.contains("seed")) cfg.seed = j["seed"].get<unsigned>();

  if (j.contains("rates")) {
    const json& r = j["rates"];
    check_keys(r, "rates", {"physics_hz", "control_hz", "camera_hz"});
    if (r.contains("physics_hz")) {
      cfg.rates.physics_hz = get_number(r["physics_hz"], "rates");
    }
    if (r.contains("control_hz")) {
      cfg.rates.control_hz = get_number(r["control_hz"], "rates");
    }
    if (r.contains("camera_hz")) {
      cfg.rates.camera_hz = get_number(r["camera_hz"], "rates");
    }
  }

  if (j.contains("vehicle")) {
    const json& v = j["vehicle"];
    check_keys(v, "vehicle",
               {"mass", "inertia", "com_offset", "tool_offset",
                "tool_quaternion", "gravity"});
    if (v.contains("mass")) cfg.vehicle.mass = get_number(v["mass"], "vehicle");
    if (v.contains("inertia")) {
      const json& in = v["inertia"];
      if (in.is_array() && in.size() == 3) {
        cfg.vehicle.inertia =
            Vec3(get_number(in[0], "inertia"), get_number(in[1], "inertia"),
                 get_number(in[2], "inertia"))
                .asDiagonal();
      } else if (in.is_array() && in.size() == 9) {
        Mat3 m;
        for (int k = 0; k < 9; ++k) m(k / 3, k % 3) = get_number(in[k], "inertia");
        cfg.vehicle.inertia = m;
      } else {
        config_error("vehicle.inertia must have 3 (diagonal) or 9 entries");
      }
    }
    if (v.contains("com_offset")) {
      cfg.vehicle.com_offset = get_vec3(v["com_offset"], "vehicle.com_offset");
    }
    if (v.contains("tool_offset")) {
      cfg.vehicle.tool_offset = get_vec3(v["tool_offset"], "vehicle.tool_offset");
    }
    if (v.contains("tool_quaternion")) {
      const json& q = v["tool_quaternion"];
      if (!q.is_array() || q.size() != 4) {
        config_error("vehicle.tool_quaternion must be [w, x, y, z]");
      }
      cfg.vehicle.tool_rotation = Rotation::from_quaternion(
          Quat(get_number(q[0], "tool_quaternion"), get_number(q[1], "tool_quaternion"),
               get_number(q[2], "tool_quaternion"), get_number(q[3], "tool_quaternion")));
    }
    if (v.contains("gravity")) {
      cfg.vehicle.gravity = get_number(v["gravity"], "vehicle");
    }
  }

  if (j.contains("integrator")) {
    const json& i = j["integrator"];
    check_keys(i, "integrator", {"scheme", "actuator_lag", "saturation"});
    if (i.contains("scheme")) {
      const std::string s = i["scheme"].get<std::string>();
      if (s == "semi_implicit") {
        cfg.integrator.scheme = sim::Integrator::SemiImplicitEuler;
      } else if (s == "rk4") {
        cfg.integrator.scheme = sim::Integrator::RungeKutta4;
      } else {
        config_error("integrator.scheme must be 'semi_implicit' or 'rk4'");
      }
    }
    if (i.contains("actuator_lag")) {
      cfg.integrator.actuator_lag = get_number(i["actuator_lag"], "integrator");
    }
    if (i.contains("saturation")) {
      cfg.integrator.saturation = get_vec6(i["saturation"], "integrator.saturation");
    }
  }

  if (j.contains("impedance")) {
    const json& m = j["impedance"];
    check_keys(m, "impedance",
               {"stiffness", "damping", "mass_wall", "mass_free",
                "inertia_multiplier", "d_min", "d_max"});
    if (m.contains("stiffness")) {
      cfg.impedance.stiffness = get_vec6(m["stiffness"], "impedance.stiffness");
    }
    if (m.contains("damping")) {
      cfg.impedance.damping = get_vec6(m["damping"], "impedance.damping");
    }
    if (m.contains("mass_wall")) {
      cfg.impedance.mass_wall = get_number(m["mass_wall"], "impedance");
    }
    if (m.contains("mass_free")) {
      cfg.impedance.mass_free = get_number(m["mass_free"], "impedance");
    }
    if (m.contains("inertia_multiplier")) {
      cfg.impedance.inertia_multiplier =
          get_number(m["inertia_multiplier"], "impedance");
    }
    if (m.contains("d_min")) cfg.impedance.d_min = get_number(m["d_min"], "impedance");
    if (m.contains("d_max")) cfg.impedance.d_max = get_number(m["d_max"], "impedance");
  }

  if (j.contains("force")) {
    const json& f = j["force"];
    check_keys(f, "force",
               {"kp", "ki", "e_min", "e_max", "blend", "integral_limit",
                "integral_gate", "contact_loss_reset", "scale_by_inverse_mass"});
    if (f.contains("kp")) cfg.force.kp = get_number(f["kp"], "force");
    if (f.contains("ki")) cfg.force.ki = get_number(f["ki"], "force");
    if (f.contains("e_min")) cfg.force.e_min = get_number(f["e_min"], "force");
    if (f.contains("e_max")) cfg.force.e_max = get_number(f["e_max"], "force");
    if (f.contains("blend")) cfg.force.blend = get_number(f["blend"], "force");
    if (f.contains("integral_limit")) {
      cfg.force.integral_limit = get_number(f["integral_limit"], "force");
    }
    if (f.contains("integral_gate")) {
      cfg.force.integral_gate = get_number(f["integral_gate"], "force");
    }
    if (f.contains("contact_loss_reset")) {
      cfg.force.contact_loss_reset = get_number(f["contact_loss_reset"], "force");
    }
    if (f.contains("scale_by_inverse_mass")) {
      cfg.force.scale_by_inverse_mass = f["scale_by_inverse_mass"].get<bool>();
    }
  }

  if (j.contains("observer")) {
    const json& o = j["observer"];
    check_keys(o, "observer", {"gain"});
    if (o.contains("gain")) cfg.observer_gain = get_number(o["gain"], "observer");
  }

  if (j.contains("sensor")) {
    const json& s = j["sensor"];
    check_keys(s, "sensor",
               {"noise_sigma", "bias_ramp", "bias_period", "filter_cutoff_hz"});
    if (s.contains("noise_sigma")) {
      cfg.sensor.noise_sigma = get_number(s["noise_sigma"], "sensor");
    }
    if (s.contains("bias_ramp")) {
      cfg.sensor.bias_ramp = get_number(s["bias_ramp"], "sensor");
    }
    if (s.contains("bias_period")) {
      cfg.sensor.bias_period = get_number(s["bias_period"], "sensor");
    }
    if (s.contains("filter_cutoff_hz")) {
      cfg.sensor.filter_cutoff_hz = get_number(s["filter_cutoff_hz"], "sensor");
    }
  }

  if (j.contains("camera")) {
    const json& c = j["camera"];
    check_keys(c, "camera",
               {"enabled", "cols", "rows", "fov_x", "range_sigma", "max_range",
                "offset", "quaternion", "rpy"});
    if (c.contains("enabled")) cfg.camera_enabled = c["enabled"].get<bool>();
    if (c.contains("cols")) cfg.camera.cols = c["cols"].get<int>();
    if (c.contains("rows")) cfg.camera.rows = c["rows"].get<int>();
    if (c.contains("fov_x")) cfg.camera.fov_x = get_number(c["fov_x"], "camera");
    if (c.contains("range_sigma")) {
      cfg.camera.range_sigma = get_number(c["range_sigma"], "camera");
    }
    if (c.contains("max_range")) {
      cfg.camera.max_range = get_number(c["max_range"], "camera");
    }
    if (c.contains("offset")) {
      cfg.camera.offset_T = get_vec3(c["offset"], "camera.offset");
    }
    cfg.camera.rotation_TC = get_rotation(c, "camera");
  }

  if (j.contains("initial")) {
    const json& i = j["initial"];
    check_keys(i, "initial",
               {"position", "quaternion", "rpy", "velocity", "angular_velocity"});
    if (i.contains("position")) {
      cfg.initial.pose_WB.position = get_vec3(i["position"], "initial.position");
    }
    cfg.initial.pose_WB.orientation = get_rotation(i, "initial");
    if (i.contains("velocity")) {
      cfg.initial.twist_B.linear = get_vec3(i["velocity"], "initial.velocity");
    }
    if (i.contains("angular_velocity")) {
      cfg.initial.twist_B.angular =
          get_vec3(i["angular_velocity"], "initial.angular_velocity");
    }
  }

  if (j.contains("surfaces")) {
    size_t i = 0;
    for (const json& s : j["surfaces"]) cfg.surfaces.push_back(get_surface(s, i++));
  }
  if (j.contains("disturbances")) {
    size_t i = 0;
    for (const json& d : j["disturbances"]) {
      cfg.disturbances.push_back(get_disturbance(d, i++));
    }
  }
  if (j.contains("trajectory")) cfg.trajectory = get_trajectory(j["trajectory"]);

  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return config_from_json_text(text);
}

std::string config_to_json_text(const ScenarioConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["duration"] = cfg.duration;
  j["seed"] = cfg.seed;
  j["rates"] = {{"physics_hz", cfg.rates.physics_hz},
                {"control_hz", cfg.rates.control_hz},
                {"camera_hz", cfg.rates.camera_hz}};
  {
    json v;
    v["mass"] = cfg.vehicle.mass;
    json inertia = json::array();
    for (int k = 0; k < 9; ++k) inertia.push_back(cfg.vehicle.inertia(k / 3, k % 3));
    v["inertia"] = inertia;
    v["com_offset"] = put_vec3(cfg.vehicle.com_offset);
    v["tool_offset"] = put_vec3(cfg.vehicle.tool_offset);
    v["tool_quaternion"] = put_quat(cfg.vehicle.tool_rotation);
    v["gravity"] = cfg.vehicle.gravity;
    j["vehicle"] = v;
  }
  {
    json i;
    i["scheme"] = cfg.integrator.scheme == sim::Integrator::SemiImplicitEuler
                      ? "semi_implicit"
                      : "rk4";
    i["actuator_lag"] = cfg.integrator.actuator_lag;
    if (cfg.integrator.saturation.allFinite()) {
      i["saturation"] = put_vec6(cfg.integrator.saturation);
    }
    j["integrator"] = i;
  }
  j["impedance"] = {{"stiffness", put_vec6(cfg.impedance.stiffness)},
                    {"damping", put_vec6(cfg.impedance.damping)},
                    {"mass_wall", cfg.impedance.mass_wall},
                    {"mass_free", cfg.impedance.mass_free},
                    {"inertia_multiplier", cfg.impedance.inertia_multiplier},
                    {"d_min", cfg.impedance.d_min},
                    {"d_max", cfg.impedance.d_max}};
  j["force"] = {{"kp", cfg.force.kp},
                {"ki", cfg.force.ki},
                {"e_min", cfg.force.e_min},
                {"e_max", cfg.force.e_max},
                {"blend", cfg.force.blend},
                {"integral_limit", cfg.force.integral_limit},
                {"integral_gate", cfg.force.integral_gate},
                {"contact_loss_reset", cfg.force.contact_loss_reset},
                {"scale_by_inverse_mass", cfg.force.scale_by_inverse_mass}};
  j["observer"] = {{"gain", cfg.observer_gain}};
  j["sensor"] = {{"noise_sigma", cfg.sensor.noise_sigma},
                 {"bias_ramp", cfg.sensor.bias_ramp},
                 {"bias_period", cfg.sensor.bias_period},
                 {"filter_cutoff_hz", cfg.sensor.filter_cutoff_hz}};
  j["camera"] = {{"enabled", cfg.camera_enabled},
                 {"cols", cfg.camera.cols},
                 {"rows", cfg.camera.rows},
                 {"fov_x", cfg.camera.fov_x},
                 {"range_sigma", cfg.camera.range_sigma},
                 {"max_range", cfg.camera.max_range},
                 {"offset", put_vec3(cfg.camera.offset_T)},
                 {"quaternion", put_quat(cfg.camera.rotation_TC)}};
  {
    json i;
    i["position"] = put_vec3(cfg.initial.pose_WB.position);
    i["quaternion"] = put_quat(cfg.initial.pose_WB.orientation);
    i["velocity"] = put_vec3(cfg.initial.twist_B.linear);
    i["angular_velocity"] = put_vec3(cfg.initial.twist_B.angular);
    j["initial"] = i;
  }
  json surfaces = json::array();
  for (const auto& s : cfg.surfaces) surfaces.push_back(put_surface(s));
  j["surfaces"] = surfaces;
  json disturbances = json::array();
  for (const auto& d : cfg.disturbances) disturbances.push_back(put_disturbance(d));
  j["disturbances"] = disturbances;
  j["trajectory"] = put_trajectory(cfg.trajectory);
  return j.dump(2);
}

void save_config(const ScenarioConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) config_error("cannot open " + path + " for writing");
  out << config_to_json_text(cfg) << "\n";
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
  const std::string text = config_to_json_text(cfg);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

planner::Trajectory build_trajectory(const ScenarioConfig& cfg) {
  return std::visit(
      overloaded{
          [&](const HoldSpec& s) {
            return planner::Trajectory::hold(s.pose_WB, s.duration);
          },
          [&](const CsvSpec& s) { return planner::Trajectory::load_csv(s.path); },
          [&](const ContactSequenceSpec& s) {
            const Pose start = s.start_WB ? *s.start_WB : cfg.initial.pose_WB;
            return planner::plan_contact_sequence(start, s.contacts,
                                                  cfg.surfaces, cfg.vehicle,
                                                  s.options);
          },
          [&](const ForceProfileSpec& s) {
            return planner::plan_force_profile(s.pose_WB, s.push_dir_W,
                                               s.levels, s.level_time,
                                               s.transition, s.sample_dt);
          },
          [&](const SlideSpec& s) {
            return planner::plan_slide(s.waypoints_W, cfg.surfaces, cfg.vehicle,
                                       s.options);
          },
      },
      cfg.trajectory);
}

RunLog run_scenario(const ScenarioConfig& cfg) {
  return run_scenario(cfg, build_trajectory(cfg));
}

RunLog run_scenario(const ScenarioConfig& cfg,
                    const planner::Trajectory& trajectory) {
  cfg.validate();

  const double dt_physics = 1.0 / cfg.rates.physics_hz;
  const double dt_control = 1.0 / cfg.rates.control_hz;
  const long control_every = std::lround(cfg.rates.physics_hz / cfg.rates.control_hz);
  const long camera_every =
      std::max(1l, std::lround(cfg.rates.physics_hz / cfg.rates.camera_hz));
  const long steps = std::lround(cfg.duration * cfg.rates.physics_hz);

  sim::Plant plant(cfg.vehicle, cfg.integrator);
  const sim::DisturbanceProfile disturbances(cfg.disturbances);
  est::ForceSensor sensor(cfg.sensor, cfg.rates.control_hz,
                          cfg.seed * 7919u + 17u);
  std::mt19937_64 camera_rng(cfg.seed * 40503ull + 2654435769ull);
  est::WrenchObserver observer = est::WrenchObserver::with_uniform_gain(
      cfg.observer_gain,
      sim::mass_matrix(cfg.vehicle) * cfg.initial.twist_B.stacked());
  control::ControllerState controller_state;

  RunLog log;
  log.scenario = cfg.name;
  log.seed = cfg.seed;
  log.dt_control = dt_control;
  log.config_hash = config_hash(cfg);
  log.rows.reserve(static_cast<size_t>(steps / control_every) + 1);

  sim::SimState state;
  state.pose_WB = cfg.initial.pose_WB;
  state.twist_B = cfg.initial.twist_B;

  bool any_visible = false;
  for (const auto& s : cfg.surfaces) any_visible |= s.visible;

  Wrench command;
  bool observer_primed = false;
  std::optional<double> distance;
  Wrench last_true_external;

  try {
    for (long k = 0; k < steps; ++k) {
      const double t = k * dt_physics;
      const Pose pose_WT = cfg.vehicle.tool_pose(state.pose_WB);

      if (cfg.camera_enabled && any_visible && k % camera_every == 0) {
        const perception::PointCloud cloud_C =
            perception::render_cloud(cfg.camera, cfg.surfaces, pose_WT, camera_rng);
        const perception::PointCloud cloud_T =
            perception::to_tool_frame(cfg.camera, cloud_C);
        const perception::PointCloud near_axis =
            perception::select_cylinder(cloud_T);
        const auto patch = perception::fit_patch(near_axis);
        distance = patch ? std::optional<double>(patch->distance) : std::nullopt;
      }

      if (k % control_every == 0) {
        const Vec3 tip_velocity_W =
            cfg.vehicle.tool_velocity_W(state.pose_WB, state.twist_B);
        const sim::ContactWrench contact =
            sim::contact_wrench(cfg.surfaces, pose_WT, tip_velocity_W);
        const Rotation r_BW = state.pose_WB.orientation.inverse();
        const Vec3 measured = sensor.measure(r_BW * contact.tip_force_W, t);

        // The observer consumes the command that acted over the previous
        // control period; nothing acted before the first tick.
        if (observer_primed) {
          observer.update(
              sim::mass_matrix(cfg.vehicle),
              sim::coriolis_matrix(cfg.vehicle, state.twist_B),
              (-sim::gravity_wrench(cfg.vehicle, state.pose_WB.orientation))
                  .stacked(),
              state.twist_B, command, dt_control);
        }
        observer_primed = true;

        const planner::TrajectorySetpoint sp = trajectory.at(t);
        control::ControlInputs in;
        in.pose_WB = state.pose_WB;
        in.twist_B = state.twist_B;
        in.external_B = observer.estimate();
        in.contact_force_B = measured;
        in.surface_distance = distance;
        in.dt = dt_control;
        control::ControlReference ref;
        ref.pose_WB = Pose(sp.position, sp.orientation, Frame::World, Frame::Body);
        ref.twist_W = Twist(sp.velocity_W, sp.angular_velocity_W);
        ref.force_W = sp.force_W;
        const control::ControlOutputs out = control::control_step(
            cfg.vehicle, cfg.impedance, cfg.force, controller_state, in, ref);
        command = out.command_B;

        LogRow row;
        row.t = t;
        row.position = state.pose_WB.position;
        row.attitude = state.pose_WB.orientation.quaternion();
        row.velocity_B = state.twist_B.linear;
        row.angular_velocity_B = state.twist_B.angular;
        row.ref_position = sp.position;
        row.ref_attitude = sp.orientation.quaternion();
        row.ref_force_W = sp.force_W;
        row.tool_position = pose_WT.position;
        row.ref_tool_position =
            cfg.vehicle.tool_pose(ref.pose_WB).position;
        row.distance = distance;
        row.confidence = out.telemetry.confidence;
        row.mass_ramp = out.telemetry.mass_ramp;
        row.tool_axis_mass = out.telemetry.tool_axis_mass;
        row.errors = out.telemetry.errors;
        row.force_meas_B = measured;
        row.force_ref_B = -(r_BW * sp.force_W);
        row.force_integral = out.telemetry.force_integral;
        row.direct_B = out.telemetry.direct_B;
        row.impedance_B = out.telemetry.impedance_B;
        row.command_B = command;
        row.external_estimate_B = observer.estimate();
        row.applied_external_B = last_true_external;
        row.tip_force_W = contact.tip_force_W;
        row.in_contact = contact.in_contact;
        log.rows.push_back(row);
      }

      const sim::StepResult result =
          plant.step(state, command, cfg.surfaces, disturbances, dt_physics);
      state = result.state;
      last_true_external = result.applied_external_B;
    }
  } catch (const sim::SimulationFault& fault) {
    log.fault = true;
    log.fault_message = fault.what();
  }
  return log;
}

}  // namespace aic::harness
