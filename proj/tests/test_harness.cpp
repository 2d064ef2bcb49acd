#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "aic/harness/batch.hpp"
#include "aic/harness/metrics.hpp"
#include "aic/harness/run_log.hpp"
#include "aic/harness/scenario.hpp"

using namespace aic;
using namespace aic::harness;

namespace {

Pose body_at(const Vec3& p) {
  return Pose(p, Rotation::identity(), Frame::World, Frame::Body);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_file(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

/// Hover scenario with everything quiet; cheap enough for unit tests.
ScenarioConfig hover_config(double duration) {
  ScenarioConfig cfg;
  cfg.name = "hover";
  cfg.duration = duration;
  cfg.camera_enabled = false;
  cfg.sensor.noise_sigma = 0.0;
  cfg.initial.pose_WB = body_at(Vec3(0, 0, 1));
  cfg.trajectory = HoldSpec{body_at(Vec3(0, 0, 1)), duration};
  return cfg;
}

/// Wall at x = `x` facing -x (free space on the -x side).
sim::ContactSurface wall_x(double x, double stiffness) {
  sim::ContactSurface s;
  s.name = "wall";
  s.geometry = sim::Plane{Vec3(x, 0, 0), -Vec3::UnitX()};
  s.contact.stiffness = stiffness;
  return s;
}

/// Short push against a soft wall with sensor noise in the loop, so runs
/// depend on the seed.
ScenarioConfig push_config() {
  ScenarioConfig cfg;
  cfg.name = "push";
  cfg.duration = 1.5;
  cfg.seed = 9;
  cfg.rates.camera_hz = 10.0;
  cfg.camera.cols = 32;
  cfg.camera.rows = 24;
  cfg.sensor.noise_sigma = 0.05;
  cfg.surfaces.push_back(wall_x(1.0, 300.0));
  cfg.initial.pose_WB = body_at(Vec3(0.3, 0, 1));
  ForceProfileSpec push;
  push.pose_WB = body_at(Vec3(0.56, 0, 1));  // tip just past the wall
  push.levels = {4.0};
  push.level_time = 1.5;
  cfg.trajectory = push;
  return cfg;
}

}  // namespace

TEST_CASE("scenario config json round trip is a fixed point") {
  ScenarioConfig cfg;
  cfg.name = "roundtrip";
  cfg.duration = 12.5;
  cfg.seed = 42;
  cfg.rates.camera_hz = 10.0;
  cfg.vehicle.com_offset = Vec3(0.01, -0.002, 0.003);
  cfg.impedance.mass_wall = 0.25;
  cfg.force.kp = 0.2;
  cfg.observer_gain = 2.5;
  cfg.sensor.noise_sigma = 0.01;
  cfg.sensor.bias_ramp = 0.4;
  cfg.camera.cols = 64;
  cfg.camera.rows = 48;
  cfg.initial.pose_WB =
      Pose(Vec3(0.3, 0, 1), Rotation::from_axis_angle(Vec3::UnitZ(), 0.4),
           Frame::World, Frame::Body);
  cfg.surfaces.push_back(wall_x(2.0, 900.0));
  sim::ContactSurface curved;
  curved.name = "sheet";
  curved.geometry = sim::HeightField::doubly_curved(1.0, 1.8, 0.06, 7);
  cfg.surfaces.push_back(curved);
  sim::DisturbanceEvent ev;
  ev.t_start = 1.0;
  ev.t_end = 3.0;
  ev.wrench_W.force = Vec3(0, 2, 0);
  ev.envelope = sim::Envelope::Triangle;
  cfg.disturbances.push_back(ev);
  ForceProfileSpec profile;
  profile.pose_WB = body_at(Vec3(1, 0, 1));
  profile.levels = {5.0, 10.0, 20.0};
  cfg.trajectory = profile;

  const std::string text = config_to_json_text(cfg);
  const ScenarioConfig back = config_from_json_text(text);
  CHECK(config_to_json_text(back) == text);
  CHECK(config_hash(back) == config_hash(cfg));

  ScenarioConfig changed = back;
  changed.duration = 13.0;
  CHECK(config_hash(changed) != config_hash(cfg));

  // Strict schema: unknown keys are rejected, not ignored.
  std::string poisoned = text;
  poisoned.insert(poisoned.find('{') + 1, "\"bogus\": 1,");
  CHECK_THROWS_AS(config_from_json_text(poisoned), std::runtime_error);
  CHECK_THROWS_AS(config_from_json_text("not json"), std::runtime_error);
}

TEST_CASE("scenario config validation rejects bad rates") {
  ScenarioConfig cfg = hover_config(1.0);
  cfg.rates.control_hz = 300.0;  // 1000 / 300 is not an integer
  CHECK_THROWS_AS(cfg.validate(), std::runtime_error);
  cfg.rates.control_hz = 200.0;
  cfg.rates.camera_hz = 500.0;  // faster than control
  CHECK_THROWS_AS(cfg.validate(), std::runtime_error);
  cfg.rates.camera_hz = 30.0;
  cfg.duration = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::runtime_error);
}

TEST_CASE("hover on the reference stays within a millimeter") {
  const RunLog log = run_scenario(hover_config(5.0));
  CHECK_FALSE(log.fault);
  CHECK(log.rows.size() > 900);
  const Summary s = summarize(log);
  CHECK(s.rmse_body_x < 1e-3);
  CHECK(s.rmse_body_y < 1e-3);
  CHECK(s.rmse_body_z < 1e-3);
  CHECK(s.pushing_rows == 0);
  CHECK(std::isnan(s.contact_start));
}

TEST_CASE("runs are byte-identical for a fixed seed") {
  const ScenarioConfig cfg = push_config();
  const RunLog a = run_scenario(cfg);
  const RunLog b = run_scenario(cfg);
  REQUIRE(a.rows.size() == b.rows.size());

  const std::string pa = temp_file("det_a.csv");
  const std::string pb = temp_file("det_b.csv");
  a.save_csv(pa);
  b.save_csv(pb);
  CHECK(slurp(pa) == slurp(pb));
  std::remove(pa.c_str());
  std::remove(pb.c_str());

  // A different seed moves the noisy channels.
  ScenarioConfig other = cfg;
  other.seed = 10;
  const RunLog c = run_scenario(other);
  bool differs = false;
  for (size_t i = 0; i < std::min(a.rows.size(), c.rows.size()); ++i) {
    if ((a.rows[i].force_meas_B - c.rows[i].force_meas_B).norm() > 0.0) {
      differs = true;
      break;
    }
  }
  CHECK(differs);
}

TEST_CASE("a diverging run is recorded as a fault, not an exception") {
  ScenarioConfig cfg = hover_config(2.0);
  // The tool starts 100 m deep inside an extremely stiff wall: the first
  // contact impulse exceeds the divergence guard immediately.
  cfg.surfaces.push_back(wall_x(-100.0, 1e9));
  const RunLog log = run_scenario(cfg);
  CHECK(log.fault);
  CHECK_FALSE(log.fault_message.empty());
}

TEST_CASE("stiffness fit recovers an exact linear law") {
  RunLog log;
  for (int i = 0; i < 100; ++i) {
    LogRow r;
    r.t = 0.005 * i;
    r.errors.position = Vec3(-0.05 + 0.001 * i, 0, 0);
    r.force_meas_B = Vec3(50.0 * r.errors.position.x(), 0, 0);
    log.rows.push_back(r);
  }
  const StiffnessFit fit = fit_stiffness(log, 0, ForceSignal::MeasuredTip);
  CHECK(std::abs(fit.k - 50.0) < 1e-9);
  CHECK(fit.sigma_k < 1e-9);
  CHECK(fit.samples == 100);

  // Degenerate sweeps are an error, not a zero.
  RunLog flat;
  for (int i = 0; i < 10; ++i) {
    LogRow r;
    r.force_meas_B = Vec3(1, 0, 0);
    flat.rows.push_back(r);
  }
  CHECK_THROWS_AS(fit_stiffness(flat, 0), MetricError);
  CHECK_THROWS_AS(fit_stiffness(log, 3), std::invalid_argument);
}

TEST_CASE("stiffness fit is unbiased under measurement noise") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> noise(0.0, 0.3);
  RunLog log;
  for (int i = 0; i < 300; ++i) {
    LogRow r;
    r.errors.position = Vec3(0, 0, -0.04 + 0.00027 * i);
    r.external_estimate_B.force =
        Vec3(0, 0, 80.0 * r.errors.position.z() + noise(rng));
    log.rows.push_back(r);
  }
  const StiffnessFit fit = fit_stiffness(log, 2, ForceSignal::EstimatedExternal);
  CHECK(std::abs(fit.k - 80.0) < 3.0 * fit.sigma_k);
  CHECK(fit.sigma_k < 10.0);
}

TEST_CASE("summary measures offsets from the contact phase on") {
  RunLog log;
  for (int i = 0; i < 100; ++i) {
    LogRow r;
    r.t = 0.01 * i;
    r.position = Vec3(0, 0, 1);
    r.ref_position = Vec3(0, 0, 1);
    // Tool runs 1 cm right of the reference; before contact it is worse, so
    // the contact-phase window matters.
    const bool contact = i >= 50;
    r.in_contact = contact;
    r.tool_position = Vec3(0.45, contact ? 0.01 : 0.3, 1);
    r.ref_tool_position = Vec3(0.45, 0, 1);
    r.force_ref_B = contact ? Vec3(0, 0, -10) : Vec3::Zero();
    r.force_meas_B = contact ? Vec3(0, 0, -9.5) : Vec3::Zero();
    log.rows.push_back(r);
  }
  const Summary s = summarize(log);
  CHECK(std::abs(s.rmse_tool_y - 0.01) < 1e-12);
  CHECK(s.rmse_tool_x == 0.0);
  CHECK(s.rmse_body_x == 0.0);
  CHECK(std::abs(s.contact_start - 0.5) < 1e-12);
  CHECK(s.pushing_rows == 50);
  CHECK(s.contact_ratio == 1.0);
  // Projected error is 0.5 N on every pushing row.
  CHECK(std::abs(s.rmse_force - 0.5) < 1e-12);

  CHECK_THROWS_AS(summarize(RunLog{}), MetricError);
}

TEST_CASE("windowed force and contact metrics") {
  RunLog log;
  for (int i = 0; i < 10; ++i) {
    LogRow r;
    r.t = static_cast<double>(i);
    if (i >= 2 && i <= 7) {
      r.force_ref_B = Vec3(0, 0, -10);
      r.force_meas_B = Vec3(0, 0, i % 2 == 0 ? -9.0 : -11.0);
    }
    r.in_contact = i >= 5;
    r.confidence = 0.1 * i;
    log.rows.push_back(r);
  }
  CHECK(std::abs(max_force_error(log, 0.0, 10.0) - 1.0) < 1e-12);
  CHECK(max_force_error(log, 8.0, 10.0) == 0.0);
  CHECK(std::abs(force_peak_to_peak(log, 0.0, 10.0) - 2.0) < 1e-12);
  CHECK(force_peak_to_peak(log, 8.0, 9.0) == 0.0);
  CHECK(std::abs(contact_fraction(log, 0.0, 9.0) - 0.5) < 1e-12);
  CHECK(contact_fraction(log, 0.0, 4.0) == 0.0);
  CHECK(std::abs(max_confidence(log, 0.0, 4.0) - 0.4) < 1e-12);
}

TEST_CASE("run log csv round trips every column exactly") {
  RunLog log;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const auto rv = [&] { return Vec3(u(rng), u(rng), u(rng)); };
  for (int i = 0; i < 3; ++i) {
    LogRow r;
    r.t = 0.005 * i + u(rng) * 1e-7;
    r.position = rv();
    r.attitude = Quat(u(rng), u(rng), u(rng), u(rng)).normalized();
    r.velocity_B = rv();
    r.angular_velocity_B = rv();
    r.ref_position = rv();
    r.ref_attitude = Quat(u(rng), u(rng), u(rng), u(rng)).normalized();
    r.ref_force_W = rv();
    r.tool_position = rv();
    r.ref_tool_position = rv();
    if (i != 1) r.distance = std::abs(u(rng));
    r.confidence = 0.3 * i;
    r.mass_ramp = 0.2;
    r.tool_axis_mass = 2.75;
    r.errors.position = rv();
    r.errors.attitude = rv();
    r.errors.linear_velocity = rv();
    r.errors.angular_velocity = rv();
    r.force_meas_B = rv();
    r.force_ref_B = rv();
    r.force_integral = rv();
    r.direct_B = Wrench(rv(), rv());
    r.impedance_B = Wrench(rv(), rv());
    r.command_B = Wrench(rv(), rv());
    r.external_estimate_B = Wrench(rv(), rv());
    r.applied_external_B = Wrench(rv(), rv());
    r.tip_force_W = rv();
    r.in_contact = i == 2;
    log.rows.push_back(r);
  }

  const std::string path = temp_file("runlog_roundtrip.csv");
  log.save_csv(path);
  const RunLog back = RunLog::load_csv(path);
  std::remove(path.c_str());
  REQUIRE(back.rows.size() == log.rows.size());
  for (size_t i = 0; i < log.rows.size(); ++i) {
    const LogRow& a = log.rows[i];
    const LogRow& b = back.rows[i];
    CHECK(a.t == b.t);
    CHECK((a.position - b.position).norm() == 0.0);
    CHECK((a.attitude.coeffs() - b.attitude.coeffs()).norm() == 0.0);
    CHECK((a.velocity_B - b.velocity_B).norm() == 0.0);
    CHECK((a.angular_velocity_B - b.angular_velocity_B).norm() == 0.0);
    CHECK((a.ref_position - b.ref_position).norm() == 0.0);
    CHECK((a.ref_force_W - b.ref_force_W).norm() == 0.0);
    CHECK((a.tool_position - b.tool_position).norm() == 0.0);
    CHECK((a.ref_tool_position - b.ref_tool_position).norm() == 0.0);
    CHECK(a.distance.has_value() == b.distance.has_value());
    if (a.distance) CHECK(*a.distance == *b.distance);
    CHECK(a.confidence == b.confidence);
    CHECK(a.mass_ramp == b.mass_ramp);
    CHECK(a.tool_axis_mass == b.tool_axis_mass);
    CHECK((a.errors.position - b.errors.position).norm() == 0.0);
    CHECK((a.errors.angular_velocity - b.errors.angular_velocity).norm() ==
          0.0);
    CHECK((a.force_meas_B - b.force_meas_B).norm() == 0.0);
    CHECK((a.force_ref_B - b.force_ref_B).norm() == 0.0);
    CHECK((a.force_integral - b.force_integral).norm() == 0.0);
    CHECK((a.direct_B.force - b.direct_B.force).norm() == 0.0);
    CHECK((a.impedance_B.torque - b.impedance_B.torque).norm() == 0.0);
    CHECK((a.command_B.force - b.command_B.force).norm() == 0.0);
    CHECK((a.external_estimate_B.force - b.external_estimate_B.force).norm() ==
          0.0);
    CHECK((a.applied_external_B.torque - b.applied_external_B.torque).norm() ==
          0.0);
    CHECK((a.tip_force_W - b.tip_force_W).norm() == 0.0);
    CHECK(a.in_contact == b.in_contact);
  }

  CHECK_THROWS_AS(RunLog::load_csv("/nonexistent/log.csv"), std::runtime_error);
}

TEST_CASE("lateral tool error strips the tool-axis component") {
  sim::RigidBodyParams vehicle;  // tool axis = +x_W at identity attitude
  RunLog log;
  for (int i = 0; i < 10; ++i) {
    LogRow near;
    near.in_contact = true;
    near.tool_position = Vec3(0.45 + 0.3, 0.04, 1.03);
    near.ref_tool_position = Vec3(0.45, 0.0, 1.0);
    log.rows.push_back(near);

    LogRow far;  // excluded: no contact, no distance estimate
    far.tool_position = Vec3(5, 5, 5);
    log.rows.push_back(far);
  }
  const Quantiles q = lateral_tool_error(log, vehicle);
  CHECK(q.samples == 10);
  CHECK(std::abs(q.mean - 0.05) < 1e-12);
  CHECK(std::abs(q.p95 - 0.05) < 1e-12);
}

TEST_CASE("batches are deterministic and job-count invariant") {
  const ScenarioConfig cfg = push_config();

  const BatchResult serial = run_batch(cfg, 5, 4, 1);
  const BatchResult threaded = run_batch(cfg, 5, 4, 2);
  REQUIRE(serial.trials.size() == 4);
  REQUIRE(threaded.trials.size() == 4);
  CHECK(serial.aggregate.trials == 4);
  CHECK(serial.aggregate.clean == 4);
  CHECK(serial.aggregate.faults == 0);

  for (size_t i = 0; i < 4; ++i) {
    const TrialResult& a = serial.trials[i];
    const TrialResult& b = threaded.trials[i];
    CHECK(a.seed == 5 + i);
    CHECK(b.seed == a.seed);
    CHECK_FALSE(a.fault);
    CHECK(a.summary.rmse_body_x == b.summary.rmse_body_x);
    CHECK(a.summary.rmse_force == b.summary.rmse_force);
    CHECK(a.lateral_tool_error.mean == b.lateral_tool_error.mean);
  }
  // Different seeds produce different runs; the spread shows in the stats.
  CHECK(serial.trials[0].summary.rmse_force !=
        serial.trials[1].summary.rmse_force);
  CHECK(serial.aggregate.stats.count("rmse_force") == 1);

  CHECK_THROWS_AS(run_batch(cfg, 0, 0, 1), std::invalid_argument);
}

TEST_CASE("batch artifacts serialize") {
  ScenarioConfig cfg = hover_config(1.0);
  const BatchResult result = run_batch(cfg, 1, 2, 2);
  const std::string js = batch_to_json_text(result);
  CHECK(js.find("\"trials\"") != std::string::npos);
  const std::string path = temp_file("batch_trials.csv");
  save_trials_csv(result, path);
  const std::string body = slurp(path);
  CHECK(body.find("seed") != std::string::npos);
  CHECK(std::count(body.begin(), body.end(), '\n') == 3);  // header + 2 rows
  std::remove(path.c_str());
}
