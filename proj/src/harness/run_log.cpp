#include "aic/harness/run_log.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"

namespace aic::harness {
namespace {

using Get = std::function<double(const LogRow&)>;
using Set = std::function<void(LogRow&, double)>;

struct Column {
  std::string name;
  Get get;
  Set set;
};

const char* kAxis[3] = {"x", "y", "z"};

void add_vec3(std::vector<Column>& cols, const std::string& base,
              const std::function<Vec3&(LogRow&)>& ref) {
  for (int i = 0; i < 3; ++i) {
    cols.push_back({base + "_" + kAxis[i],
                    [ref, i](const LogRow& r) {
                      return ref(const_cast<LogRow&>(r))[i];
                    },
                    [ref, i](LogRow& r, double v) { ref(r)[i] = v; }});
  }
}

void add_quat(std::vector<Column>& cols, const std::string& base,
              const std::function<Quat&(LogRow&)>& ref) {
  const char* comp[4] = {"w", "x", "y", "z"};
  for (int i = 0; i < 4; ++i) {
    cols.push_back({base + "_q" + comp[i],
                    [ref, i](const LogRow& r) {
                      Quat& q = ref(const_cast<LogRow&>(r));
                      return i == 0 ? q.w() : q.coeffs()[i - 1];
                    },
                    [ref, i](LogRow& r, double v) {
                      Quat& q = ref(r);
                      if (i == 0) {
                        q.w() = v;
                      } else {
                        q.coeffs()[i - 1] = v;
                      }
                    }});
  }
}

void add_wrench(std::vector<Column>& cols, const std::string& base,
                const std::function<Wrench&(LogRow&)>& ref) {
  add_vec3(cols, base + "_f",
           [ref](LogRow& r) -> Vec3& { return ref(r).force; });
  add_vec3(cols, base + "_t",
           [ref](LogRow& r) -> Vec3& { return ref(r).torque; });
}

const std::vector<Column>& columns() {
  static const std::vector<Column> cols = [] {
    std::vector<Column> c;
    c.push_back({"t", [](const LogRow& r) { return r.t; },
                 [](LogRow& r, double v) { r.t = v; }});
    add_vec3(c, "p", [](LogRow& r) -> Vec3& { return r.position; });
    add_quat(c, "att", [](LogRow& r) -> Quat& { return r.attitude; });
    add_vec3(c, "v", [](LogRow& r) -> Vec3& { return r.velocity_B; });
    add_vec3(c, "w", [](LogRow& r) -> Vec3& { return r.angular_velocity_B; });
    add_vec3(c, "ref_p", [](LogRow& r) -> Vec3& { return r.ref_position; });
    add_quat(c, "ref", [](LogRow& r) -> Quat& { return r.ref_attitude; });
    add_vec3(c, "ref_force_W", [](LogRow& r) -> Vec3& { return r.ref_force_W; });
    add_vec3(c, "tool_p", [](LogRow& r) -> Vec3& { return r.tool_position; });
    add_vec3(c, "ref_tool_p",
             [](LogRow& r) -> Vec3& { return r.ref_tool_position; });
    c.push_back({"distance",
                 [](const LogRow& r) {
                   return r.distance ? *r.distance
                                     : std::numeric_limits<double>::quiet_NaN();
                 },
                 [](LogRow& r, double v) {
                   if (std::isnan(v)) {
                     r.distance.reset();
                   } else {
                     r.distance = v;
                   }
                 }});
    c.push_back({"confidence", [](const LogRow& r) { return r.confidence; },
                 [](LogRow& r, double v) { r.confidence = v; }});
    c.push_back({"mass_ramp", [](const LogRow& r) { return r.mass_ramp; },
                 [](LogRow& r, double v) { r.mass_ramp = v; }});
    c.push_back({"tool_axis_mass",
                 [](const LogRow& r) { return r.tool_axis_mass; },
                 [](LogRow& r, double v) { r.tool_axis_mass = v; }});
    add_vec3(c, "ep", [](LogRow& r) -> Vec3& { return r.errors.position; });
    add_vec3(c, "er", [](LogRow& r) -> Vec3& { return r.errors.attitude; });
    add_vec3(c, "ev", [](LogRow& r) -> Vec3& { return r.errors.linear_velocity; });
    add_vec3(c, "ew",
             [](LogRow& r) -> Vec3& { return r.errors.angular_velocity; });
    add_vec3(c, "f_meas", [](LogRow& r) -> Vec3& { return r.force_meas_B; });
    add_vec3(c, "f_ref", [](LogRow& r) -> Vec3& { return r.force_ref_B; });
    add_vec3(c, "f_int", [](LogRow& r) -> Vec3& { return r.force_integral; });
    add_wrench(c, "dir", [](LogRow& r) -> Wrench& { return r.direct_B; });
    add_wrench(c, "imp", [](LogRow& r) -> Wrench& { return r.impedance_B; });
    add_wrench(c, "cmd", [](LogRow& r) -> Wrench& { return r.command_B; });
    add_wrench(c, "ext_est",
               [](LogRow& r) -> Wrench& { return r.external_estimate_B; });
    add_wrench(c, "ext_true",
               [](LogRow& r) -> Wrench& { return r.applied_external_B; });
    add_vec3(c, "tip_force_W", [](LogRow& r) -> Vec3& { return r.tip_force_W; });
    c.push_back({"contact",
                 [](const LogRow& r) { return r.in_contact ? 1.0 : 0.0; },
                 [](LogRow& r, double v) { r.in_contact = v != 0.0; }});
    return c;
  }();
  return cols;
}

}  // namespace

void RunLog::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("RunLog::save_csv: cannot open " + path);
  }
  const auto& cols = columns();
  for (size_t i = 0; i < cols.size(); ++i) {
    out << cols[i].name << (i + 1 < cols.size() ? ',' : '\n');
  }
  char buf[64];
  for (const auto& row : rows) {
    for (size_t i = 0; i < cols.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", cols[i].get(row));
      out << buf << (i + 1 < cols.size() ? ',' : '\n');
    }
  }
  if (!out) {
    throw std::runtime_error("RunLog::save_csv: write failed on " + path);
  }
}

void RunLog::save_sidecar(const std::string& path) const {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["seed"] = seed;
  j["dt_control"] = dt_control;
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(config_hash));
  j["config_hash"] = hash;
  j["rows"] = rows.size();
  j["fault"] = fault;
  if (fault) j["fault_message"] = fault_message;
  std::vector<std::string> names;
  for (const auto& c : columns()) names.push_back(c.name);
  j["columns"] = names;
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("RunLog::save_sidecar: cannot open " + path);
  }
  out << j.dump(2) << "\n";
}

RunLog RunLog::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("RunLog::load_csv: cannot open " + path);
  }
  const auto& cols = columns();
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("RunLog::load_csv: empty file " + path);
  }
  {
    std::istringstream ss(line);
    std::string name;
    size_t i = 0;
    while (std::getline(ss, name, ',')) {
      if (i >= cols.size() || name != cols[i].name) {
        throw std::runtime_error("RunLog::load_csv: unexpected column '" +
                                 name + "'");
      }
      ++i;
    }
    if (i != cols.size()) {
      throw std::runtime_error("RunLog::load_csv: missing columns");
    }
  }
  RunLog log;
  size_t rowno = 1;
  while (std::getline(in, line)) {
    ++rowno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    LogRow row;
    for (size_t i = 0; i < cols.size(); ++i) {
      if (!std::getline(ss, cell, ',')) {
        throw std::runtime_error("RunLog::load_csv: row " +
                                 std::to_string(rowno) + " has too few cells");
      }
      try {
        cols[i].set(row, std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error("RunLog::load_csv: bad number in row " +
                                 std::to_string(rowno));
      }
    }
    log.rows.push_back(row);
  }
  return log;
}

}  // namespace aic::harness
