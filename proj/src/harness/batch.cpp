#include "aic/harness/batch.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace aic::harness {
namespace {

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  const double w = pos - static_cast<double>(lo);
  return (1.0 - w) * sorted[lo] + w * sorted[hi];
}

Quantiles make_quantiles(std::vector<double> values) {
  Quantiles out;
  out.samples = values.size();
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  std::sort(values.begin(), values.end());
  out.p05 = quantile(values, 0.05);
  out.p25 = quantile(values, 0.25);
  out.p50 = quantile(values, 0.50);
  out.p75 = quantile(values, 0.75);
  out.p95 = quantile(values, 0.95);
  return out;
}

struct Metric {
  const char* name;
  double (*get)(const TrialResult&);
};

constexpr Metric kMetrics[] = {
    {"rmse_body_x", [](const TrialResult& t) { return t.summary.rmse_body_x; }},
    {"rmse_body_y", [](const TrialResult& t) { return t.summary.rmse_body_y; }},
    {"rmse_body_z", [](const TrialResult& t) { return t.summary.rmse_body_z; }},
    {"rmse_tool_x", [](const TrialResult& t) { return t.summary.rmse_tool_x; }},
    {"rmse_tool_y", [](const TrialResult& t) { return t.summary.rmse_tool_y; }},
    {"rmse_tool_z", [](const TrialResult& t) { return t.summary.rmse_tool_z; }},
    {"rmse_force", [](const TrialResult& t) { return t.summary.rmse_force; }},
    {"contact_ratio",
     [](const TrialResult& t) { return t.summary.contact_ratio; }},
    {"lateral_tool_error_mean",
     [](const TrialResult& t) { return t.lateral_tool_error.mean; }},
    {"lateral_tool_error_p95",
     [](const TrialResult& t) { return t.lateral_tool_error.p95; }},
};

nlohmann::json quantiles_json(const Quantiles& q) {
  return nlohmann::json{{"mean", q.mean}, {"p05", q.p05},   {"p25", q.p25},
                        {"p50", q.p50},   {"p75", q.p75},   {"p95", q.p95},
                        {"samples", q.samples}};
}

}  // namespace

Quantiles lateral_tool_error(const RunLog& log,
                             const sim::RigidBodyParams& vehicle) {
  std::vector<double> values;
  values.reserve(log.rows.size());
  for (const auto& row : log.rows) {
    const bool near_surface =
        (row.distance.has_value() && *row.distance < 0.05) || row.in_contact;
    if (!near_surface) continue;
    const Rotation r_WB = Rotation::from_quaternion(row.attitude);
    const Vec3 tool_axis_W = r_WB * (vehicle.tool_rotation * Vec3::UnitZ());
    const Vec3 err = row.tool_position - row.ref_tool_position;
    const Vec3 lateral = err - err.dot(tool_axis_W) * tool_axis_W;
    values.push_back(lateral.norm());
  }
  return make_quantiles(std::move(values));
}

BatchResult run_batch(const ScenarioConfig& cfg, unsigned base_seed,
                      std::size_t seeds, std::size_t jobs) {
  cfg.validate();
  if (seeds == 0) {
    throw std::invalid_argument("run_batch: seeds must be >= 1");
  }
  jobs = std::max<std::size_t>(1, std::min(jobs, seeds));

  BatchResult result;
  result.trials.resize(seeds);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= seeds) return;
      ScenarioConfig c = cfg;
      c.seed = base_seed + static_cast<unsigned>(i);
      TrialResult& out = result.trials[i];
      out.seed = c.seed;
      try {
        const RunLog log = run_scenario(c);
        out.fault = log.fault;
        out.fault_message = log.fault_message;
        out.summary = summarize(log);
        out.lateral_tool_error = lateral_tool_error(log, c.vehicle);
      } catch (const std::exception& e) {
        out.fault = true;
        out.fault_message = e.what();
      }
    }
  };

  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  Aggregate& agg = result.aggregate;
  agg.trials = seeds;
  for (const auto& t : result.trials) {
    if (t.fault) {
      ++agg.faults;
    } else {
      ++agg.clean;
    }
  }
  for (const Metric& m : kMetrics) {
    double sum = 0.0;
    for (const auto& t : result.trials) {
      if (!t.fault) sum += m.get(t);
    }
    AggregateStat stat;
    if (agg.clean > 0) {
      stat.mean = sum / static_cast<double>(agg.clean);
      if (agg.clean > 1) {
        double ss = 0.0;
        for (const auto& t : result.trials) {
          if (!t.fault) {
            const double d = m.get(t) - stat.mean;
            ss += d * d;
          }
        }
        stat.stddev = std::sqrt(ss / static_cast<double>(agg.clean - 1));
      }
    }
    agg.stats[m.name] = stat;
  }
  return result;
}

std::string batch_to_json_text(const BatchResult& result) {
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : result.trials) {
    nlohmann::json j{
        {"seed", t.seed},
        {"fault", t.fault},
        {"rmse_body_x", t.summary.rmse_body_x},
        {"rmse_body_y", t.summary.rmse_body_y},
        {"rmse_body_z", t.summary.rmse_body_z},
        {"rmse_tool_x", t.summary.rmse_tool_x},
        {"rmse_tool_y", t.summary.rmse_tool_y},
        {"rmse_tool_z", t.summary.rmse_tool_z},
        {"rmse_force", t.summary.rmse_force},
        {"contact_ratio", t.summary.contact_ratio},
        {"lateral_tool_error", quantiles_json(t.lateral_tool_error)},
    };
    if (t.fault) j["fault_message"] = t.fault_message;
    trials.push_back(std::move(j));
  }
  nlohmann::json stats;
  for (const auto& [name, stat] : result.aggregate.stats) {
    stats[name] = {{"mean", stat.mean}, {"stddev", stat.stddev}};
  }
  nlohmann::json root{
      {"trials", std::move(trials)},
      {"aggregate",
       {{"trials", result.aggregate.trials},
        {"clean", result.aggregate.clean},
        {"faults", result.aggregate.faults},
        {"stats", std::move(stats)}}},
  };
  return root.dump(2) + "\n";
}

void save_batch_json(const BatchResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("save_batch_json: cannot open " + path);
  }
  out << batch_to_json_text(result);
}

void save_trials_csv(const BatchResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("save_trials_csv: cannot open " + path);
  }
  out << "seed,fault,rmse_body_x,rmse_body_y,rmse_body_z,rmse_tool_x,"
         "rmse_tool_y,rmse_tool_z,rmse_force,contact_ratio,"
         "lateral_mean,lateral_p05,lateral_p25,lateral_p50,lateral_p75,"
         "lateral_p95,lateral_samples\n";
  char buf[512];
  for (const auto& t : result.trials) {
    std::snprintf(buf, sizeof(buf),
                  "%u,%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,"
                  "%.9g,%.9g,%.9g,%.9g,%zu\n",
                  t.seed, t.fault ? 1 : 0, t.summary.rmse_body_x,
                  t.summary.rmse_body_y, t.summary.rmse_body_z,
                  t.summary.rmse_tool_x, t.summary.rmse_tool_y,
                  t.summary.rmse_tool_z, t.summary.rmse_force,
                  t.summary.contact_ratio, t.lateral_tool_error.mean,
                  t.lateral_tool_error.p05, t.lateral_tool_error.p25,
                  t.lateral_tool_error.p50, t.lateral_tool_error.p75,
                  t.lateral_tool_error.p95, t.lateral_tool_error.samples);
    out << buf;
  }
}

}  // namespace aic::harness
