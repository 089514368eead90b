#include "colex/report.hpp"

#include <json.hpp>

#include <charconv>
#include <stdexcept>

namespace colex {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

json timing_json(const PlannerTiming& t) {
  return json{{"ugv_plan_ms", t.ugv_plan_ms},
              {"ugv_traj_ms", t.ugv_traj_ms},
              {"uav_traj_ms", t.uav_traj_ms},
              {"ugv_traj_ms_mean", mean(t.ugv_traj_ms)},
              {"ugv_traj_ms_max", max_of(t.ugv_traj_ms)},
              {"uav_traj_ms_mean", mean(t.uav_traj_ms)},
              {"uav_traj_ms_max", max_of(t.uav_traj_ms)}};
}

json to_json(const RunReport& r) {
  json progress = json::array();
  for (const ProgressSample& s : r.progress) progress.push_back({s.t, s.known_fraction, s.ugv_dist, s.uav_dist});
  json j{{"schema_version", kReportSchemaVersion},
         {"mode", to_string(r.mode)},
         {"map", r.map_name},
         {"seed", r.seed},
         {"termination", to_string(r.termination)},
         {"reason", r.reason},
         {"t_exp", r.t_exp ? json(*r.t_exp) : json(nullptr)},
         {"final_known_fraction", r.progress.empty() ? 0.0 : r.progress.back().known_fraction},
         {"ugv_distance", r.ugv_distance},
         {"uav_distance", r.uav_distance},
         {"ugv_replans", r.ugv_replans},
         {"uav_replans", r.uav_replans},
         {"ugv_descent_fallbacks", r.ugv_descent_fallbacks},
         {"ugv_plan_failures", r.ugv_plan_failures},
         {"uav_global_goals", r.uav_global_goals},
         {"sor_sweeps", r.sor_sweeps},
         {"progress_columns", {"t", "known_fraction", "ugv_dist", "uav_dist"}},
         {"progress", progress}};
  if (r.ordering_benchmark) {
    const OrderingBenchmark& b = *r.ordering_benchmark;
    j["ordering_benchmark"] = {{"problems", b.problems},
                               {"rowmajor_sweeps", b.rowmajor_sweeps},
                               {"spreading_sweeps", b.spreading_sweeps},
                               {"ratio", b.ratio},
                               {"max_field_difference", b.max_field_difference}};
  }
  j["timing"] = timing_json(r.timing);
  return j;
}

RunReport from_json(const json& j) {
  if (j.at("schema_version").get<int>() != kReportSchemaVersion)
    throw std::runtime_error("unsupported report schema version");
  RunReport r;
  r.mode = mode_from_string(j.at("mode").get<std::string>());
  r.map_name = j.at("map").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.termination = termination_from_string(j.at("termination").get<std::string>());
  r.reason = j.at("reason").get<std::string>();
  if (!j.at("t_exp").is_null()) r.t_exp = j.at("t_exp").get<double>();
  r.ugv_distance = j.at("ugv_distance").get<double>();
  r.uav_distance = j.at("uav_distance").get<double>();
  r.ugv_replans = j.at("ugv_replans").get<int>();
  r.uav_replans = j.at("uav_replans").get<int>();
  r.ugv_descent_fallbacks = j.at("ugv_descent_fallbacks").get<int>();
  r.ugv_plan_failures = j.at("ugv_plan_failures").get<int>();
  r.uav_global_goals = j.at("uav_global_goals").get<int>();
  r.sor_sweeps = j.at("sor_sweeps").get<long>();
  for (const json& row : j.at("progress")) {
    r.progress.push_back({row.at(0).get<double>(), row.at(1).get<double>(), row.at(2).get<double>(),
                          row.at(3).get<double>()});
  }
  if (j.contains("ordering_benchmark")) {
    const json& b = j["ordering_benchmark"];
    r.ordering_benchmark = OrderingBenchmark{b.at("problems").get<int>(), b.at("rowmajor_sweeps").get<long>(),
                                             b.at("spreading_sweeps").get<long>(), b.at("ratio").get<double>(),
                                             b.at("max_field_difference").get<double>()};
  }
  const json& t = j.at("timing");
  r.timing.ugv_plan_ms = t.at("ugv_plan_ms").get<std::vector<double>>();
  r.timing.ugv_traj_ms = t.at("ugv_traj_ms").get<std::vector<double>>();
  r.timing.uav_traj_ms = t.at("uav_traj_ms").get<std::vector<double>>();
  return r;
}

}  // namespace

std::string progress_csv(const RunReport& report) {
  std::string out = "t,known_fraction,ugv_dist,uav_dist\n";
  for (const ProgressSample& s : report.progress) {
    out += fmt_double(s.t) + ',' + fmt_double(s.known_fraction) + ',' + fmt_double(s.ugv_dist) + ',' +
           fmt_double(s.uav_dist) + '\n';
  }
  return out;
}

std::string report_json(const RunReport& report) { return to_json(report).dump(2) + "\n"; }

RunReport report_from_json(const std::string& text) {
  try {
    return from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed report: ") + e.what());
  }
}

std::string comparison_json(const ModeComparison& comparison) {
  json rows = json::array();
  json timing = json::object();
  std::optional<double> ugv_t, collab_t;
  for (const RunReport& r : comparison.rows) {
    json row = to_json(r);
    timing[to_string(r.mode)] = row["timing"];
    row.erase("timing");
    rows.push_back(std::move(row));
    if (r.mode == Mode::UgvOnly) ugv_t = r.t_exp;
    if (r.mode == Mode::Collaborative) collab_t = r.t_exp;
  }
  json j{{"schema_version", kReportSchemaVersion}, {"mode", "compare"}, {"rows", rows}};
  j["collab_speedup_over_ugv"] = ugv_t && collab_t && *collab_t > 0 ? json(*ugv_t / *collab_t) : json(nullptr);
  j["timing"] = timing;
  return j.dump(2) + "\n";
}

std::string comparison_csv(const ModeComparison& comparison) {
  std::string out = "mode,termination,t_exp,final_known_fraction,ugv_dist,uav_dist\n";
  for (const RunReport& r : comparison.rows) {
    out += to_string(r.mode) + ',' + to_string(r.termination) + ',' + (r.t_exp ? fmt_double(*r.t_exp) : "") + ',' +
           fmt_double(r.progress.empty() ? 0.0 : r.progress.back().known_fraction) + ',' +
           fmt_double(r.ugv_distance) + ',' + fmt_double(r.uav_distance) + '\n';
  }
  return out;
}

}  // namespace colex
