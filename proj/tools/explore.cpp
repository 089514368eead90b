#include "colex/error.hpp"
#include "colex/log.hpp"
#include "colex/report.hpp"
#include "colex/sim.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kReached = 0;
constexpr int kFailed = 1;
constexpr int kNotReached = 2;

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulated collaborative exploration with a ground and an aerial robot."};

  std::string map = "maze";
  std::string mode = "collab";
  std::uint64_t seed = 0;
  std::string out_path = "-";
  std::string format = "json";
  bool benchmark = false;
  int benchmark_replans = 20;
  colex::ScenarioConfig config;

  app.add_option("--map", map, "maze | fence | random | file:PATH")->capture_default_str();
  app.add_option("--mode", mode, "ugv | uav | collab | compare")
      ->check(CLI::IsMember({"ugv", "uav", "collab", "compare"}))
      ->capture_default_str();
  app.add_option("--seed", seed, "map generator seed")->capture_default_str();
  app.add_option("--out", out_path, "output file, - for stdout")->capture_default_str();
  app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--replan-period", config.replan_period, "seconds between replans")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--progress-target", config.progress_target, "known fraction that ends the run")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  app.add_option("--timeout", config.timeout, "simulated seconds before giving up")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_flag("--benchmark-orderings", benchmark,
               "replay the first harmonic problems with row-major and spreading orderings");
  app.add_option("--benchmark-replans", benchmark_replans, "problems replayed by --benchmark-orderings")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (map.rfind("file:", 0) == 0) {
      config.map_file = map.substr(5);
      if (config.map_file.empty()) throw std::invalid_argument("--map file: needs a path");
    } else {
      config.map.kind = colex::map_kind_from_string(map);
    }
    config.map.seed = seed;

    if (mode == "compare") {
      colex::ModeComparison table = colex::compare_modes(config);
      if (benchmark) {
        colex::ScenarioConfig c = config;
        c.mode = colex::Mode::Collaborative;
        table.rows.back().ordering_benchmark = colex::benchmark_orderings(c, benchmark_replans);
      }
      write_output(out_path, format == "csv" ? colex::comparison_csv(table) : colex::comparison_json(table));
      for (const auto& row : table.rows)
        if (!row.t_exp) return kNotReached;
      return kReached;
    }

    config.mode = colex::mode_from_string(mode);
    std::vector<colex::SorProblem> problems;
    colex::RunHooks hooks;
    if (benchmark) {
      hooks.sor_problems = &problems;
      hooks.max_recorded_problems = benchmark_replans;
    }
    colex::RunReport report = colex::run(config, hooks);
    if (benchmark) {
      report.ordering_benchmark = colex::summarize(colex::count_sweeps_comparison(problems, config.ugv.sor),
                                                   static_cast<int>(problems.size()));
    }
    write_output(out_path, format == "csv" ? colex::progress_csv(report) : colex::report_json(report));
    return report.t_exp ? kReached : kNotReached;
  } catch (const std::exception& e) {
    std::cerr << "explore: " << e.what() << "\n";
    return kFailed;
  }
}
