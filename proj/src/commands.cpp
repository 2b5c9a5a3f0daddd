#include "evshare/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "evshare/bcsa.hpp"
#include "evshare/capacity.hpp"
#include "evshare/check.hpp"
#include "evshare/enumeration.hpp"
#include "evshare/errors.hpp"
#include "evshare/instance.hpp"
#include "evshare/master.hpp"
#include "evshare/svg_map.hpp"
#include "json.hpp"

namespace evshare::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitFailure = 3;
constexpr int kExitNoIncumbent = 4;

void require_builtin_backend() {
  const char* backend = std::getenv("EVSHARE_SOLVER");
  if (backend && std::string(backend) != "builtin")
    throw ValidationError("unknown solver backend '" + std::string(backend) +
                          "'; only 'builtin' is bundled");
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << content;
}

struct GenOptions {
  SyntheticConfig cfg;
  std::vector<double> bounds{0.0, 0.0, 10.0, 10.0};
  std::string out = "instance.json";
};

int cmd_gen(const GenOptions& opt) {
  SyntheticConfig cfg = opt.cfg;
  if (opt.bounds.size() != 4)
    throw ValidationError("--bounds needs xmin,ymin,xmax,ymax");
  cfg.x_min = opt.bounds[0];
  cfg.y_min = opt.bounds[1];
  cfg.x_max = opt.bounds[2];
  cfg.y_max = opt.bounds[3];
  const Instance inst = generate_synthetic(cfg);
  save_instance(inst, opt.out);
  std::cout << "wrote " << opt.out << " (" << inst.net.node_count() << " nodes, "
            << inst.net.period_count() << " periods, budget " << inst.params.budget << ")\n";
  return kExitOk;
}

struct SolveOptions {
  std::string instance_path;
  std::string method;
  double time_limit = lp::kInf;
  std::string out_dir = ".";
  int threads = 1;
  long iteration_cap = 0;
};

int cmd_solve(const SolveOptions& opt) {
  require_builtin_backend();
  const auto t0 = std::chrono::steady_clock::now();
  const Instance inst = load_instance(opt.instance_path);
  const CapacityProfile profile = compute_profile(inst.net, inst.params);
  std::filesystem::create_directories(opt.out_dir);

  std::vector<Station> stations;
  MasterSolution sol;
  std::string trace_jsonl;

  if (opt.method == "nodes") {
    for (std::size_t n = 0; n < inst.net.node_count(); ++n)
      stations.push_back(make_node_station(inst, static_cast<int>(n)));
    MasterProblem master(inst, profile, stations);
    sol = master.solve_integer(opt.time_limit);
  } else if (opt.method == "ee") {
    StationCatalog catalog;
    sol = run_ee(inst, profile, opt.time_limit, &catalog);
    stations = std::move(catalog.stations);
  } else if (opt.method == "bcsa") {
    BcsaLimits limits;
    limits.wall_seconds = opt.time_limit;
    limits.threads = opt.threads;
    limits.max_iterations = opt.iteration_cap;
    BcsaTrace trace = run_bcsa(inst, profile, limits);
    stations = trace.pool;
    sol = trace.final_solution;
    trace_jsonl = trace_to_jsonl(trace);
  } else {
    throw ValidationError("unknown method '" + opt.method + "'");
  }

  const bool has_solution = !sol.z.empty() || sol.status == lp::SolveStatus::Optimal;
  if (sol.status == lp::SolveStatus::TimeLimit && sol.z.empty()) return kExitNoIncumbent;
  (void)has_solution;

  const SolutionFile file = make_solution_file(inst, stations, sol, opt.method);
  const std::string sol_path = opt.out_dir + "/solution.json";
  const std::string map_path = opt.out_dir + "/map.svg";
  const std::string report_path = opt.out_dir + "/report.json";
  save_solution(file, sol_path);
  write_file(map_path, render_map(inst, &file));
  if (!trace_jsonl.empty()) write_file(opt.out_dir + "/trace.jsonl", trace_jsonl);

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  nlohmann::json report{{"method", opt.method},
                        {"status", file.status},
                        {"objective", sol.objective},
                        {"wall_seconds", wall},
                        {"stations_used", stations.size()},
                        {"outputs",
                         {{"solution", sol_path},
                          {"map", map_path},
                          {"report", report_path}}}};
  if (!trace_jsonl.empty()) report["outputs"]["trace"] = opt.out_dir + "/trace.jsonl";
  write_file(report_path, report.dump(2) + "\n");

  std::cout << "method=" << opt.method << " status=" << file.status
            << " objective=" << sol.objective << " stations=" << stations.size()
            << " wall_seconds=" << wall << "\n";
  return kExitOk;
}

int cmd_check(const std::string& instance_path, const std::string& solution_path) {
  const Instance inst = load_instance(instance_path);
  const SolutionFile sol = load_solution(solution_path);
  const CheckReport report = check_solution(inst, sol);
  for (const auto& item : report.items)
    std::cout << (item.pass ? "PASS " : "FAIL ") << item.name << " (worst violation "
              << item.worst << ")\n";
  return report.all_pass ? kExitOk : kExitFailure;
}

int cmd_map(const std::string& instance_path, const std::string& solution_path,
            const std::string& out_path) {
  const Instance inst = load_instance(instance_path);
  const SolutionFile sol = load_solution(solution_path);
  write_file(out_path, render_map(inst, &sol));
  std::cout << "wrote " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"charging-station placement for balanced one-way EV sharing"};
  app.require_subcommand(1);

  GenOptions gen;
  std::string periods_csv = "3,6,4,5,6";
  std::string trips_csv = "400,1200,800,900,600";
  auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic instance");
  gen_cmd->add_option("--nodes", gen.cfg.node_count, "node count")
      ->required()
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.cfg.seed, "random seed");
  gen_cmd->add_option("--periods", periods_csv, "period lengths in hours, comma separated");
  gen_cmd->add_option("--trips", trips_csv, "trips per period, comma separated");
  gen_cmd->add_option("--bounds", gen.bounds, "xmin,ymin,xmax,ymax")->delimiter(',')
      ->expected(4);
  gen_cmd->add_option("--lambda", gen.cfg.gravity_lambda, "gravity decay length (km)");
  gen_cmd->add_option("--clusters", gen.cfg.clusters, "scatter nodes around this many centres");
  gen_cmd->add_option("--cluster-radius", gen.cfg.cluster_radius, "jitter around centres (km)");
  gen_cmd->add_option("--walk", gen.cfg.service.walk_radius, "walk radius w (km)");
  gen_cmd->add_option("--market-share", gen.cfg.service.market_share, "served share k");
  gen_cmd->add_option("--handling", gen.cfg.service.handling_time_hours, "handling time p (h)");
  gen_cmd->add_option("--charge-rate", gen.cfg.service.charge_rate_hours_per_km,
                      "charge time per km u (h/km)");
  gen_cmd->add_option("--out", gen.out, "output instance path");

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "place stations and assign flows");
  solve_cmd->add_option("instance", solve.instance_path, "instance file")->required();
  solve_cmd->add_option("--method", solve.method, "bcsa | ee | nodes")
      ->required()
      ->check(CLI::IsMember({"bcsa", "ee", "nodes"}));
  solve_cmd->add_option("--time-limit", solve.time_limit, "seconds");
  solve_cmd->add_option("--out", solve.out_dir, "output directory");
  solve_cmd->add_option("--threads", solve.threads, "threads for parallel stages")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--iteration-cap", solve.iteration_cap,
                        "pricing rounds cap (0 = default)");

  std::string check_instance, check_solution_path;
  auto* check_cmd = app.add_subcommand("check", "re-verify a solution file");
  check_cmd->add_option("instance", check_instance, "instance file")->required();
  check_cmd->add_option("solution", check_solution_path, "solution file")->required();

  std::string map_instance, map_solution, map_out = "map.svg";
  auto* map_cmd = app.add_subcommand("map", "render the station map");
  map_cmd->add_option("instance", map_instance, "instance file")->required();
  map_cmd->add_option("solution", map_solution, "solution file")->required();
  map_cmd->add_option("--out", map_out, "output SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) {
      gen.cfg.period_lengths.clear();
      for (const auto& tok : CLI::detail::split(periods_csv, ','))
        gen.cfg.period_lengths.push_back(std::stod(tok));
      gen.cfg.trips_per_period.clear();
      for (const auto& tok : CLI::detail::split(trips_csv, ','))
        gen.cfg.trips_per_period.push_back(std::stoll(tok));
      return cmd_gen(gen);
    }
    if (solve_cmd->parsed()) return cmd_solve(solve);
    if (check_cmd->parsed()) return cmd_check(check_instance, check_solution_path);
    if (map_cmd->parsed()) return cmd_map(map_instance, map_solution, map_out);
  } catch (const std::invalid_argument&) {
    std::cerr << "error: malformed numeric list\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const SolveError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const SizeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace evshare::cli
