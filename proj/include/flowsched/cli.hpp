#pragma once
// Command-line front end: generate | solve | evaluate | report.
//
// Exit codes: 0 success, 1 usage or input error, 2 solver failure,
// 3 finished at the time limit with the gap still open.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flowsched/generator.hpp"
#include "flowsched/master.hpp"

namespace flowsched {

namespace detail {

inline std::string read_file(const std::string& path, const char* flag) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(std::string(flag) + ": cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& text, const char* flag) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw ParseError(std::string(flag) + ": cannot write " + path);
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"maintenance scheduling for maximum total flow"};
  app.require_subcommand(1);

  int set_id = 1, nodes = 30, layers = 3;
  std::uint64_t seed = 1;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("generate", "write a seeded benchmark instance");
  gen->add_option("--set", set_id, "benchmark family: 1 wide, 2 late, 3 tight windows")
      ->check(CLI::Range(1, 3));
  gen->add_option("--seed", seed, "seed; identical seeds give identical files");
  gen->add_option("--nodes", nodes, "network node count")->check(CLI::Range(2, 100000));
  gen->add_option("--layers", layers, "internal layer count")->check(CLI::PositiveNumber);
  gen->add_option("--out", gen_out, "instance file to write")->required();

  std::string instance_path, mode_label = "main", solve_out;
  double time_limit = 300.0, abs_gap = 0.999;
  CLI::App* sol = app.add_subcommand("solve", "schedule the outages for maximum flow");
  sol->add_option("--instance", instance_path, "instance file")->required();
  sol->add_option("--mode", mode_label, "dbd | precuts | main | lpr");
  sol->add_option("--time-limit", time_limit, "wall-clock budget, seconds")
      ->check(CLI::PositiveNumber);
  sol->add_option("--abs-gap", abs_gap, "stop when bound - incumbent falls below this")
      ->check(CLI::PositiveNumber);
  sol->add_option("--out", solve_out,
                  "output prefix; writes <out>.schedule.json and <out>.report.json")
      ->required();

  std::string eval_instance, eval_schedule;
  CLI::App* eva = app.add_subcommand("evaluate", "total flow under a given schedule");
  eva->add_option("--instance", eval_instance, "instance file")->required();
  eva->add_option("--schedule", eval_schedule, "schedule file")->required();

  std::string report_path;
  CLI::App* rep = app.add_subcommand("report", "print a stored report as a table");
  rep->add_option("path", report_path, "report file")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      Network net = generate_layered_network(nodes, layers, seed);
      Instance inst = generate_instance(set_id, net, seed);
      detail::write_file(gen_out, serialize_instance(inst), "--out");
      out << "wrote " << gen_out << ": " << net.arc_count() - 1 << " arcs, horizon "
          << inst.horizon << ", " << inst.requests.size() << " requests\n";
      return 0;
    }
    if (sol->parsed()) {
      SolverConfig cfg;
      cfg.mode = mode_from_name(mode_label);
      cfg.time_limit = time_limit;
      cfg.abs_gap = abs_gap;
      std::string sched_path = solve_out + ".schedule.json";
      std::string rep_path = solve_out + ".report.json";
      detail::require(sched_path != instance_path && rep_path != instance_path,
                      "--out: output would overwrite --instance");
      Instance inst = parse_instance(detail::read_file(instance_path, "--instance"));
      SolveResult res = solve(inst, cfg);
      detail::write_file(sched_path, serialize_schedule(res.schedule), "--out");
      detail::write_file(rep_path, report_to_json(res.report).dump(2) + "\n", "--out");
      out << format_report_table(res.report);
      return res.report.abs_gap >= cfg.abs_gap ? 3 : 0;
    }
    if (eva->parsed()) {
      Instance inst = parse_instance(detail::read_file(eval_instance, "--instance"));
      Schedule sched = parse_schedule(detail::read_file(eval_schedule, "--schedule"));
      out << evaluate_schedule(inst, sched) << "\n";
      return 0;
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(detail::read_file(report_path, "report path"));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("report: invalid JSON: ") + e.what());
    }
    out << format_report_table(report_from_json(j));
    return 0;
  } catch (const ContractViolation& e) {
    err << "solver failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }
}

}  // namespace flowsched
