// Copyright (c) 2026 The sbnb authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sbnb/bnb.hpp"
#include "sbnb/generator.hpp"
#include "sbnb/io.hpp"
#include "sbnb/oracle.hpp"

namespace sbnb {

namespace detail {

inline std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

inline std::string format_vector(const Vector& v) {
  std::string text = "[";
  for (Index i = 0; i < v.size(); ++i) {
    if (i) text += ", ";
    text += format_double(v(i));
  }
  return text + "]";
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw SolverError(ErrorCode::parse, "cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace detail

inline std::string format_report_text(const SolveReport& report, double epsilon,
                                      bool with_trace) {
  std::ostringstream out;
  out << "status: " << to_string(report.status) << "\n";
  out << "value: " << detail::format_double(report.ub) << "\n";
  out << "x: " << detail::format_vector(report.x_star) << "\n";
  out << "lower_bound: " << detail::format_double(report.lb)
      << "  upper_bound: " << detail::format_double(report.ub)
      << "  gap: " << detail::format_double(report.gap) << "  (epsilon "
      << detail::format_double(epsilon) << ")\n";
  out << "iterations: " << report.iterations
      << "  cp_solves: " << report.cp_solves
      << "  lp_solves: " << report.lp_solves << "\n";
  out << "wall_time_seconds: " << detail::format_double(report.wall_time_seconds)
      << "\n";
  if (with_trace) {
    for (const TraceEntry& entry : report.node_log)
      out << "iter " << entry.iter << ": lb=" << detail::format_double(entry.lb)
          << " ub=" << detail::format_double(entry.ub)
          << " d=" << detail::format_double(entry.node_diameter) << "\n";
  }
  return out.str();
}

/// Command-line entry point. args excludes the program name. Exit codes:
/// 0 eps_optimal / success, 2 iteration or time limit, 3 infeasible or
/// unbounded, 1 other errors, 64 usage errors.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"Global optimization of non-convex QCQP by outcome-space "
               "simplicial branch and bound"};
  app.name("sbnb");
  app.require_subcommand(1);

  std::string solve_file;
  double epsilon = 1e-4;
  std::optional<long> max_iter;
  std::optional<double> time_limit;
  std::string output = "text";
  bool trace = false;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve an instance file");
  solve_cmd->add_option("file", solve_file, "instance JSON file")->required();
  solve_cmd->add_option("--epsilon", epsilon, "optimality tolerance")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--max-iter", max_iter, "iteration limit");
  solve_cmd->add_option("--time-limit", time_limit, "time limit in seconds");
  solve_cmd->add_option("--output", output, "report format")
      ->check(CLI::IsMember({"json", "text"}));
  solve_cmd->add_flag("--trace", trace, "include the per-iteration trace");

  std::string validate_file;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check an instance file");
  validate_cmd->add_option("file", validate_file, "instance JSON file")
      ->required();

  std::string oracle_file;
  double resolution = 0.01;
  std::string method = "grid";
  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "Brute-force reference optimum");
  oracle_cmd->add_option("file", oracle_file, "instance JSON file")->required();
  oracle_cmd->add_option("--resolution", resolution, "grid spacing")
      ->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--method", method, "grid or vertex")
      ->check(CLI::IsMember({"grid", "vertex"}));

  GenParams gen_params;
  std::string gen_out;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("--n", gen_params.n, "decision dimension")->required();
  gen_cmd->add_option("--r", gen_params.r, "negative eigenvalue count")
      ->required();
  gen_cmd->add_option("--p", gen_params.p, "quadratic constraint count");
  gen_cmd->add_option("--seed", gen_params.seed, "random seed");
  gen_cmd->add_option("--out", gen_out, "output file (stdout when omitted)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 64;
  }

  try {
    if (*solve_cmd) {
      const QcqpInstance inst =
          parse_instance(detail::read_file(solve_file));
      SolverParams params;
      params.epsilon = epsilon;
      params.max_iters = max_iter;
      params.time_limit_seconds = time_limit;
      const SolveReport report = solve(inst, params);
      if (output == "json")
        out << emit_report(report, epsilon, trace);
      else
        out << format_report_text(report, epsilon, trace);
      switch (report.status) {
        case BnbStatus::eps_optimal: return 0;
        case BnbStatus::iter_limit:
        case BnbStatus::time_limit: return 2;
        case BnbStatus::infeasible:
        case BnbStatus::unbounded_set: return 3;
        default: return 1;
      }
    }
    if (*validate_cmd) {
      const QcqpInstance inst =
          parse_instance_unvalidated(detail::read_file(validate_file));
      const ValidationReport report = validate_instance(inst);
      out << "valid: " << (report.valid ? "true" : "false") << "\n";
      out << "r_detected: " << report.r_detected << "\n";
      out << "boundedness_check: "
          << (report.boundedness_check == BoundednessCheck::verified
                  ? "verified"
                  : "not_verified")
          << "\n";
      for (const Violation& v : report.violations)
        out << to_string(v.code) << ": " << v.message << "\n";
      return report.valid ? 0 : 1;
    }
    if (*oracle_cmd) {
      const QcqpInstance inst = parse_instance(detail::read_file(oracle_file));
      const OracleResult result = method == "vertex"
                                      ? vertex_enumerate_box(inst)
                                      : grid_search(inst, resolution);
      detail::json root;
      root["value"] = result.value;
      root["x"] = detail::vector_to_json(result.x);
      root["method"] = to_string(result.method);
      root["resolution"] = result.resolution;
      root["guarantee"] = result.guarantee;
      out << root.dump(2) << "\n";
      return 0;
    }
    if (*gen_cmd) {
      const std::string text = emit_instance(generate_instance(gen_params));
      if (gen_out.empty()) {
        out << text;
      } else {
        std::ofstream file(gen_out, std::ios::binary);
        if (!file)
          throw SolverError(ErrorCode::parse, "cannot open file: " + gen_out);
        file << text;
      }
      return 0;
    }
  } catch (const SolverError& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 64;
}

}  // namespace sbnb
