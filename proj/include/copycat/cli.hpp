#pragma once

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "copycat/report.hpp"

// Command-line front end. Exit codes: 0 success, 1 runtime or validation
// failure, 2 usage error. All output that feeds golden comparisons goes to
// the out stream; progress chatter goes to err.

namespace copycat::cli {

/// Splits "abc abd ijk" into a Problem; rejects anything that is not three
/// lowercase words.
inline Problem parse_problem(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tokens;
  std::string token;
  while (in >> token) tokens.push_back(token);
  if (tokens.size() != 3)
    throw InputError("problem must be three whitespace-separated strings");
  for (const std::string& t : tokens)
    for (char c : t)
      if (c < 'a' || c > 'z')
        throw InputError(std::string("invalid character in problem string: '") +
                         c + "'");
  return Problem{tokens[0], tokens[1], tokens[2]};
}

namespace detail {

inline int run_command(const Problem& problem, const RunConfig& config, int runs,
                       ReportFormat format, const std::string& trace_path,
                       bool quiet, std::ostream& out, std::ostream& err) {
  std::ofstream trace_file;
  if (!trace_path.empty()) {
    trace_file.open(trace_path, std::ios::binary | std::ios::trunc);
    if (!trace_file) {
      err << "error: cannot write trace file: " << trace_path << "\n";
      return 1;
    }
  }

  int progress_step = std::max(1, runs / 10);
  auto per_run = [&](int index, const RunResult& result) {
    if (trace_file) {
      trace_file << "# run " << index << " seed "
                 << (config.seed + static_cast<std::uint64_t>(index)) << "\n";
      if (result.trace)
        for (const std::string& line : *result.trace) trace_file << line << "\n";
      trace_file << "# result " << to_string(result.status) << " answer="
                 << (result.answer ? *result.answer : "-")
                 << " codelets=" << result.codelets_executed
                 << " temperature=" << result.final_temperature << "\n";
    }
    if (!quiet && (index + 1) % progress_step == 0)
      err << "progress: " << (index + 1) << "/" << runs << " runs\n";
  };

  AnswerDistribution dist = run_batch(problem, config, runs, per_run);
  out << emit_report(problem, dist, config, format);
  if (trace_file) {
    trace_file.flush();
    if (!trace_file) {
      err << "error: cannot write trace file: " << trace_path << "\n";
      return 1;
    }
  }
  return 0;
}

inline int check_slipnet_command(const std::string& path, std::ostream& out,
                                 std::ostream& err) {
  std::string label = path.empty() ? "<embedded>" : path;
  try {
    Slipnet net = path.empty() ? lang::load(lang::default_source())
                               : lang::load_file(path);
    int alphabet = 0;
    int numbers = 0;
    for (const ConceptNode& n : net.nodes()) {
      if (n.name.size() == 1 && n.name[0] >= 'a' && n.name[0] <= 'z') ++alphabet;
      if (n.name == "one" || n.name == "two" || n.name == "three" ||
          n.name == "four" || n.name == "five")
        ++numbers;
    }
    out << "nodes: " << net.node_count() << "\n"
        << "links: " << net.link_count() << "\n"
        << "alphabet nodes: " << alphabet << "\n"
        << "number nodes: " << numbers << "\n";
    return 0;
  } catch (const lang::LoadError& e) {
    err << label << ":" << e.full_message() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

inline int emit_default_command(const std::string& path, std::ostream& out,
                                std::ostream& err) {
  if (path.empty()) {
    out << lang::default_source();
    return 0;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  file << lang::default_source();
  file.flush();
  if (!file) {
    err << "error: cannot write file: " << path << "\n";
    return 1;
  }
  return 0;
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"copycat: stochastic letter-string analogy engine"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand(
      "run", "Execute a batch of runs and report the answer distribution");
  std::string problem_text;
  int runs = 100;
  std::uint64_t seed = 0;
  std::string slipnet_path;
  int max_codelets = 3000;
  std::string format_name = "json";
  std::string trace_path;
  bool trace_slipnet = false;
  bool quiet = false;
  run_cmd->add_option("--problem", problem_text,
                      "Three whitespace-separated strings: initial modified target")
      ->required();
  run_cmd->add_option("--runs", runs, "Number of independent runs")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", seed, "Base seed; run i uses seed+i");
  run_cmd->add_option("--slipnet", slipnet_path, "Network definition file");
  run_cmd->add_option("--max-codelets", max_codelets, "Budget per run")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--format", format_name, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));
  run_cmd->add_option("--trace", trace_path, "Write per-codelet traces here");
  run_cmd->add_flag("--trace-slipnet", trace_slipnet,
                    "Add activation snapshots to the trace");
  run_cmd->add_flag("--quiet", quiet, "Report only, no progress lines");

  auto* check_cmd = app.add_subcommand(
      "check-slipnet", "Load and validate a definition file, print counts");
  std::string check_path;
  check_cmd->add_option("path", check_path,
                        "Definition file (defaults to the embedded network)");

  auto* emit_cmd = app.add_subcommand("emit-default-slipnet",
                                      "Write the embedded network definition");
  std::string emit_path;
  emit_cmd->add_option("path", emit_path, "Output file (defaults to stdout)");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) {
      Problem problem;
      try {
        problem = parse_problem(problem_text);
      } catch (const InputError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
      }
      RunConfig config;
      config.seed = seed;
      config.max_codelets = max_codelets;
      if (!slipnet_path.empty()) config.slipnet_path = slipnet_path;
      config.collect_trace = !trace_path.empty();
      config.trace_slipnet = trace_slipnet;
      ReportFormat format =
          format_name == "csv" ? ReportFormat::csv : ReportFormat::json;
      return detail::run_command(problem, config, runs, format, trace_path, quiet,
                                 out, err);
    }
    if (check_cmd->parsed())
      return detail::check_slipnet_command(check_path, out, err);
    if (emit_cmd->parsed()) return detail::emit_default_command(emit_path, out, err);
  } catch (const lang::LoadError& e) {
    err << "error: " << e.full_message() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace copycat::cli
