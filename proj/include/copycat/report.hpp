#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "copycat/engine.hpp"

namespace copycat {

enum class ReportFormat { json, csv };

/// Fractions print with six decimals; exact halves resolve to the even
/// digit, so identical distributions serialize byte-identically.
inline std::string format_fraction(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6f", value);
  return buffer;
}

/// Answers ordered by descending count, ties broken lexicographically.
inline std::vector<std::pair<std::string, int>> sorted_answers(
    const AnswerDistribution& dist) {
  std::vector<std::pair<std::string, int>> out(dist.counts.begin(),
                                               dist.counts.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

inline nlohmann::ordered_json config_echo(const RunConfig& config) {
  nlohmann::ordered_json j;
  j["slipnet"] = config.slipnet_path ? *config.slipnet_path : "embedded";
  j["max_codelets"] = config.max_codelets;
  j["coderack.capacity"] = config.coderack_capacity;
  j["warp.exponent_span"] = config.exponent_span;
  j["temperature.update_interval"] = config.update_interval;
  j["bottom_up.post_interval"] = config.bottom_up_interval;
  return j;
}

/// Serializes a batch result. Identical inputs give byte-identical output.
inline std::string emit_report(const Problem& problem,
                               const AnswerDistribution& dist,
                               const RunConfig& config, ReportFormat format) {
  auto answers = sorted_answers(dist);
  if (format == ReportFormat::csv) {
    std::string out = "answer,count,fraction\n";
    for (const auto& [answer, count] : answers) {
      out += answer;
      out += ',';
      out += std::to_string(count);
      out += ',';
      out += format_fraction(static_cast<double>(count) / dist.runs);
      out += '\n';
    }
    out += "failures,";
    out += std::to_string(dist.failures);
    out += ',';
    out += format_fraction(static_cast<double>(dist.failures) / dist.runs);
    out += '\n';
    return out;
  }

  nlohmann::ordered_json j;
  j["problem"] = {{"initial", problem.initial},
                  {"modified", problem.modified},
                  {"target", problem.target}};
  j["runs"] = dist.runs;
  j["seed"] = config.seed;
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (const auto& [answer, count] : answers) counts[answer] = count;
  j["answers"] = counts;
  j["failures"] = dist.failures;
  j["mean_final_temperature"] = dist.mean_final_temperature;
  j["version"] = std::string(kVersion);
  j["config"] = config_echo(config);
  return j.dump(2) + "\n";
}

}  // namespace copycat
