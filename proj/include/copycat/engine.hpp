#pragma once

#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "copycat/codelets.hpp"
#include "copycat/slipnet_lang.hpp"

namespace copycat {

struct Problem {
  std::string initial;
  std::string modified;
  std::string target;
};

struct RunConfig {
  int max_codelets = 3000;
  std::uint64_t seed = 0;
  std::optional<std::string> slipnet_path;  // absent: embedded default network
  int coderack_capacity = 100;
  double exponent_span = 4.0;       // warp sharpening from T=100 down to T=0
  int update_interval = 5;          // slipnet step + temperature refresh
  int bottom_up_interval = 10;      // bottom-up scout reposting
  bool collect_trace = false;
  bool trace_slipnet = false;       // activation snapshots at each update
  bool check_invariants = false;    // full workspace scan after every build
};

enum class RunStatus { answered, snag, exhausted };

inline std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::answered: return "answered";
    case RunStatus::snag: return "snag";
    case RunStatus::exhausted: return "exhausted";
  }
  return "?";
}

struct RunResult {
  std::optional<std::string> answer;
  RunStatus status = RunStatus::exhausted;
  int codelets_executed = 0;
  int final_temperature = 100;
  std::optional<std::vector<std::string>> trace;
};

struct AnswerDistribution {
  std::map<std::string, int> counts;
  int failures = 0;
  int runs = 0;
  double mean_final_temperature = 0.0;
};

inline Slipnet load_run_network(const RunConfig& config) {
  Slipnet net = config.slipnet_path ? lang::load_file(*config.slipnet_path)
                                    : lang::load(lang::default_source());
  net.reset_activations();
  return net;
}

namespace detail {

class Run {
public:
  Run(const Problem& problem, const RunConfig& config)
      : config_((require_valid(config), config)),
        net_(load_run_network(config)),
        ws_(Workspace::init(problem.initial, problem.modified, problem.target, net_)),
        rack_(config.coderack_capacity),
        rng_(config.seed),
        temperature_(compute_temperature(ws_, net_)) {
    if (config_.collect_trace) trace_.emplace();
  }

  RunResult execute() {
    post_bottom_up_set();
    RunStatus status = RunStatus::exhausted;
    int executed = 0;
    while (executed < config_.max_codelets) {
      auto codelet = rack_.select_and_remove(temperature_, rng_, config_.exponent_span);
      if (!codelet) {
        // A drained rack stalls the schedule; re-seed the scouts.
        post_bottom_up_set();
        continue;
      }
      ++executed;
      Outcome outcome = run_codelet(*codelet);
      if (trace_) {
        std::ostringstream line;
        line << executed << '\t' << to_string(codelet->kind) << '\t'
             << codelet->urgency << '\t' << to_string(outcome) << '\t'
             << temperature_;
        trace_->push_back(line.str());
      }
      if (outcome == Outcome::answered) {
        status = RunStatus::answered;
        break;
      }
      if (outcome == Outcome::snagged) {
        status = RunStatus::snag;
        break;
      }
      if (executed % config_.update_interval == 0) {
        net_.step();
        temperature_ = compute_temperature(ws_, net_);
        if (trace_ && config_.trace_slipnet) trace_->push_back(slipnet_snapshot(executed));
      }
      if (executed % config_.bottom_up_interval == 0) post_bottom_up_set();
    }

    RunResult result;
    result.status = status;
    result.answer = ws_.answer();
    result.codelets_executed = executed;
    result.final_temperature = compute_temperature(ws_, net_);
    result.trace = std::move(trace_);
    return result;
  }

private:
  static void require_valid(const RunConfig& config) {
    if (config.max_codelets < 1) throw Error("max_codelets must be >= 1");
    if (config.coderack_capacity < 1) throw Error("coderack capacity must be >= 1");
  }

  void post_bottom_up_set() {
    auto scout = [&](CodeletKind kind) {
      rack_.post(Codelet{kind, kBottomUpUrgency, std::nullopt}, rng_);
    };
    scout(CodeletKind::bond_scout);
    scout(CodeletKind::bond_scout);
    scout(CodeletKind::bond_scout);
    scout(CodeletKind::group_scout);
    scout(CodeletKind::description_scout);
    scout(CodeletKind::correspondence_scout);
    scout(CodeletKind::rule_scout);
    rack_.post(Codelet{CodeletKind::breaker, std::max(1, temperature_ / 2),
                       std::nullopt},
               rng_);
    if (auto rule_handle = ws_.installed_rule()) {
      int urgency = std::max(1, ws_.strength(net_, ws_.rule(*rule_handle)));
      rack_.post(Codelet{CodeletKind::rule_translator, urgency, std::nullopt}, rng_);
    }
  }

  Outcome run_codelet(const Codelet& codelet) {
    const double span = config_.exponent_span;
    switch (codelet.kind) {
      case CodeletKind::bond_scout:
        return post_spawned(scout_bond(net_, ws_, temperature_, rng_, span));
      case CodeletKind::group_scout:
        return post_spawned(scout_group(net_, ws_, temperature_, rng_, span));
      case CodeletKind::description_scout:
        return post_spawned(scout_description(net_, ws_, temperature_, rng_, span));
      case CodeletKind::correspondence_scout:
        return post_spawned(scout_correspondence(net_, ws_, temperature_, rng_, span));
      case CodeletKind::rule_scout:
        return post_spawned(scout_rule(net_, ws_, temperature_, rng_, span));
      case CodeletKind::strength_tester: {
        if (!codelet.proposal) return Outcome::fizzled;
        return post_spawned(
            test_strength(net_, ws_, *codelet.proposal, temperature_, rng_, span));
      }
      case CodeletKind::builder: {
        if (!codelet.proposal) return Outcome::fizzled;
        BuildResult result =
            build_with_fight(net_, ws_, *codelet.proposal, temperature_, rng_, span);
        if (result.outcome == Outcome::built) {
          if (config_.check_invariants) ws_.check_invariants(&net_);
          if (std::holds_alternative<Rule>(codelet.proposal->structure)) {
            int urgency = std::max(1, codelet.proposal->strength);
            rack_.post(Codelet{CodeletKind::rule_translator, urgency, std::nullopt},
                       rng_);
          }
        }
        return result.outcome;
      }
      case CodeletKind::rule_translator: {
        auto rule_handle = ws_.installed_rule();
        if (!rule_handle) return Outcome::fizzled;
        auto translated = translate_rule(net_, ws_, ws_.rule(*rule_handle),
                                         temperature_, rng_, span);
        if (!translated) return Outcome::fizzled;
        auto answer = apply_rule(net_, *translated, ws_.target());
        if (!answer) return Outcome::snagged;
        ws_.set_answer(*answer);
        return Outcome::answered;
      }
      case CodeletKind::breaker:
        return breaker_step(net_, ws_, temperature_, rng_).outcome;
    }
    return Outcome::fizzled;
  }

  Outcome post_spawned(std::optional<Codelet> spawned) {
    if (!spawned) return Outcome::fizzled;
    rack_.post(std::move(*spawned), rng_);
    return Outcome::posted;
  }

  std::string slipnet_snapshot(int step) const {
    std::ostringstream line;
    line << "# slipnet\t" << step << '\t' << temperature_ << '\t';
    bool first = true;
    for (const ConceptNode& n : net_.nodes()) {
      if (n.activation == 0) continue;
      if (!first) line << ' ';
      line << n.name << '=' << n.activation;
      first = false;
    }
    return line.str();
  }

  RunConfig config_;
  Slipnet net_;
  Workspace ws_;
  Coderack rack_;
  Rng rng_;
  int temperature_;
  std::optional<std::vector<std::string>> trace_;
};

}  // namespace detail

/// One complete run: fresh network, fresh workspace, seeded scouts, then
/// codelets until an answer, a snag, or the budget runs out.
inline RunResult run_once(const Problem& problem, const RunConfig& config) {
  return detail::Run(problem, config).execute();
}

/// Independent runs at seeds seed, seed+1, ... aggregated into an answer
/// distribution. Snags and exhausted runs count as failures.
inline AnswerDistribution run_batch(
    const Problem& problem, const RunConfig& config, int runs,
    const std::function<void(int, const RunResult&)>& per_run = {}) {
  if (runs < 1) throw Error("run_batch requires runs >= 1");
  AnswerDistribution dist;
  dist.runs = runs;
  long temperature_sum = 0;
  for (int i = 0; i < runs; ++i) {
    RunConfig run_config = config;
    run_config.seed = config.seed + static_cast<std::uint64_t>(i);
    RunResult result = run_once(problem, run_config);
    if (result.answer)
      ++dist.counts[*result.answer];
    else
      ++dist.failures;
    temperature_sum += result.final_temperature;
    if (per_run) per_run(i, result);
  }
  dist.mean_final_temperature =
      static_cast<double>(temperature_sum) / static_cast<double>(runs);
  return dist;
}

}  // namespace copycat
