#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "copycat/core.hpp"
#include "copycat/workspace.hpp"

namespace copycat {

enum class CodeletKind {
  bond_scout,
  group_scout,
  correspondence_scout,
  description_scout,
  rule_scout,
  strength_tester,
  builder,
  rule_translator,
  breaker
};

inline std::string_view to_string(CodeletKind k) {
  switch (k) {
    case CodeletKind::bond_scout: return "bond-scout";
    case CodeletKind::group_scout: return "group-scout";
    case CodeletKind::correspondence_scout: return "correspondence-scout";
    case CodeletKind::description_scout: return "description-scout";
    case CodeletKind::rule_scout: return "rule-scout";
    case CodeletKind::strength_tester: return "strength-tester";
    case CodeletKind::builder: return "builder";
    case CodeletKind::rule_translator: return "rule-translator";
    case CodeletKind::breaker: return "breaker";
  }
  return "?";
}

/// A structure that has been scouted but not yet installed. The tester
/// fills in the strength before handing it to a builder.
struct Proposal {
  AnyStructure structure;
  int strength = 0;
};

/// A deferred action: what to do, how urgently, and on what.
struct Codelet {
  CodeletKind kind{};
  int urgency = 1;
  std::optional<Proposal> proposal;
};

// Temperature-controlled sharpening of a weight vector into probabilities.
// At T=100 the weights are used proportionally; cooling raises them to a
// power (up to 1+span), concentrating mass on the strongest option.
inline std::vector<double> warp(std::span<const double> weights, int temperature,
                                double exponent_span = 4.0) {
  if (weights.empty()) throw Error("warp requires at least one weight");
  double exponent =
      1.0 + exponent_span * (100.0 - static_cast<double>(temperature)) / 100.0;
  std::vector<double> out(weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double w = weights[i];
    if (w < 0.0) throw Error("warp weights must be non-negative");
    out[i] = w == 0.0 ? 0.0 : std::pow(w, exponent);
    total += out[i];
  }
  if (total == 0.0) {
    double uniform = 1.0 / static_cast<double>(out.size());
    for (double& p : out) p = uniform;
    return out;
  }
  for (double& p : out) p /= total;
  return out;
}

inline std::vector<double> warp(std::initializer_list<double> weights,
                                int temperature, double exponent_span = 4.0) {
  return warp(std::span<const double>(weights.begin(), weights.size()),
              temperature, exponent_span);
}

/// Samples the warp distribution with a single draw.
inline std::size_t weighted_pick_index(std::span<const double> weights,
                                       int temperature, Rng& rng,
                                       double exponent_span = 4.0) {
  std::vector<double> p = warp(weights, temperature, exponent_span);
  double u = rng.next_unit();
  double cumulative = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    cumulative += p[i];
    if (u < cumulative) return i;
  }
  return p.size() - 1;
}

template <class T>
const T& weighted_pick(std::span<const T> items, std::span<const double> weights,
                       int temperature, Rng& rng, double exponent_span = 4.0) {
  if (items.size() != weights.size())
    throw Error("weighted_pick: items and weights differ in length");
  return items[weighted_pick_index(weights, temperature, rng, exponent_span)];
}

/// Passes a two-way decision through warp; the chance the first option wins.
inline bool warped_coin(double first, double second, int temperature, Rng& rng,
                        double exponent_span = 4.0) {
  std::vector<double> p = warp({first, second}, temperature, exponent_span);
  return rng.next_unit() < p[0];
}

// The agenda. Bounded; posting over capacity evicts an existing entry with
// probability rising as its urgency falls.
class Coderack {
public:
  explicit Coderack(int capacity = 100) : capacity_(capacity) {}

  void post(Codelet codelet, Rng& rng) {
    if (codelet.urgency < 1 || codelet.urgency > 100)
      throw Error("codelet urgency must be in [1,100]");
    if (static_cast<int>(entries_.size()) >= capacity_) {
      std::vector<double> weights;
      weights.reserve(entries_.size());
      for (const Codelet& c : entries_)
        weights.push_back(static_cast<double>(101 - c.urgency));
      double u = rng.next_unit();
      double total = 0.0;
      for (double w : weights) total += w;
      double cumulative = 0.0;
      std::size_t victim = weights.size() - 1;
      for (std::size_t i = 0; i < weights.size(); ++i) {
        cumulative += weights[i] / total;
        if (u < cumulative) {
          victim = i;
          break;
        }
      }
      entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(victim));
    }
    entries_.push_back(std::move(codelet));
  }

  /// Temperature-warped selection by urgency; the pick leaves the rack.
  std::optional<Codelet> select_and_remove(int temperature, Rng& rng,
                                           double exponent_span = 4.0) {
    if (entries_.empty()) return std::nullopt;
    std::vector<double> weights;
    weights.reserve(entries_.size());
    for (const Codelet& c : entries_)
      weights.push_back(static_cast<double>(c.urgency));
    std::size_t pick = weighted_pick_index(weights, temperature, rng, exponent_span);
    Codelet out = std::move(entries_[pick]);
    entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(pick));
    return out;
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  int capacity() const { return capacity_; }
  std::span<const Codelet> entries() const { return entries_; }

private:
  std::vector<Codelet> entries_;
  int capacity_;
};

// Workspace disorder on a 0-100 scale: 100 means nothing is integrated,
// 0 means every object is maximally happy. Weighted by importance so the
// objects that matter drive the reading.
inline int compute_temperature(const Workspace& ws, const Slipnet& net) {
  std::vector<Handle> objects = ws.objects();
  if (objects.empty()) return 100;
  long weighted = 0;
  long importance_total = 0;
  long happiness_total = 0;
  for (Handle obj : objects) {
    ObjectMetrics m = ws.object_metrics(net, obj);
    weighted += static_cast<long>(m.importance) * m.happiness;
    importance_total += m.importance;
    happiness_total += m.happiness;
  }
  long mean = importance_total == 0
                  ? happiness_total / static_cast<long>(objects.size())
                  : weighted / importance_total;
  return 100 - static_cast<int>(mean);
}

}  // namespace copycat
