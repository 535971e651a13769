#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "copycat/coderack.hpp"
#include "copycat/workspace.hpp"

// The perception catalog. Codelets cooperate in scout -> strength-tester ->
// builder chains: a scout finds a candidate structure, the tester gates it
// on strength, the builder installs it after fighting whatever it cannot
// coexist with. A codelet whose payload went stale fizzles without touching
// the workspace.

namespace copycat {

enum class Outcome { fizzled, posted, built, lost, broke, answered, snagged };

inline std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::fizzled: return "fizzle";
    case Outcome::posted: return "posted";
    case Outcome::built: return "built";
    case Outcome::lost: return "lost";
    case Outcome::broke: return "broke";
    case Outcome::answered: return "answered";
    case Outcome::snagged: return "snag";
  }
  return "?";
}

constexpr int kBuildActivationPost = 50;
constexpr int kBottomUpUrgency = 20;

inline std::vector<Handle> structure_handles(const AnyStructure& s) {
  std::vector<Handle> out;
  if (const Group* g = std::get_if<Group>(&s)) {
    out = g->members;
  } else if (const Description* d = std::get_if<Description>(&s)) {
    out = {d->object};
  } else if (const Bond* b = std::get_if<Bond>(&s)) {
    out = {b->from, b->to};
  } else if (const Correspondence* c = std::get_if<Correspondence>(&s)) {
    out = {c->from, c->to};
  } else if (const Replacement* r = std::get_if<Replacement>(&s)) {
    out = {r->initial_obj, r->modified_obj};
  }
  return out;
}

inline bool payload_valid(const Workspace& ws, const AnyStructure& s) {
  for (Handle h : structure_handles(s))
    if (!ws.occupied(h)) return false;
  return true;
}

namespace detail {

inline std::optional<Handle> pick_by_salience(const Slipnet& net, const Workspace& ws,
                                              const std::vector<Handle>& objects,
                                              int temperature, Rng& rng,
                                              double span) {
  if (objects.empty()) return std::nullopt;
  std::vector<double> weights;
  weights.reserve(objects.size());
  for (Handle h : objects)
    weights.push_back(static_cast<double>(ws.object_metrics(net, h).salience));
  return objects[weighted_pick_index(weights, temperature, rng, span)];
}

inline int node_activation_or_zero(const Slipnet& net, const std::string& name) {
  return net.has_node(name) ? net.activation(name) : 0;
}

inline int node_depth_or_zero(const Slipnet& net, const std::string& name) {
  return net.has_node(name) ? net.depth(name) : 0;
}

/// Installed bond of the given kind/direction joining positions p and p+1.
inline bool chain_bond_between(const Workspace& ws, StringId string, int p,
                               const std::string& kind, Direction direction) {
  for (Handle h : ws.all_of(StoreId::bonds)) {
    const Bond& b = ws.bond(h);
    if (b.kind != kind || b.direction != direction) continue;
    const Letter& from = ws.letter(b.from);
    const Letter& to = ws.letter(b.to);
    if (from.string_id != string) continue;
    int lo = std::min(from.position, to.position);
    int hi = std::max(from.position, to.position);
    if (lo == p && hi == p + 1) return true;
  }
  return false;
}

inline std::optional<int> number_value(const std::string& descriptor) {
  static constexpr std::array<std::pair<std::string_view, int>, 5> table{{
      {"one", 1}, {"two", 2}, {"three", 3}, {"four", 4}, {"five", 5}}};
  for (const auto& [name, value] : table)
    if (descriptor == name) return value;
  return std::nullopt;
}

}  // namespace detail

/// Whether a testable descriptor holds for an object. Number descriptors
/// count group members; nothing else is testable.
inline bool descriptor_applies(const Workspace& ws, const std::string& descriptor,
                               Handle obj) {
  auto value = detail::number_value(descriptor);
  if (!value) throw Error("unsupported descriptor: " + descriptor);
  if (obj.store != StoreId::groups) return false;
  return static_cast<int>(ws.group(obj).members.size()) == *value;
}

// --- scouts ---------------------------------------------------------------

/// Looks for a relation between two adjacent letters: sameness when the
/// glyphs match, otherwise whatever labeled lateral link joins the letter
/// categories. Emits a strength-tester on success.
inline std::optional<Codelet> scout_bond(const Slipnet& net, const Workspace& ws,
                                         int temperature, Rng& rng,
                                         double span = 4.0) {
  StringId string = rng.below(2) == 0 ? StringId::initial : StringId::target;
  std::vector<Handle> letters = ws.letters_of(string);
  if (letters.size() < 2) return std::nullopt;

  auto picked = detail::pick_by_salience(net, ws, letters, temperature, rng, span);
  const Letter& from = ws.letter(*picked);

  int len = static_cast<int>(ws.text_of(string).size());
  std::vector<int> neighbor_positions;
  if (from.position > 0) neighbor_positions.push_back(from.position - 1);
  if (from.position < len - 1) neighbor_positions.push_back(from.position + 1);
  int neighbor_pos = neighbor_positions[static_cast<std::size_t>(
      rng.below(static_cast<int>(neighbor_positions.size())))];
  auto neighbor = ws.letter_at(string, neighbor_pos);
  if (!neighbor) return std::nullopt;
  const Letter& to = ws.letter(*neighbor);

  std::string kind;
  int assoc = 0;
  Direction direction = Direction::none;
  if (from.glyph == to.glyph) {
    kind = nodes::sameness;
    assoc = 100;
  } else {
    auto relation = net.lateral_relation(std::string(1, from.glyph),
                                         std::string(1, to.glyph));
    if (!relation) return std::nullopt;
    kind = relation->first;
    assoc = relation->second;
    direction = to.position > from.position ? Direction::right : Direction::left;
  }

  Bond bond{kind, *picked, *neighbor, direction};
  int urgency = std::max({1, detail::node_activation_or_zero(net, kind), assoc / 2});
  return Codelet{CodeletKind::strength_tester, std::min(100, urgency),
                 Proposal{bond, 0}};
}

/// Grows the maximal run of same-kind, same-direction bonds around a
/// strength-weighted seed bond into a group proposal.
inline std::optional<Codelet> scout_group(const Slipnet& net, const Workspace& ws,
                                          int temperature, Rng& rng,
                                          double span = 4.0) {
  std::vector<Handle> bonds = ws.all_of(StoreId::bonds);
  if (bonds.empty()) return std::nullopt;
  std::vector<double> weights;
  weights.reserve(bonds.size());
  for (Handle h : bonds)
    weights.push_back(static_cast<double>(ws.strength(net, ws.bond(h))));
  Handle seed_handle = bonds[weighted_pick_index(weights, temperature, rng, span)];
  const Bond& seed = ws.bond(seed_handle);

  const Letter& from = ws.letter(seed.from);
  const Letter& to = ws.letter(seed.to);
  StringId string = from.string_id;
  int len = static_cast<int>(ws.text_of(string).size());
  int lo = std::min(from.position, to.position);
  int hi = std::max(from.position, to.position);
  while (lo > 0 &&
         detail::chain_bond_between(ws, string, lo - 1, seed.kind, seed.direction))
    --lo;
  while (hi < len - 1 &&
         detail::chain_bond_between(ws, string, hi, seed.kind, seed.direction))
    ++hi;

  std::vector<Handle> members;
  for (int p = lo; p <= hi; ++p) {
    auto h = ws.letter_at(string, p);
    if (!h) return std::nullopt;
    members.push_back(*h);
  }

  Group group{seed.kind + "-group", std::move(members), seed.direction, string};
  int strength = ws.strength(net, group);
  return Codelet{CodeletKind::strength_tester, std::max(1, strength),
                 Proposal{group, 0}};
}

/// Proposes a length description for a salient group, but only while the
/// length concept is hot and the matching number node is fully active.
inline std::optional<Codelet> scout_description(const Slipnet& net,
                                                const Workspace& ws,
                                                int temperature, Rng& rng,
                                                double span = 4.0) {
  auto picked =
      detail::pick_by_salience(net, ws, ws.objects(), temperature, rng, span);
  if (!picked) return std::nullopt;
  if (detail::node_activation_or_zero(net, nodes::length) <= 50) return std::nullopt;

  for (const char* name : {"one", "two", "three", "four", "five"}) {
    if (detail::node_activation_or_zero(net, name) != 100) continue;
    if (!descriptor_applies(ws, name, *picked)) continue;
    Description description{nodes::length, name, *picked};
    int strength = detail::node_depth_or_zero(net, name);
    return Codelet{CodeletKind::strength_tester, std::max(1, strength),
                   Proposal{description, 0}};
  }
  return std::nullopt;
}

/// Pairs a salient initial-string letter with a salient target-string
/// letter and collects concept mappings over their shared facets. Slippages
/// ride slip links and are admitted probabilistically.
inline std::optional<Codelet> scout_correspondence(const Slipnet& net,
                                                   const Workspace& ws,
                                                   int temperature, Rng& rng,
                                                   double span = 4.0) {
  std::vector<Handle> initial_letters = ws.letters_of(StringId::initial);
  std::vector<Handle> target_letters = ws.letters_of(StringId::target);
  if (initial_letters.empty() || target_letters.empty()) return std::nullopt;

  auto from = detail::pick_by_salience(net, ws, initial_letters, temperature, rng, span);
  auto to = detail::pick_by_salience(net, ws, target_letters, temperature, rng, span);

  std::vector<ConceptMapping> mappings;
  bool anchored = false;  // needs a mapping on string-position or letter-category
  for (Handle dh : ws.descriptions_of(*from)) {
    const Description& df = ws.description(dh);
    for (Handle th : ws.descriptions_of(*to)) {
      const Description& dt = ws.description(th);
      if (df.facet != dt.facet) continue;
      if (df.descriptor == dt.descriptor) {
        mappings.push_back({df.facet, df.descriptor, dt.descriptor});
      } else {
        auto assoc = net.degree_of_association(df.descriptor, dt.descriptor,
                                               {LinkKind::slip});
        if (!assoc) continue;
        if (!warped_coin(static_cast<double>(*assoc),
                         static_cast<double>(100 - *assoc), temperature, rng, span))
          continue;
        mappings.push_back({df.facet, df.descriptor, dt.descriptor});
      }
      if (df.facet == nodes::string_position || df.facet == nodes::letter_category)
        anchored = true;
    }
  }
  if (mappings.empty() || !anchored) return std::nullopt;

  Correspondence correspondence{*from, *to, std::move(mappings)};
  int strength = ws.strength(net, correspondence);
  return Codelet{CodeletKind::strength_tester, std::max(1, strength),
                 Proposal{correspondence, 0}};
}

/// Hypothesizes how initial became modified: a no-op rule when nothing
/// changed, otherwise a description of the changed letter (deep facets
/// preferred as things cool) plus either the replacement's relation or the
/// literal new glyph.
inline std::optional<Codelet> scout_rule(const Slipnet& net, const Workspace& ws,
                                         int temperature, Rng& rng,
                                         double span = 4.0) {
  std::vector<Handle> replacements = ws.all_of(StoreId::replacements);
  if (replacements.empty()) return std::nullopt;

  std::vector<Handle> changed;
  for (Handle h : replacements)
    if (ws.replacement(h).change.kind != Transform::Kind::identity)
      changed.push_back(h);

  Rule rule;
  if (changed.empty()) {
    rule = Rule{"", "", Transform::make_identity()};
  } else {
    Handle pick = changed[static_cast<std::size_t>(
        rng.below(static_cast<int>(changed.size())))];
    const Replacement& replacement = ws.replacement(pick);

    std::vector<Handle> descriptions = ws.descriptions_of(replacement.initial_obj);
    if (descriptions.empty()) return std::nullopt;
    std::vector<double> depth_weights;
    depth_weights.reserve(descriptions.size());
    for (Handle dh : descriptions)
      depth_weights.push_back(static_cast<double>(
          detail::node_depth_or_zero(net, ws.description(dh).descriptor)));
    const Description& chosen = ws.description(descriptions[weighted_pick_index(
        depth_weights, temperature, rng, span)]);

    char literal_glyph = ws.letter(replacement.modified_obj).glyph;
    Transform transform = Transform::make_literal(literal_glyph);
    if (replacement.change.kind == Transform::Kind::relation) {
      // Deep relations beat shallow literal glyphs, but not always; the
      // literal reading survives at high temperature.
      double relation_depth = static_cast<double>(
          detail::node_depth_or_zero(net, replacement.change.relation));
      double literal_depth = static_cast<double>(
          detail::node_depth_or_zero(net, std::string(1, literal_glyph)));
      if (warped_coin(relation_depth, literal_depth, temperature, rng, span))
        transform = replacement.change;
    }
    rule = Rule{chosen.facet, chosen.descriptor, transform};
  }

  int strength = ws.strength(net, rule);
  return Codelet{CodeletKind::strength_tester, std::max(1, strength),
                 Proposal{rule, 0}};
}

// --- tester and builder -----------------------------------------------------

/// Gates a proposal on its strength: pass probability is the warped share
/// of strength against its complement.
inline std::optional<Codelet> test_strength(const Slipnet& net, const Workspace& ws,
                                            const Proposal& proposal,
                                            int temperature, Rng& rng,
                                            double span = 4.0) {
  if (!payload_valid(ws, proposal.structure)) return std::nullopt;
  int s = ws.strength(net, proposal.structure);
  if (!warped_coin(static_cast<double>(s), static_cast<double>(100 - s),
                   temperature, rng, span))
    return std::nullopt;
  return Codelet{CodeletKind::builder, std::max(1, s),
                 Proposal{proposal.structure, s}};
}

struct BuildResult {
  Outcome outcome = Outcome::fizzled;
  std::optional<Handle> handle;
};

inline void post_build_activation(Slipnet& net, const AnyStructure& s) {
  auto post = [&](const std::string& name) {
    if (!name.empty() && net.has_node(name))
      net.post_activation(name, kBuildActivationPost);
  };
  if (const Bond* b = std::get_if<Bond>(&s)) {
    post(b->kind);
  } else if (const Group* g = std::get_if<Group>(&s)) {
    post(g->kind);
  } else if (const Description* d = std::get_if<Description>(&s)) {
    post(d->facet);
    post(d->descriptor);
  } else if (const Correspondence* c = std::get_if<Correspondence>(&s)) {
    for (const ConceptMapping& m : c->mappings) {
      post(m.descriptor_from);
      if (!m.identity()) post(m.descriptor_to);
    }
  } else if (const Rule* r = std::get_if<Rule>(&s)) {
    post(r->position_descriptor);
    if (r->transform.kind == Transform::Kind::relation) post(r->transform.relation);
  }
}

/// Installs a proposal, dueling every installed structure it conflicts
/// with. Each duel is won with the warped share of the challenger's
/// strength against the incumbent's current strength.
inline BuildResult build_with_fight(Slipnet& net, Workspace& ws,
                                    const Proposal& proposal, int temperature,
                                    Rng& rng, double span = 4.0) {
  if (!payload_valid(ws, proposal.structure)) return {Outcome::fizzled, {}};
  if (ws.find_identical(proposal.structure)) return {Outcome::fizzled, {}};

  int s_new = ws.strength(net, proposal.structure);
  std::vector<Handle> rivals = ws.find_conflicting(proposal.structure);
  for (Handle rival : rivals) {
    int s_old = ws.strength(net, ws.resolve(rival));
    if (!warped_coin(static_cast<double>(s_new), static_cast<double>(s_old),
                     temperature, rng, span))
      return {Outcome::lost, {}};
  }
  for (Handle rival : rivals)
    if (ws.occupied(rival)) ws.remove(rival);
  if (!payload_valid(ws, proposal.structure)) return {Outcome::fizzled, {}};

  Handle h = ws.add(proposal.structure);
  post_build_activation(net, proposal.structure);
  if (std::holds_alternative<Group>(proposal.structure)) {
    if (auto d = ws.group_position_description(h)) {
      ws.add(*d);
      post_build_activation(net, *d);
    }
  }
  return {Outcome::built, h};
}

// --- rule translation and application ----------------------------------------

/// Carries the rule across to the target's frame of reference through the
/// concept mappings of the changed object's correspondence. Without a
/// correspondence the untranslated rule is only trusted when things are
/// cool. No-op rules pass through untouched.
inline std::optional<Rule> translate_rule(const Slipnet& net, const Workspace& ws,
                                          const Rule& rule, int temperature,
                                          Rng& rng, double span = 4.0) {
  (void)net;
  if (rule.transform.kind == Transform::Kind::identity) return rule;

  std::optional<Handle> carrier;
  for (Handle dh : ws.all_of(StoreId::descriptions)) {
    const Description& d = ws.description(dh);
    if (d.facet != rule.position_facet || d.descriptor != rule.position_descriptor)
      continue;
    if (d.object.store == StoreId::letters &&
        ws.letter(d.object).string_id == StringId::initial) {
      carrier = d.object;
      break;
    }
    if (d.object.store == StoreId::groups &&
        ws.group(d.object).string_id == StringId::initial) {
      carrier = d.object;
      break;
    }
  }

  std::optional<Handle> correspondence =
      carrier ? ws.correspondence_of(*carrier) : std::nullopt;
  if (!correspondence) {
    std::vector<double> p = warp({static_cast<double>(temperature),
                                  static_cast<double>(100 - temperature)},
                                 temperature, span);
    return rng.next_unit() < p[1] ? std::optional<Rule>(rule) : std::nullopt;
  }

  Rule translated = rule;
  for (const ConceptMapping& m : ws.correspondence(*correspondence).mappings) {
    if (m.identity()) continue;
    if (translated.position_descriptor == m.descriptor_from)
      translated.position_descriptor = m.descriptor_to;
    if (translated.transform.kind == Transform::Kind::relation &&
        translated.transform.relation == m.descriptor_from)
      translated.transform.relation = m.descriptor_to;
  }
  return translated;
}

namespace detail {

inline std::optional<char> follow_relation(const Slipnet& net, char glyph,
                                           const std::string& relation) {
  std::string category(1, glyph);
  if (!net.has_node(category)) return std::nullopt;
  std::optional<int> shortest;
  std::optional<char> result;
  for (int li : net.outgoing(category)) {
    const ConceptLink& link = net.link(li);
    if (link.kind != LinkKind::lateral || !link.label || *link.label != relation)
      continue;
    if (link.to.size() != 1) continue;
    int len = net.effective_length(link);
    if (!shortest || len < *shortest) {
      shortest = len;
      result = link.to[0];
    }
  }
  return result;
}

}  // namespace detail

/// Rewrites the target string under a translated rule. Absent means the
/// run hit a snag: either nothing matches the rule's descriptor or a
/// relation walks off the end of its chain.
inline std::optional<std::string> apply_rule(const Slipnet& net, const Rule& rule,
                                             const std::string& target) {
  if (rule.transform.kind == Transform::Kind::identity) return target;

  int len = static_cast<int>(target.size());
  std::vector<int> matches;
  for (int i = 0; i < len; ++i) {
    bool matched = false;
    if (rule.position_facet == nodes::string_position) {
      matched = to_string(string_position(i, len)) == rule.position_descriptor;
    } else if (rule.position_facet == nodes::letter_category) {
      matched = rule.position_descriptor.size() == 1 &&
                target[static_cast<std::size_t>(i)] == rule.position_descriptor[0];
    } else if (rule.position_facet == nodes::object_category) {
      matched = rule.position_descriptor == nodes::letter;
    }
    if (matched) matches.push_back(i);
  }
  if (matches.empty()) return std::nullopt;

  std::string answer = target;
  for (int i : matches) {
    if (rule.transform.kind == Transform::Kind::literal) {
      answer[static_cast<std::size_t>(i)] = rule.transform.glyph;
    } else {
      auto next = detail::follow_relation(net, target[static_cast<std::size_t>(i)],
                                          rule.transform.relation);
      if (!next) return std::nullopt;
      answer[static_cast<std::size_t>(i)] = *next;
    }
  }
  return answer;
}

// --- breaker -----------------------------------------------------------------

struct BreakResult {
  Outcome outcome = Outcome::fizzled;
  std::optional<Handle> handle;
};

/// Tears down one installed structure, favoring weak ones in hot
/// workspaces. Descriptions and the problem letters are left alone.
inline BreakResult breaker_step(const Slipnet& net, Workspace& ws, int temperature,
                                Rng& rng) {
  std::vector<Handle> candidates;
  for (StoreId store : {StoreId::bonds, StoreId::groups, StoreId::correspondences,
                        StoreId::rules}) {
    for (Handle h : ws.all_of(store)) candidates.push_back(h);
  }
  if (candidates.empty()) return {Outcome::fizzled, {}};

  Handle pick = candidates[static_cast<std::size_t>(
      rng.below(static_cast<int>(candidates.size())))];
  int strength = ws.strength(net, ws.resolve(pick));
  double p = (100.0 - static_cast<double>(strength)) / 100.0 *
             static_cast<double>(temperature) / 100.0;
  if (!rng.chance(p)) return {Outcome::fizzled, {}};
  ws.remove(pick);
  return {Outcome::broke, pick};
}

}  // namespace copycat
