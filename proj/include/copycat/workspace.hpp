#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "copycat/slipnet.hpp"

namespace copycat {

// Well-known node names from the default network.
namespace nodes {
inline constexpr const char* letter_category = "letter-category";
inline constexpr const char* object_category = "object-category";
inline constexpr const char* string_position = "string-position";
inline constexpr const char* letter = "letter";
inline constexpr const char* length = "length";
inline constexpr const char* successor = "successor";
inline constexpr const char* predecessor = "predecessor";
inline constexpr const char* sameness = "sameness";
}  // namespace nodes

enum class StoreId {
  letters,
  groups,
  descriptions,
  bonds,
  correspondences,
  rules,
  replacements
};

inline std::string_view to_string(StoreId s) {
  switch (s) {
    case StoreId::letters: return "letters";
    case StoreId::groups: return "groups";
    case StoreId::descriptions: return "descriptions";
    case StoreId::bonds: return "bonds";
    case StoreId::correspondences: return "correspondences";
    case StoreId::rules: return "rules";
    case StoreId::replacements: return "replacements";
  }
  return "?";
}

/// Stable address of a structure: a store plus a slot index. Removal
/// tombstones the slot, so handles never shift; the generation guards a
/// reused slot against stale handles from before the removal.
struct Handle {
  StoreId store{};
  int index = -1;
  int generation = 0;

  bool operator==(const Handle&) const = default;
};

enum class StringId { initial, modified, target, answer };
enum class Direction { left, right, none };

inline std::string_view to_string(StringId s) {
  switch (s) {
    case StringId::initial: return "initial";
    case StringId::modified: return "modified";
    case StringId::target: return "target";
    case StringId::answer: return "answer";
  }
  return "?";
}

struct Letter {
  char glyph = 'a';
  StringId string_id = StringId::initial;
  int position = 0;

  bool operator==(const Letter&) const = default;
};

struct Group {
  std::string kind;
  std::vector<Handle> members;  // letters, consecutive, same string
  Direction direction = Direction::none;
  StringId string_id = StringId::initial;

  bool operator==(const Group&) const = default;
};

struct Description {
  std::string facet;
  std::string descriptor;
  Handle object;

  bool operator==(const Description&) const = default;
};

struct Bond {
  std::string kind;  // successor, predecessor, sameness
  Handle from;
  Handle to;
  Direction direction = Direction::none;

  bool operator==(const Bond&) const = default;
};

struct ConceptMapping {
  std::string facet;
  std::string descriptor_from;
  std::string descriptor_to;

  bool identity() const { return descriptor_from == descriptor_to; }
  bool operator==(const ConceptMapping&) const = default;
};

struct Correspondence {
  Handle from;  // initial-string object
  Handle to;    // target-string object
  std::vector<ConceptMapping> mappings;

  bool operator==(const Correspondence&) const = default;
};

/// How a rule (or replacement) changes a letter: leave it alone, follow a
/// relation link, or substitute a literal glyph.
struct Transform {
  enum class Kind { identity, relation, literal };
  Kind kind = Kind::identity;
  std::string relation;
  char glyph = 0;

  static Transform make_identity() { return {}; }
  static Transform make_relation(std::string name) {
    return {Kind::relation, std::move(name), 0};
  }
  static Transform make_literal(char g) { return {Kind::literal, {}, g}; }

  bool operator==(const Transform&) const = default;
};

struct Rule {
  std::string position_facet;
  std::string position_descriptor;
  Transform transform;

  bool operator==(const Rule&) const = default;
};

struct Replacement {
  Handle initial_obj;
  Handle modified_obj;
  Transform change;

  bool operator==(const Replacement&) const = default;
};

using AnyStructure = std::variant<Letter, Group, Description, Bond,
                                  Correspondence, Rule, Replacement>;

inline StoreId store_of(const AnyStructure& s) {
  switch (s.index()) {
    case 0: return StoreId::letters;
    case 1: return StoreId::groups;
    case 2: return StoreId::descriptions;
    case 3: return StoreId::bonds;
    case 4: return StoreId::correspondences;
    case 5: return StoreId::rules;
    default: return StoreId::replacements;
  }
}

// --- string positions -------------------------------------------------------

enum class Position { single, leftmost, rightmost, middle, none };

inline std::string_view to_string(Position p) {
  switch (p) {
    case Position::single: return "single";
    case Position::leftmost: return "leftmost";
    case Position::rightmost: return "rightmost";
    case Position::middle: return "middle";
    case Position::none: return "none";
  }
  return "?";
}

/// Positional descriptor of index n in a string of the given length.
/// single beats leftmost for one-letter strings; rightmost beats middle.
inline Position string_position(int n, int len) {
  if (len < 1 || n < 0 || n >= len)
    throw Error(
        "string-position description position must be smaller than "
        "string-length");
  if (len == 1) return Position::single;
  if (n == 0) return Position::leftmost;
  if (n == len - 1) return Position::rightmost;
  if (len % 2 == 1 && n == (len - 1) / 2) return Position::middle;
  return Position::none;
}

// --- slot stores ------------------------------------------------------------

namespace detail {

// Tombstoning slot arena. Freed slots are reused lowest-index-first; every
// removal bumps the slot's generation so stale handles cannot alias the
// next occupant.
template <class T>
class SlotStore {
public:
  std::pair<int, int> add(T value) {  // (index, generation)
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      if (!slots_[i].value) {
        slots_[i].value = std::move(value);
        return {static_cast<int>(i), slots_[i].generation};
      }
    }
    slots_.push_back({std::move(value), 0});
    return {static_cast<int>(slots_.size() - 1), 0};
  }

  void remove(int index) {
    Slot& slot = slots_.at(static_cast<std::size_t>(index));
    slot.value.reset();
    ++slot.generation;
  }

  bool occupied(int index, int generation) const {
    return index >= 0 && index < static_cast<int>(slots_.size()) &&
           slots_[static_cast<std::size_t>(index)].value.has_value() &&
           slots_[static_cast<std::size_t>(index)].generation == generation;
  }

  const T& get(int index, int generation) const {
    if (!occupied(index, generation)) throw DanglingHandleError("dangling handle");
    return *slots_[static_cast<std::size_t>(index)].value;
  }

  int generation(int index) const {
    return slots_.at(static_cast<std::size_t>(index)).generation;
  }

  int slot_count() const { return static_cast<int>(slots_.size()); }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < slots_.size(); ++i)
      if (slots_[i].value) f(static_cast<int>(i), *slots_[i].value);
  }

private:
  struct Slot {
    std::optional<T> value;
    int generation = 0;
  };
  std::vector<Slot> slots_;
};

}  // namespace detail

struct ObjectMetrics {
  int happiness = 0;
  int importance = 0;
  int unhappiness = 100;
  int salience = 50;
};

enum class StructureEvent { added, removed };

// The blackboard. Holds the problem strings and every perceived structure,
// addressed by stable handles. Mutation happens through add/remove so the
// cascade rule (nothing occupied may reference a tombstone) is maintained
// in one place.
class Workspace {
public:
  using StructureObserver = std::function<void(StructureEvent, Handle)>;

  Workspace() = default;

  /// Builds the initial configuration: one letter per character, the
  /// bottom-up descriptions, and the positional initial->modified
  /// replacements. Posts activation for every descriptor perceived.
  static Workspace init(const std::string& initial, const std::string& modified,
                        const std::string& target, Slipnet& net) {
    if (initial.empty() || modified.empty() || target.empty())
      throw InputError("problem strings must be non-empty");
    if (initial.size() != modified.size())
      throw InputError(
          "unsupported problem: initial and modified strings must have equal "
          "length");
    for (const std::string* s : {&initial, &modified, &target})
      for (char c : *s)
        if (c < 'a' || c > 'z')
          throw InputError(std::string("invalid character in problem string: '") +
                           c + "'");

    Workspace ws;
    ws.initial_ = initial;
    ws.modified_ = modified;
    ws.target_ = target;

    auto add_string = [&](const std::string& text, StringId id) {
      for (int i = 0; i < static_cast<int>(text.size()); ++i) {
        Handle h = ws.add(Letter{text[static_cast<std::size_t>(i)], id, i});
        for (const Description& d : ws.letter_descriptions(h)) {
          ws.add(d);
          net.post_activation(d.descriptor, kPerceptionPost);
        }
      }
    };
    add_string(initial, StringId::initial);
    add_string(modified, StringId::modified);
    add_string(target, StringId::target);

    for (int i = 0; i < static_cast<int>(initial.size()); ++i) {
      Handle from = *ws.letter_at(StringId::initial, i);
      Handle to = *ws.letter_at(StringId::modified, i);
      Transform change = Transform::make_identity();
      if (initial[static_cast<std::size_t>(i)] != modified[static_cast<std::size_t>(i)]) {
        auto relation =
            net.lateral_relation(std::string(1, initial[static_cast<std::size_t>(i)]),
                                 std::string(1, modified[static_cast<std::size_t>(i)]));
        change = relation ? Transform::make_relation(relation->first)
                          : Transform::make_literal(modified[static_cast<std::size_t>(i)]);
      }
      ws.add(Replacement{from, to, change});
    }
    return ws;
  }

  const std::string& initial() const { return initial_; }
  const std::string& modified() const { return modified_; }
  const std::string& target() const { return target_; }
  const std::optional<std::string>& answer() const { return answer_; }

  void set_answer(std::string answer) {
    if (answer_) throw Error("answer already set");
    answer_ = std::move(answer);
  }

  const std::string& text_of(StringId id) const {
    switch (id) {
      case StringId::initial: return initial_;
      case StringId::modified: return modified_;
      case StringId::target: return target_;
      case StringId::answer: break;
    }
    if (!answer_) throw Error("answer string not set");
    return *answer_;
  }

  void set_observer(StructureObserver observer) { observer_ = std::move(observer); }

  // -- resolution ------------------------------------------------------------

  bool occupied(Handle h) const {
    switch (h.store) {
      case StoreId::letters: return letters_.occupied(h.index, h.generation);
      case StoreId::groups: return groups_.occupied(h.index, h.generation);
      case StoreId::descriptions:
        return descriptions_.occupied(h.index, h.generation);
      case StoreId::bonds: return bonds_.occupied(h.index, h.generation);
      case StoreId::correspondences:
        return correspondences_.occupied(h.index, h.generation);
      case StoreId::rules: return rules_.occupied(h.index, h.generation);
      case StoreId::replacements:
        return replacements_.occupied(h.index, h.generation);
    }
    return false;
  }

  const Letter& letter(Handle h) const { return typed<Letter>(h, StoreId::letters, letters_); }
  const Group& group(Handle h) const { return typed<Group>(h, StoreId::groups, groups_); }
  const Description& description(Handle h) const {
    return typed<Description>(h, StoreId::descriptions, descriptions_);
  }
  const Bond& bond(Handle h) const { return typed<Bond>(h, StoreId::bonds, bonds_); }
  const Correspondence& correspondence(Handle h) const {
    return typed<Correspondence>(h, StoreId::correspondences, correspondences_);
  }
  const Rule& rule(Handle h) const { return typed<Rule>(h, StoreId::rules, rules_); }
  const Replacement& replacement(Handle h) const {
    return typed<Replacement>(h, StoreId::replacements, replacements_);
  }

  /// Generic dereference; throws DanglingHandleError on tombstones.
  AnyStructure resolve(Handle h) const {
    switch (h.store) {
      case StoreId::letters: return letter(h);
      case StoreId::groups: return group(h);
      case StoreId::descriptions: return description(h);
      case StoreId::bonds: return bond(h);
      case StoreId::correspondences: return correspondence(h);
      case StoreId::rules: return rule(h);
      case StoreId::replacements: return replacement(h);
    }
    throw DanglingHandleError("dangling handle");
  }

  // -- structure bookkeeping ---------------------------------------------------

  Handle add(const AnyStructure& structure) {
    check_structure(structure);
    Handle h{store_of(structure), -1, 0};
    std::pair<int, int> slot{-1, 0};
    switch (h.store) {
      case StoreId::letters: slot = letters_.add(std::get<Letter>(structure)); break;
      case StoreId::groups: slot = groups_.add(std::get<Group>(structure)); break;
      case StoreId::descriptions:
        slot = descriptions_.add(std::get<Description>(structure));
        break;
      case StoreId::bonds: slot = bonds_.add(std::get<Bond>(structure)); break;
      case StoreId::correspondences:
        slot = correspondences_.add(std::get<Correspondence>(structure));
        break;
      case StoreId::rules: slot = rules_.add(std::get<Rule>(structure)); break;
      case StoreId::replacements:
        slot = replacements_.add(std::get<Replacement>(structure));
        break;
    }
    h.index = slot.first;
    h.generation = slot.second;
    if (observer_) observer_(StructureEvent::added, h);
    return h;
  }

  /// Removes a structure and everything that references it, transitively.
  void remove(Handle h) {
    if (!occupied(h)) throw DanglingHandleError("dangling handle");
    std::vector<Handle> pending{h};
    while (!pending.empty()) {
      Handle current = pending.back();
      pending.pop_back();
      if (!occupied(current)) continue;
      remove_slot(current);
      if (observer_) observer_(StructureEvent::removed, current);
      collect_dependents(current, pending);
    }
  }

  // -- queries -----------------------------------------------------------------

  /// Letters plus groups, in stable store order.
  std::vector<Handle> objects() const {
    std::vector<Handle> out;
    letters_.for_each([&](int i, const Letter&) {
      out.push_back({StoreId::letters, i, letters_.generation(i)});
    });
    groups_.for_each([&](int i, const Group&) {
      out.push_back({StoreId::groups, i, groups_.generation(i)});
    });
    return out;
  }

  std::vector<Handle> objects_of(StringId id) const {
    std::vector<Handle> out;
    letters_.for_each([&](int i, const Letter& l) {
      if (l.string_id == id)
        out.push_back({StoreId::letters, i, letters_.generation(i)});
    });
    groups_.for_each([&](int i, const Group& g) {
      if (g.string_id == id)
        out.push_back({StoreId::groups, i, groups_.generation(i)});
    });
    return out;
  }

  std::vector<Handle> letters_of(StringId id) const {
    std::vector<Handle> out;
    letters_.for_each([&](int i, const Letter& l) {
      if (l.string_id == id)
        out.push_back({StoreId::letters, i, letters_.generation(i)});
    });
    std::sort(out.begin(), out.end(), [&](Handle a, Handle b) {
      return letter(a).position < letter(b).position;
    });
    return out;
  }

  std::optional<Handle> letter_at(StringId id, int position) const {
    std::optional<Handle> found;
    letters_.for_each([&](int i, const Letter& l) {
      if (l.string_id == id && l.position == position && !found)
        found = Handle{StoreId::letters, i, letters_.generation(i)};
    });
    return found;
  }

  std::vector<Handle> descriptions_of(Handle object) const {
    std::vector<Handle> out;
    descriptions_.for_each([&](int i, const Description& d) {
      if (d.object == object)
        out.push_back({StoreId::descriptions, i, descriptions_.generation(i)});
    });
    return out;
  }

  std::vector<Handle> bonds_attached(Handle object) const {
    std::vector<Handle> out;
    bonds_.for_each([&](int i, const Bond& b) {
      if (b.from == object || b.to == object)
        out.push_back({StoreId::bonds, i, bonds_.generation(i)});
    });
    return out;
  }

  std::vector<Handle> all_of(StoreId store) const {
    std::vector<Handle> out;
    switch (store) {
      case StoreId::letters:
        letters_.for_each([&](int i, const auto&) {
          out.push_back({store, i, letters_.generation(i)});
        });
        break;
      case StoreId::groups:
        groups_.for_each([&](int i, const auto&) {
          out.push_back({store, i, groups_.generation(i)});
        });
        break;
      case StoreId::descriptions:
        descriptions_.for_each([&](int i, const auto&) {
          out.push_back({store, i, descriptions_.generation(i)});
        });
        break;
      case StoreId::bonds:
        bonds_.for_each([&](int i, const auto&) {
          out.push_back({store, i, bonds_.generation(i)});
        });
        break;
      case StoreId::correspondences:
        correspondences_.for_each([&](int i, const auto&) {
          out.push_back({store, i, correspondences_.generation(i)});
        });
        break;
      case StoreId::rules:
        rules_.for_each([&](int i, const auto&) {
          out.push_back({store, i, rules_.generation(i)});
        });
        break;
      case StoreId::replacements:
        replacements_.for_each([&](int i, const auto&) {
          out.push_back({store, i, replacements_.generation(i)});
        });
        break;
    }
    return out;
  }

  std::optional<Handle> correspondence_of(Handle object) const {
    std::optional<Handle> found;
    correspondences_.for_each([&](int i, const Correspondence& c) {
      if ((c.from == object || c.to == object) && !found)
        found = Handle{StoreId::correspondences, i,
                       correspondences_.generation(i)};
    });
    return found;
  }

  std::optional<Handle> installed_rule() const {
    std::optional<Handle> found;
    rules_.for_each([&](int i, const Rule&) {
      if (!found) found = Handle{StoreId::rules, i, rules_.generation(i)};
    });
    return found;
  }

  /// The positional description a group earns from its member span:
  /// whole-string groups read single, edge groups leftmost/rightmost,
  /// centered groups middle.
  std::optional<Description> group_position_description(Handle h) const {
    const Group& g = group(h);
    int len = static_cast<int>(text_of(g.string_id).size());
    int lo = letter(g.members.front()).position;
    int hi = letter(g.members.back()).position;
    Position p = Position::none;
    if (lo == 0 && hi == len - 1)
      p = Position::single;
    else if (lo == 0)
      p = Position::leftmost;
    else if (hi == len - 1)
      p = Position::rightmost;
    else if (len % 2 == 1 && lo + hi == len - 1)
      p = Position::middle;
    if (p == Position::none) return std::nullopt;
    return Description{nodes::string_position, std::string(to_string(p)), h};
  }

  /// The descriptions a letter ought to carry: its category, its object
  /// kind, and a string position when it has a special one.
  std::vector<Description> letter_descriptions(Handle h) const {
    const Letter& l = letter(h);
    int len = static_cast<int>(text_of(l.string_id).size());
    std::vector<Description> out;
    out.push_back({nodes::letter_category, std::string(1, l.glyph), h});
    out.push_back({nodes::object_category, nodes::letter, h});
    Position p = string_position(l.position, len);
    if (p != Position::none)
      out.push_back({nodes::string_position, std::string(to_string(p)), h});
    return out;
  }

  // -- evaluation ----------------------------------------------------------------

  ObjectMetrics object_metrics(const Slipnet& net, Handle obj) const {
    if (!occupied(obj)) throw DanglingHandleError("dangling handle");
    ObjectMetrics m;

    long strength_sum = 0;
    int attached = 0;
    bonds_.for_each([&](int, const Bond& b) {
      if (b.from == obj || b.to == obj) {
        strength_sum += strength(net, b);
        ++attached;
      }
    });
    groups_.for_each([&](int, const Group& g) {
      for (Handle member : g.members)
        if (member == obj) {
          strength_sum += strength(net, g);
          ++attached;
          break;
        }
    });
    correspondences_.for_each([&](int, const Correspondence& c) {
      if (c.from == obj || c.to == obj) {
        strength_sum += strength(net, c);
        ++attached;
      }
    });
    m.happiness = attached == 0 ? 0 : static_cast<int>(strength_sum / attached);

    long activation_sum = 0;
    int described = 0;
    descriptions_.for_each([&](int, const Description& d) {
      if (d.object == obj) {
        activation_sum += net.activation(d.descriptor);
        ++described;
      }
    });
    m.importance = described == 0 ? 0 : static_cast<int>(activation_sum / described);

    m.unhappiness = 100 - m.happiness;
    m.salience = (m.importance + m.unhappiness) / 2;
    return m;
  }

  // Strength of an installed structure or a proposal against the current
  // workspace. All formulas are integer-exact.
  int strength(const Slipnet& net, const AnyStructure& s) const {
    return std::visit([&](const auto& v) { return strength_impl(net, v); }, s);
  }
  int strength(const Slipnet& net, const Bond& b) const { return strength_impl(net, b); }
  int strength(const Slipnet& net, const Group& g) const { return strength_impl(net, g); }
  int strength(const Slipnet& net, const Correspondence& c) const {
    return strength_impl(net, c);
  }
  int strength(const Slipnet& net, const Rule& r) const { return strength_impl(net, r); }
  int strength(const Slipnet& net, const Description& d) const {
    return strength_impl(net, d);
  }

  /// True when the two structures cannot coexist on the blackboard.
  bool conflicts(const AnyStructure& a, const AnyStructure& b) const {
    if (const Bond* ba = std::get_if<Bond>(&a)) {
      const Bond* bb = std::get_if<Bond>(&b);
      if (!bb) return false;
      bool same_pair = (ba->from == bb->from && ba->to == bb->to) ||
                       (ba->from == bb->to && ba->to == bb->from);
      return same_pair && (ba->kind != bb->kind || ba->direction != bb->direction);
    }
    if (const Group* ga = std::get_if<Group>(&a)) {
      const Group* gb = std::get_if<Group>(&b);
      if (!gb) return false;
      for (Handle ma : ga->members)
        for (Handle mb : gb->members)
          if (ma == mb) return true;
      return false;
    }
    if (const Correspondence* ca = std::get_if<Correspondence>(&a)) {
      const Correspondence* cb = std::get_if<Correspondence>(&b);
      if (!cb) return false;
      return ca->from == cb->from || ca->to == cb->to;
    }
    if (std::holds_alternative<Rule>(a)) return std::holds_alternative<Rule>(b);
    return false;
  }

  /// Installed structures that conflict with a proposal.
  std::vector<Handle> find_conflicting(const AnyStructure& proposal) const {
    std::vector<Handle> out;
    bonds_.for_each([&](int i, const Bond& b) {
      if (conflicts(proposal, AnyStructure(b)))
        out.push_back({StoreId::bonds, i, bonds_.generation(i)});
    });
    groups_.for_each([&](int i, const Group& g) {
      if (conflicts(proposal, AnyStructure(g)))
        out.push_back({StoreId::groups, i, groups_.generation(i)});
    });
    correspondences_.for_each([&](int i, const Correspondence& c) {
      if (conflicts(proposal, AnyStructure(c)))
        out.push_back({StoreId::correspondences, i,
                       correspondences_.generation(i)});
    });
    rules_.for_each([&](int i, const Rule& r) {
      if (conflicts(proposal, AnyStructure(r)))
        out.push_back({StoreId::rules, i, rules_.generation(i)});
    });
    return out;
  }

  /// An already-installed twin of the proposal, if any. Sameness bonds
  /// match regardless of orientation.
  std::optional<Handle> find_identical(const AnyStructure& proposal) const {
    std::optional<Handle> found;
    if (const Bond* nb = std::get_if<Bond>(&proposal)) {
      bonds_.for_each([&](int i, const Bond& b) {
        if (found) return;
        bool same_pair = (b.from == nb->from && b.to == nb->to) ||
                         (b.from == nb->to && b.to == nb->from);
        if (same_pair && b.kind == nb->kind && b.direction == nb->direction)
          found = Handle{StoreId::bonds, i, bonds_.generation(i)};
      });
    } else if (const Group* ng = std::get_if<Group>(&proposal)) {
      groups_.for_each([&](int i, const Group& g) {
        if (!found && g == *ng)
          found = Handle{StoreId::groups, i, groups_.generation(i)};
      });
    } else if (const Description* nd = std::get_if<Description>(&proposal)) {
      descriptions_.for_each([&](int i, const Description& d) {
        if (!found && d == *nd)
          found = Handle{StoreId::descriptions, i, descriptions_.generation(i)};
      });
    } else if (const Correspondence* nc = std::get_if<Correspondence>(&proposal)) {
      correspondences_.for_each([&](int i, const Correspondence& c) {
        if (!found && c == *nc)
          found = Handle{StoreId::correspondences, i,
                         correspondences_.generation(i)};
      });
    } else if (const Rule* nr = std::get_if<Rule>(&proposal)) {
      rules_.for_each([&](int i, const Rule& r) {
        if (!found && r == *nr)
          found = Handle{StoreId::rules, i, rules_.generation(i)};
      });
    }
    return found;
  }

  /// Full-store consistency scan, used after builds in test mode.
  void check_invariants(const Slipnet* net = nullptr) const {
    auto check_ref = [&](Handle h) {
      if (!occupied(h)) throw InvariantError("occupied structure references a tombstone");
    };
    groups_.for_each([&](int, const Group& g) {
      for (Handle m : g.members) check_ref(m);
    });
    descriptions_.for_each([&](int, const Description& d) {
      check_ref(d.object);
      if (net && (!net->has_node(d.facet) || !net->has_node(d.descriptor)))
        throw InvariantError("description names unknown nodes");
    });
    bonds_.for_each([&](int, const Bond& b) {
      check_ref(b.from);
      check_ref(b.to);
    });
    correspondences_.for_each([&](int i, const Correspondence& c) {
      check_ref(c.from);
      check_ref(c.to);
      correspondences_.for_each([&](int j, const Correspondence& other) {
        if (i < j && (c.from == other.from || c.to == other.to))
          throw InvariantError("object carries two correspondences");
      });
    });
    replacements_.for_each([&](int, const Replacement& r) {
      check_ref(r.initial_obj);
      check_ref(r.modified_obj);
    });
    int rules = 0;
    rules_.for_each([&](int, const Rule&) { ++rules; });
    if (rules > 1) throw InvariantError("more than one rule installed");
  }

private:
  static constexpr int kPerceptionPost = 50;

  template <class T, class Store>
  const T& typed(Handle h, StoreId expected, const Store& store) const {
    if (h.store != expected) throw DanglingHandleError("handle addresses a different store");
    return store.get(h.index, h.generation);
  }

  void remove_slot(Handle h) {
    switch (h.store) {
      case StoreId::letters: letters_.remove(h.index); break;
      case StoreId::groups: groups_.remove(h.index); break;
      case StoreId::descriptions: descriptions_.remove(h.index); break;
      case StoreId::bonds: bonds_.remove(h.index); break;
      case StoreId::correspondences: correspondences_.remove(h.index); break;
      case StoreId::rules: rules_.remove(h.index); break;
      case StoreId::replacements: replacements_.remove(h.index); break;
    }
  }

  void collect_dependents(Handle removed, std::vector<Handle>& pending) const {
    descriptions_.for_each([&](int i, const Description& d) {
      if (d.object == removed)
        pending.push_back({StoreId::descriptions, i, descriptions_.generation(i)});
    });
    bonds_.for_each([&](int i, const Bond& b) {
      if (b.from == removed || b.to == removed)
        pending.push_back({StoreId::bonds, i, bonds_.generation(i)});
    });
    correspondences_.for_each([&](int i, const Correspondence& c) {
      if (c.from == removed || c.to == removed)
        pending.push_back({StoreId::correspondences, i,
                           correspondences_.generation(i)});
    });
    groups_.for_each([&](int i, const Group& g) {
      for (Handle m : g.members)
        if (m == removed) {
          pending.push_back({StoreId::groups, i, groups_.generation(i)});
          break;
        }
    });
    replacements_.for_each([&](int i, const Replacement& r) {
      if (r.initial_obj == removed || r.modified_obj == removed)
        pending.push_back({StoreId::replacements, i, replacements_.generation(i)});
    });
  }

  // -- add-time invariant checks ------------------------------------------------

  void check_structure(const AnyStructure& s) const {
    if (const Letter* l = std::get_if<Letter>(&s)) {
      if (l->glyph < 'a' || l->glyph > 'z')
        throw InvariantError("letter glyph must be a-z");
      if (l->position < 0 ||
          l->position >= static_cast<int>(text_of(l->string_id).size()))
        throw InvariantError("letter position outside its string");
    } else if (const Group* g = std::get_if<Group>(&s)) {
      if (g->members.size() < 2)
        throw InvariantError("group needs at least two members");
      int previous = -1;
      for (std::size_t i = 0; i < g->members.size(); ++i) {
        const Letter& member = letter(g->members[i]);
        if (member.string_id != g->string_id)
          throw InvariantError("group members must share the group's string");
        if (i > 0 && member.position != previous + 1)
          throw InvariantError("group members must be consecutive");
        previous = member.position;
      }
    } else if (const Description* d = std::get_if<Description>(&s)) {
      if (!occupied(d->object))
        throw InvariantError("description of an unoccupied object");
      if (d->facet.empty() || d->descriptor.empty())
        throw InvariantError("description facet and descriptor required");
    } else if (const Bond* b = std::get_if<Bond>(&s)) {
      check_bond(*b);
    } else if (const Correspondence* c = std::get_if<Correspondence>(&s)) {
      StringId from_string = object_string(c->from);
      StringId to_string = object_string(c->to);
      if (from_string != StringId::initial || to_string != StringId::target)
        throw InvariantError(
            "correspondence endpoints must span initial and target");
      if (correspondence_of(c->from) || correspondence_of(c->to))
        throw InvariantError("object already carries a correspondence");
    } else if (std::get_if<Rule>(&s)) {
      if (installed_rule()) throw InvariantError("a rule is already installed");
    } else if (const Replacement* r = std::get_if<Replacement>(&s)) {
      const Letter& from = letter(r->initial_obj);
      const Letter& to = letter(r->modified_obj);
      if (from.string_id != StringId::initial || to.string_id != StringId::modified ||
          from.position != to.position)
        throw InvariantError("replacement must align initial and modified letters");
    }
  }

  void check_bond(const Bond& b) const {
    if (b.from == b.to) throw InvariantError("bond endpoints must be distinct");
    const Letter& from = letter(b.from);
    const Letter& to = letter(b.to);
    if (from.string_id != to.string_id)
      throw InvariantError("bond endpoints must lie in the same string");
    int delta = to.position - from.position;
    if (delta != 1 && delta != -1)
      throw InvariantError("bond endpoints must be adjacent");
    if (b.direction == Direction::right && delta != 1)
      throw InvariantError("right bond must point right");
    if (b.direction == Direction::left && delta != -1)
      throw InvariantError("left bond must point left");
    if (b.kind.empty()) throw InvariantError("bond kind required");
  }

  StringId object_string(Handle h) const {
    if (h.store == StoreId::letters) return letter(h).string_id;
    if (h.store == StoreId::groups) return group(h).string_id;
    throw InvariantError("not an object handle");
  }

  // -- strength formulas ----------------------------------------------------------

  int strength_impl(const Slipnet& net, const Bond& b) const {
    const Letter& from = letter(b.from);
    const Letter& to = letter(b.to);
    int assoc = 0;
    if (b.kind == nodes::sameness) {
      assoc = from.glyph == to.glyph ? 100 : 0;
    } else {
      assoc = net.association_via(std::string(1, from.glyph),
                                  std::string(1, to.glyph), b.kind)
                  .value_or(0);
    }
    int len = static_cast<int>(text_of(from.string_id).size());
    if (len < 2) return 0;
    int count = 0;
    bonds_.for_each([&](int, const Bond& other) {
      if (other.kind != b.kind || other.direction != b.direction) return;
      if (letter(other.from).string_id != from.string_id) return;
      ++count;
    });
    if (!find_identical(AnyStructure(b))) ++count;  // a proposal counts itself
    long support_weighted = 400L * count;
    long assoc_weighted = 6L * assoc * (len - 1);
    return static_cast<int>((assoc_weighted + support_weighted) / (10L * (len - 1)));
  }

  int strength_impl(const Slipnet& net, const Group& g) const {
    int len = static_cast<int>(text_of(g.string_id).size());
    long bond_sum = 0;
    int bond_count = 0;
    for (std::size_t i = 0; i + 1 < g.members.size(); ++i) {
      Handle a = g.members[i];
      Handle b = g.members[i + 1];
      bonds_.for_each([&](int, const Bond& bond) {
        if ((bond.from == a && bond.to == b) || (bond.from == b && bond.to == a)) {
          bond_sum += strength_impl(net, bond);
          ++bond_count;
        }
      });
    }
    long members = static_cast<long>(g.members.size());
    if (bond_count == 0) return static_cast<int>(50 * members / len);
    // (mean bond strength + 100 * members / len) / 2, kept as exact rationals
    return static_cast<int>((bond_sum * len + 100 * members * bond_count) /
                            (2L * bond_count * len));
  }

  int strength_impl(const Slipnet& net, const Correspondence& c) const {
    if (c.mappings.empty()) return 0;
    long sum = 0;
    for (const ConceptMapping& m : c.mappings) {
      if (m.identity()) {
        sum += 100;
      } else {
        sum += net.degree_of_association(m.descriptor_from, m.descriptor_to,
                                         {LinkKind::slip})
                   .value_or(0);
      }
    }
    return static_cast<int>(sum / static_cast<long>(c.mappings.size()));
  }

  int strength_impl(const Slipnet& net, const Rule& r) const {
    if (r.transform.kind != Transform::Kind::relation) return 50;
    int depth_sum = net.depth(r.position_descriptor) + net.depth(r.transform.relation);
    return std::min(100, depth_sum / 2 + 20);
  }

  int strength_impl(const Slipnet& net, const Description& d) const {
    return net.depth(d.descriptor);
  }

  int strength_impl(const Slipnet&, const Letter&) const { return 100; }
  int strength_impl(const Slipnet&, const Replacement&) const { return 100; }

  std::string initial_;
  std::string modified_;
  std::string target_;
  std::optional<std::string> answer_;

  detail::SlotStore<Letter> letters_;
  detail::SlotStore<Group> groups_;
  detail::SlotStore<Description> descriptions_;
  detail::SlotStore<Bond> bonds_;
  detail::SlotStore<Correspondence> correspondences_;
  detail::SlotStore<Rule> rules_;
  detail::SlotStore<Replacement> replacements_;

  StructureObserver observer_;
};

}  // namespace copycat
