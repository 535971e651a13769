#pragma once

#include <algorithm>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "copycat/core.hpp"

namespace copycat {

enum class LinkKind { lateral, slip, category, instance };

inline std::string_view to_string(LinkKind k) {
  switch (k) {
    case LinkKind::lateral: return "lateral";
    case LinkKind::slip: return "slip";
    case LinkKind::category: return "category";
    case LinkKind::instance: return "instance";
  }
  return "?";
}

inline std::optional<LinkKind> link_kind_from(std::string_view s) {
  if (s == "lateral") return LinkKind::lateral;
  if (s == "slip") return LinkKind::slip;
  if (s == "category") return LinkKind::category;
  if (s == "instance") return LinkKind::instance;
  return std::nullopt;
}

/// A platonic concept. Depth is fixed at load time; activation moves in
/// [0,100]; posted activation waits in the buffer until the next step.
struct ConceptNode {
  std::string name;
  int depth = 0;
  int activation = 0;
  int buffer = 0;
  std::optional<int> intrinsic_label_length;

  bool operator==(const ConceptNode&) const = default;
};

struct ConceptLink {
  std::string from;
  std::string to;
  LinkKind kind = LinkKind::lateral;
  std::optional<std::string> label;
  int intrinsic_length = 0;

  bool operator==(const ConceptLink&) const = default;
};

// The concept network. Node activations are integers so runs replay
// bit-exactly from a seed. Nodes and links keep declaration order; name
// lookups go through a side index that never drives iteration.
class Slipnet {
public:
  int add_node(ConceptNode node) {
    if (index_.contains(node.name))
      throw Error("node: duplicate definition: " + node.name);
    int id = static_cast<int>(nodes_.size());
    index_.emplace(node.name, id);
    nodes_.push_back(std::move(node));
    outgoing_.emplace_back();
    return id;
  }

  int add_link(ConceptLink link) {
    int from = require(link.from);
    require(link.to);
    if (link.label) require(*link.label);
    for (int li : outgoing_[from]) {
      const ConceptLink& other = links_[li];
      if (other.to == link.to && other.kind == link.kind)
        throw Error("link: duplicate definition: " + link.from + " " + link.to);
    }
    int id = static_cast<int>(links_.size());
    links_.push_back(std::move(link));
    outgoing_[from].push_back(id);
    return id;
  }

  bool has_node(std::string_view name) const {
    return index_.contains(std::string(name));
  }

  const ConceptNode& node(const std::string& name) const {
    return nodes_[require(name)];
  }

  int activation(const std::string& name) const { return node(name).activation; }
  int depth(const std::string& name) const { return node(name).depth; }

  void set_activation(const std::string& name, int value) {
    nodes_[require(name)].activation = clamp_percent(value);
  }

  void reset_activations() {
    for (ConceptNode& n : nodes_) {
      n.activation = 0;
      n.buffer = 0;
    }
  }

  /// Queue activation for a node; it lands at the next step.
  void post_activation(const std::string& name, int amount) {
    if (amount < 0) throw Error("post_activation: negative amount");
    nodes_[require(name)].buffer += amount;
  }

  // One update step: decay, apply buffered activation, discontinuous
  // promotion, then spreading from fully active nodes into buffers (so a
  // step never depends on node order).
  void step() {
    for (ConceptNode& n : nodes_) {
      n.activation = n.activation * n.depth / 100;
      n.activation = std::min(100, n.activation + n.buffer);
      n.buffer = 0;
      if (n.activation > 50) n.activation = 100;
    }
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
      if (nodes_[id].activation != 100) continue;
      for (int li : outgoing_[id]) {
        const ConceptLink& link = links_[li];
        nodes_[require(link.to)].buffer += (100 - effective_length(link)) / 5;
      }
    }
  }

  /// Link length after label shrinkage: an active label pulls the
  /// endpoints conceptually closer.
  int effective_length(const ConceptLink& link) const {
    if (!link.label) return link.intrinsic_length;
    int label_activation = node(*link.label).activation;
    return link.intrinsic_length * (100 - label_activation) / 100;
  }

  /// 100 minus the shortest qualifying link length, or absent when no link
  /// of an allowed kind connects the two nodes. Identity is 100.
  std::optional<int> degree_of_association(const std::string& from,
                                           const std::string& to,
                                           std::initializer_list<LinkKind> kinds) const {
    int from_id = require(from);
    require(to);
    if (from == to) return 100;
    std::optional<int> shortest;
    for (int li : outgoing_[from_id]) {
      const ConceptLink& link = links_[li];
      if (link.to != to) continue;
      if (std::find(kinds.begin(), kinds.end(), link.kind) == kinds.end()) continue;
      int len = effective_length(link);
      if (!shortest || len < *shortest) shortest = len;
    }
    if (!shortest) return std::nullopt;
    return 100 - *shortest;
  }

  /// Shortest labeled lateral link from -> to, as (label, association).
  /// This is how a bond relation between two letter categories gets named.
  std::optional<std::pair<std::string, int>> lateral_relation(
      const std::string& from, const std::string& to) const {
    int from_id = require(from);
    require(to);
    std::optional<int> shortest;
    const std::string* label = nullptr;
    for (int li : outgoing_[from_id]) {
      const ConceptLink& link = links_[li];
      if (link.to != to || link.kind != LinkKind::lateral || !link.label) continue;
      int len = effective_length(link);
      if (!shortest || len < *shortest) {
        shortest = len;
        label = &*link.label;
      }
    }
    if (!label) return std::nullopt;
    return std::make_pair(*label, 100 - *shortest);
  }

  /// Association through lateral links carrying a specific label.
  std::optional<int> association_via(const std::string& from, const std::string& to,
                                     const std::string& label) const {
    int from_id = require(from);
    require(to);
    std::optional<int> shortest;
    for (int li : outgoing_[from_id]) {
      const ConceptLink& link = links_[li];
      if (link.to != to || link.kind != LinkKind::lateral) continue;
      if (!link.label || *link.label != label) continue;
      int len = effective_length(link);
      if (!shortest || len < *shortest) shortest = len;
    }
    if (!shortest) return std::nullopt;
    return 100 - *shortest;
  }

  std::span<const ConceptNode> nodes() const { return nodes_; }
  std::span<const ConceptLink> links() const { return links_; }

  std::span<const int> outgoing(const std::string& name) const {
    return outgoing_[require(name)];
  }

  const ConceptLink& link(int id) const { return links_[id]; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t link_count() const { return links_.size(); }

  bool operator==(const Slipnet& other) const {
    return nodes_ == other.nodes_ && links_ == other.links_;
  }

private:
  int require(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw LookupError(name);
    return it->second;
  }

  std::vector<ConceptNode> nodes_;
  std::vector<ConceptLink> links_;
  std::vector<std::vector<int>> outgoing_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace copycat
