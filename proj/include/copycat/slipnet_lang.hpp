#pragma once

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "copycat/slipnet.hpp"

// Loader for the declarative network definition language: parenthesized
// prefix forms, ";" line comments, ".slip" files by convention. Loading is
// parse -> expand -> validate; every structural reference is checked before
// a Slipnet is handed out, so a running engine never sees a dangling name.

namespace copycat::lang {

struct SourceLocation {
  int line = 0;
  int column = 0;
};

enum class LoadPhase { parse, expand, validate };

inline std::string_view to_string(LoadPhase p) {
  switch (p) {
    case LoadPhase::parse: return "parse";
    case LoadPhase::expand: return "expand";
    case LoadPhase::validate: return "validate";
  }
  return "?";
}

class LoadError : public Error {
public:
  LoadError(LoadPhase phase, std::string message, SourceLocation location)
      : Error(std::move(message)), phase_(phase), location_(location) {}

  LoadPhase phase() const { return phase_; }
  SourceLocation location() const { return location_; }

  std::string full_message() const {
    std::ostringstream out;
    out << location_.line << ":" << location_.column << ": " << what();
    return out.str();
  }

private:
  LoadPhase phase_;
  SourceLocation location_;
};

// --- surface syntax -------------------------------------------------------

struct SExpr;

struct Symbol {
  std::string text;
  bool operator==(const Symbol&) const = default;
};

struct Integer {
  long value = 0;
  bool operator==(const Integer&) const = default;
};

struct SExpr {
  std::variant<Symbol, Integer, std::vector<SExpr>> value;
  SourceLocation location;
};

/// One top-level parenthesized form: a symbol head plus its arguments.
struct SourceForm {
  std::string head;
  std::vector<SExpr> args;
  SourceLocation location;
};

namespace detail {

class Reader {
public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SourceForm> read_all() {
    std::vector<SourceForm> forms;
    skip_blank();
    while (!at_end()) {
      SExpr expr = read_expr();
      auto* list = std::get_if<std::vector<SExpr>>(&expr.value);
      if (!list)
        throw LoadError(LoadPhase::parse, "expected a parenthesized form",
                        expr.location);
      if (list->empty())
        throw LoadError(LoadPhase::parse, "empty form", expr.location);
      auto* head = std::get_if<Symbol>(&(*list)[0].value);
      if (!head)
        throw LoadError(LoadPhase::parse, "form head must be a symbol",
                        (*list)[0].location);
      SourceForm form;
      form.head = head->text;
      form.location = expr.location;
      form.args.assign(list->begin() + 1, list->end());
      forms.push_back(std::move(form));
      skip_blank();
    }
    return forms;
  }

private:
  SExpr read_expr() {
    skip_blank();
    SourceLocation loc = here();
    if (at_end())
      throw LoadError(LoadPhase::parse, "unexpected end of input", loc);
    char c = peek();
    if (c == '(') {
      advance();
      std::vector<SExpr> items;
      for (;;) {
        skip_blank();
        if (at_end())
          throw LoadError(LoadPhase::parse, "unbalanced parenthesis", loc);
        if (peek() == ')') {
          advance();
          return {std::move(items), loc};
        }
        items.push_back(read_expr());
      }
    }
    if (c == ')')
      throw LoadError(LoadPhase::parse, "unbalanced parenthesis", loc);
    return read_atom();
  }

  SExpr read_atom() {
    SourceLocation loc = here();
    std::string text;
    while (!at_end() && !is_delimiter(peek())) {
      text.push_back(peek());
      advance();
    }
    if (text.empty())
      throw LoadError(LoadPhase::parse, "empty atom", loc);
    if (text == "-" || std::isdigit(static_cast<unsigned char>(text[0])) ||
        (text[0] == '-' && text.size() > 1 &&
         std::isdigit(static_cast<unsigned char>(text[1])))) {
      std::size_t pos = 0;
      long value = 0;
      try {
        value = std::stol(text, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != text.size())
        throw LoadError(LoadPhase::parse, "illegal atom: " + text, loc);
      return {Integer{value}, loc};
    }
    for (char ch : text) {
      if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' &&
          ch != '_')
        throw LoadError(LoadPhase::parse, "illegal atom: " + text, loc);
    }
    return {Symbol{std::move(text)}, loc};
  }

  static bool is_delimiter(char c) {
    return c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c));
  }

  void skip_blank() {
    while (!at_end()) {
      char c = peek();
      if (c == ';') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  SourceLocation here() const { return {line_, column_}; }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace detail

inline std::vector<SourceForm> parse(std::string_view text) {
  return detail::Reader(text).read_all();
}

// --- expansion ------------------------------------------------------------

struct NodeDecl {
  std::string name;
  int depth = 0;
  std::optional<int> intrinsic_label_length;
  SourceLocation location;
};

struct LinkDecl {
  std::string from;
  std::string to;
  std::string kind;
  std::optional<std::string> label;
  int length = 0;
  SourceLocation location;
};

/// Fully expanded definition: groups unrolled, constants substituted.
struct NetworkDef {
  std::unordered_map<std::string, long> values;
  std::unordered_map<std::string, std::vector<std::string>> identifier_sets;
  std::vector<NodeDecl> node_decls;
  std::vector<LinkDecl> link_decls;
};

namespace detail {

inline const Symbol& symbol_arg(const SourceForm& form, std::size_t i,
                                std::string_view what) {
  const SExpr& e = form.args[i];
  if (auto* s = std::get_if<Symbol>(&e.value)) return *s;
  throw LoadError(LoadPhase::expand,
                  std::string("expected a symbol for ") + std::string(what) +
                      " in (" + form.head + " ...)",
                  e.location);
}

inline long int_arg(const NetworkDef& def, const SourceForm& form,
                    std::size_t i, std::string_view what) {
  const SExpr& e = form.args[i];
  if (auto* n = std::get_if<Integer>(&e.value)) return n->value;
  if (auto* s = std::get_if<Symbol>(&e.value)) {
    auto it = def.values.find(s->text);
    if (it != def.values.end()) return it->second;
    throw LoadError(LoadPhase::expand, "undefined value: " + s->text,
                    e.location);
  }
  throw LoadError(LoadPhase::expand,
                  std::string("expected an integer for ") + std::string(what) +
                      " in (" + form.head + " ...)",
                  e.location);
}

inline void check_arity(const SourceForm& form, std::size_t lo, std::size_t hi) {
  if (form.args.size() < lo || form.args.size() > hi)
    throw LoadError(LoadPhase::expand,
                    "wrong number of arguments for (" + form.head + " ...)",
                    form.location);
}

inline const std::vector<std::string>& set_arg(const NetworkDef& def,
                                               const SourceForm& form,
                                               std::size_t i) {
  const Symbol& name = symbol_arg(form, i, "identifier set");
  auto it = def.identifier_sets.find(name.text);
  if (it == def.identifier_sets.end())
    throw LoadError(LoadPhase::expand,
                    "undefined identifier set: " + name.text,
                    form.args[i].location);
  return it->second;
}

}  // namespace detail

// Supported forms:
//   (define-value NAME INT)
//   (define-identifiers NAME (id ...))
//   (node NAME DEPTH [LABEL_LENGTH])
//   (link FROM TO [KIND [LABEL]] LENGTH)     kind defaults to lateral
//   (node-group SET DEPTH)
//   (links-group SET KIND LABEL LENGTH)      chains consecutive identifiers
// Integer positions also accept a defined constant name.
inline NetworkDef expand(const std::vector<SourceForm>& forms) {
  using detail::check_arity;
  using detail::int_arg;
  using detail::set_arg;
  using detail::symbol_arg;

  NetworkDef def;
  for (const SourceForm& form : forms) {
    if (form.head == "define-value") {
      check_arity(form, 2, 2);
      const Symbol& name = symbol_arg(form, 0, "value name");
      long value = int_arg(def, form, 1, "value");
      if (!def.values.emplace(name.text, value).second)
        throw LoadError(LoadPhase::expand, "duplicate definition: " + name.text,
                        form.location);
    } else if (form.head == "define-identifiers") {
      check_arity(form, 2, 2);
      const Symbol& name = symbol_arg(form, 0, "set name");
      auto* list = std::get_if<std::vector<SExpr>>(&form.args[1].value);
      if (!list)
        throw LoadError(LoadPhase::expand, "expected an identifier list",
                        form.args[1].location);
      std::vector<std::string> ids;
      for (const SExpr& e : *list) {
        auto* s = std::get_if<Symbol>(&e.value);
        if (!s)
          throw LoadError(LoadPhase::expand, "identifier sets hold symbols",
                          e.location);
        ids.push_back(s->text);
      }
      if (!def.identifier_sets.emplace(name.text, std::move(ids)).second)
        throw LoadError(LoadPhase::expand, "duplicate definition: " + name.text,
                        form.location);
    } else if (form.head == "node") {
      check_arity(form, 2, 3);
      NodeDecl decl;
      decl.name = symbol_arg(form, 0, "node name").text;
      decl.depth = static_cast<int>(int_arg(def, form, 1, "depth"));
      if (form.args.size() == 3)
        decl.intrinsic_label_length =
            static_cast<int>(int_arg(def, form, 2, "label length"));
      decl.location = form.location;
      def.node_decls.push_back(std::move(decl));
    } else if (form.head == "link") {
      check_arity(form, 3, 5);
      LinkDecl decl;
      decl.from = symbol_arg(form, 0, "link source").text;
      decl.to = symbol_arg(form, 1, "link target").text;
      decl.kind = "lateral";
      if (form.args.size() >= 4) decl.kind = symbol_arg(form, 2, "link kind").text;
      if (form.args.size() == 5)
        decl.label = symbol_arg(form, 3, "link label").text;
      decl.length = static_cast<int>(
          int_arg(def, form, form.args.size() - 1, "link length"));
      decl.location = form.location;
      def.link_decls.push_back(std::move(decl));
    } else if (form.head == "node-group") {
      check_arity(form, 2, 2);
      const auto& ids = set_arg(def, form, 0);
      int depth = static_cast<int>(int_arg(def, form, 1, "depth"));
      for (const std::string& id : ids)
        def.node_decls.push_back({id, depth, std::nullopt, form.location});
    } else if (form.head == "links-group") {
      check_arity(form, 4, 4);
      const auto& ids = set_arg(def, form, 0);
      std::string kind = symbol_arg(form, 1, "link kind").text;
      std::string label = symbol_arg(form, 2, "link label").text;
      int length = static_cast<int>(int_arg(def, form, 3, "link length"));
      for (std::size_t i = 0; i + 1 < ids.size(); ++i)
        def.link_decls.push_back(
            {ids[i], ids[i + 1], kind, label, length, form.location});
    } else {
      throw LoadError(LoadPhase::expand, "unsupported form: " + form.head,
                      form.location);
    }
  }
  return def;
}

// --- validation -----------------------------------------------------------

/// Reference-checks an expanded definition and builds the network. All
/// activations start at zero.
inline Slipnet validate(const NetworkDef& def) {
  Slipnet net;
  for (const NodeDecl& decl : def.node_decls) {
    if (net.has_node(decl.name))
      throw LoadError(LoadPhase::validate,
                      "node: duplicate definition: " + decl.name, decl.location);
    if (decl.depth < 0 || decl.depth > 100)
      throw LoadError(LoadPhase::validate, "value out of range", decl.location);
    if (decl.intrinsic_label_length &&
        (*decl.intrinsic_label_length < 0 || *decl.intrinsic_label_length > 100))
      throw LoadError(LoadPhase::validate, "value out of range", decl.location);
    net.add_node({decl.name, decl.depth, 0, 0, decl.intrinsic_label_length});
  }
  for (const LinkDecl& decl : def.link_decls) {
    for (const std::string* name : {&decl.from, &decl.to}) {
      if (!net.has_node(*name))
        throw LoadError(LoadPhase::validate, "link: undefined node: " + *name,
                        decl.location);
    }
    if (decl.label && !net.has_node(*decl.label))
      throw LoadError(LoadPhase::validate, "link: undefined node: " + *decl.label,
                      decl.location);
    auto kind = link_kind_from(decl.kind);
    if (!kind)
      throw LoadError(LoadPhase::validate, "link: unknown kind: " + decl.kind,
                      decl.location);
    if (decl.length < 0 || decl.length > 100)
      throw LoadError(LoadPhase::validate, "value out of range", decl.location);
    try {
      net.add_link({decl.from, decl.to, *kind, decl.label, decl.length});
    } catch (const Error& e) {
      throw LoadError(LoadPhase::validate, e.what(), decl.location);
    }
  }
  return net;
}

inline Slipnet load(std::string_view text) { return validate(expand(parse(text))); }

inline Slipnet load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open slipnet file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load(buffer.str());
}

/// Writes an expanded definition back to surface syntax. Reloading the
/// result reproduces the same network.
inline std::string emit(const NetworkDef& def) {
  std::ostringstream out;
  for (const NodeDecl& n : def.node_decls) {
    out << "(node " << n.name << " " << n.depth;
    if (n.intrinsic_label_length) out << " " << *n.intrinsic_label_length;
    out << ")\n";
  }
  for (const LinkDecl& l : def.link_decls) {
    out << "(link " << l.from << " " << l.to << " " << l.kind;
    if (l.label) out << " " << *l.label;
    out << " " << l.length << ")\n";
  }
  return out.str();
}

// --- default network ------------------------------------------------------

/// The concept network the engine ships with: the alphabet, the small
/// numbers, relations, positions, and the category scaffolding.
inline std::string_view default_source() {
  static const std::string_view text = R"slip(; Default concept network.
; Letters are shallow surface symbols; relations and categories sit deeper.

(define-value ALPHABET_NODE_DEPTH 10)
(define-value NUMBER_NODE_DEPTH 30)
(define-value RELATION_NODE_DEPTH 50)
(define-value RELATION_LINK_LENGTH 60)
(define-value OPPOSITE_LINK_LENGTH 80)
(define-value CATEGORY_LINK_LENGTH 50)

(define-identifiers ALPHABET (a b c d e f g h i j k l m n o p q r s t u v w x y z))
(define-identifiers ALPHABET_REVERSED (z y x w v u t s r q p o n m l k j i h g f e d c b a))
(define-identifiers NUMBERS (one two three four five))
(define-identifiers NUMBERS_REVERSED (five four three two one))

(node-group ALPHABET ALPHABET_NODE_DEPTH)
(node-group NUMBERS NUMBER_NODE_DEPTH)

(node successor RELATION_NODE_DEPTH RELATION_LINK_LENGTH)
(node predecessor RELATION_NODE_DEPTH RELATION_LINK_LENGTH)
(node sameness 35)
(node length 60)
(node string-position 70)
(node leftmost 40)
(node rightmost 40)
(node middle 40)
(node single 40)
(node letter-category 30)
(node object-category 20)
(node letter 20)
(node group 40)
(node successor-group 50)
(node predecessor-group 50)
(node sameness-group 50)
(node identity 90)
(node opposite 90)
(node direction-left 40)
(node direction-right 40)

; Successor/predecessor chains over the alphabet and the numbers.
(links-group ALPHABET lateral successor RELATION_LINK_LENGTH)
(links-group ALPHABET_REVERSED lateral predecessor RELATION_LINK_LENGTH)
(links-group NUMBERS lateral successor RELATION_LINK_LENGTH)
(links-group NUMBERS_REVERSED lateral predecessor RELATION_LINK_LENGTH)

; Conceptual slippages, all labeled by opposite.
(link leftmost rightmost slip opposite OPPOSITE_LINK_LENGTH)
(link rightmost leftmost slip opposite OPPOSITE_LINK_LENGTH)
(link successor predecessor slip opposite OPPOSITE_LINK_LENGTH)
(link predecessor successor slip opposite OPPOSITE_LINK_LENGTH)
(link direction-left direction-right slip opposite OPPOSITE_LINK_LENGTH)
(link direction-right direction-left slip opposite OPPOSITE_LINK_LENGTH)

; Category membership.
(link a letter-category category CATEGORY_LINK_LENGTH)
(link b letter-category category CATEGORY_LINK_LENGTH)
(link c letter-category category CATEGORY_LINK_LENGTH)
(link d letter-category category CATEGORY_LINK_LENGTH)
(link e letter-category category CATEGORY_LINK_LENGTH)
(link f letter-category category CATEGORY_LINK_LENGTH)
(link g letter-category category CATEGORY_LINK_LENGTH)
(link h letter-category category CATEGORY_LINK_LENGTH)
(link i letter-category category CATEGORY_LINK_LENGTH)
(link j letter-category category CATEGORY_LINK_LENGTH)
(link k letter-category category CATEGORY_LINK_LENGTH)
(link l letter-category category CATEGORY_LINK_LENGTH)
(link m letter-category category CATEGORY_LINK_LENGTH)
(link n letter-category category CATEGORY_LINK_LENGTH)
(link o letter-category category CATEGORY_LINK_LENGTH)
(link p letter-category category CATEGORY_LINK_LENGTH)
(link q letter-category category CATEGORY_LINK_LENGTH)
(link r letter-category category CATEGORY_LINK_LENGTH)
(link s letter-category category CATEGORY_LINK_LENGTH)
(link t letter-category category CATEGORY_LINK_LENGTH)
(link u letter-category category CATEGORY_LINK_LENGTH)
(link v letter-category category CATEGORY_LINK_LENGTH)
(link w letter-category category CATEGORY_LINK_LENGTH)
(link x letter-category category CATEGORY_LINK_LENGTH)
(link y letter-category category CATEGORY_LINK_LENGTH)
(link z letter-category category CATEGORY_LINK_LENGTH)
(link one length category CATEGORY_LINK_LENGTH)
(link two length category CATEGORY_LINK_LENGTH)
(link three length category CATEGORY_LINK_LENGTH)
(link four length category CATEGORY_LINK_LENGTH)
(link five length category CATEGORY_LINK_LENGTH)
(link letter object-category category CATEGORY_LINK_LENGTH)
(link group object-category category CATEGORY_LINK_LENGTH)
(link object-category letter instance CATEGORY_LINK_LENGTH)
(link object-category group instance CATEGORY_LINK_LENGTH)
(link successor-group group category CATEGORY_LINK_LENGTH)
(link predecessor-group group category CATEGORY_LINK_LENGTH)
(link sameness-group group category CATEGORY_LINK_LENGTH)
)slip";
  return text;
}

inline const Slipnet& default_network() {
  static const Slipnet net = load(default_source());
  return net;
}

}  // namespace copycat::lang
