#include <cmath>
#include <map>

#include <catch2/catch_amalgamated.hpp>

#include "copycat/codelets.hpp"
#include "copycat/slipnet_lang.hpp"

using namespace copycat;

namespace {

Slipnet default_net_copy() { return lang::load(lang::default_source()); }

}  // namespace

TEST_CASE("number descriptors test group length", "[codelets]") {
  Slipnet net = default_net_copy();
  Workspace ws = Workspace::init("jj", "jj", "kk", net);
  Handle j0 = *ws.letter_at(StringId::initial, 0);
  Handle j1 = *ws.letter_at(StringId::initial, 1);
  Handle group = ws.add(Group{"sameness-group", {j0, j1}, Direction::none,
                              StringId::initial});

  CHECK(descriptor_applies(ws, "two", group));
  CHECK_FALSE(descriptor_applies(ws, "two", j0));
  CHECK_FALSE(descriptor_applies(ws, "three", group));
  CHECK_THROWS_WITH(descriptor_applies(ws, "banana", group),
                    "unsupported descriptor: banana");
}

TEST_CASE("bond scouts propose adjacent relations", "[codelets]") {
  Slipnet net = default_net_copy();
  Workspace ws = Workspace::init("abc", "abd", "ijk", net);
  Rng rng(1);

  bool saw_ab_successor = false;
  for (int i = 0; i < 300; ++i) {
    auto codelet = scout_bond(net, ws, 100, rng);
    if (!codelet) continue;
    REQUIRE(codelet->kind == CodeletKind::strength_tester);
    REQUIRE(codelet->proposal);
    const Bond& bond = std::get<Bond>(codelet->proposal->structure);
    const Letter& from = ws.letter(bond.from);
    const Letter& to = ws.letter(bond.to);
    // Endpoints always adjacent and in the same string.
    CHECK(from.string_id == to.string_id);
    CHECK(std::abs(from.position - to.position) == 1);
    CHECK((bond.kind == "successor" || bond.kind == "predecessor"));
    if (bond.kind == "successor" && from.glyph == 'a' && to.glyph == 'b') {
      CHECK(bond.direction == Direction::right);
      // Urgency: relation inactive, so max(1, 0, 40/2) = 20.
      CHECK(codelet->urgency == 20);
      saw_ab_successor = true;
    }
  }
  CHECK(saw_ab_successor);
}

TEST_CASE("bond scouts see sameness between equal glyphs", "[codelets]") {
  Slipnet net = default_net_copy();
  Workspace ws = Workspace::init("jj", "jj", "kk", net);
  Rng rng(2);
  int proposals = 0;
  for (int i = 0; i < 100; ++i) {
    auto codelet = scout_bond(net, ws, 100, rng);
    if (!codelet) continue;
    ++proposals;
    const Bond& bond = std::get<Bond>(codelet->proposal->structure);
    CHECK(bond.kind == "sameness");
    CHECK(bond.direction == Direction::none);
    // Urgency: max(1, activation(sameness)=0, 100/2).
    CHECK(codelet->urgency == 50);
  }
  CHECK(proposals == 100);  // equal neighbors always relate
}

TEST_CASE("bond scouts fizzle without a possible partner", "[codelets]") {
  Slipnet net = default_net_copy();
  Workspace ws = Workspace::init("a", "a", "q", net);
  Rng rng(3);
  for (int i = 0; i < 50; ++i) CHECK_FALSE(scout_bond(net, ws, 100, rng));
}

TEST_CASE("strength tester extremes", "[codelets]") {
  Slipnet net = default_net_copy();
  Workspace ws = Workspace::init("abc", "abd", "ijk", net);
  Handle a = *ws.letter_at(StringId::initial, 0);
  Handle i = *ws.letter_at(StringId::target, 0);
  Rng rng(4);

  // Identity correspondence: strength 100, always passes, urgency = 100.
  Correspondence sure{a, i, {{"string-position", "leftmost", "leftmost"}}};
  for (int t = 0; t < 50; ++t) {
    auto builder = test_strength(net, ws, Proposal{sure, 0}, 50, rng);
    REQUIRE(builder);
    CHECK(builder->kind == CodeletKind::builder);
    CHECK(builder->urgency == 100);
    CHECK(builder->proposal->strength == 100);
  }

  // Strength 0 never passes.
  Correspondence hopeless{a, i, {{"letter-category", "a", "i"}}};
  for (int t = 0; t < 50; ++t)
    CHECK_FALSE(test_strength(net, ws, Proposal{hopeless, 0}, 50, rng));
}

TEST_CASE("strength tester passes at the warped rate", "[codelets]") {
  // Strength 60 at T=50 passes with 0.6^3/(0.6^3+0.4^3) = 0.7714...
  Slipnet net = default_net_copy();
  Workspace ws = Workspace::init("abc", "abd", "ijk", net);
  Handle a = *ws.letter_at(StringId::initial, 0);
  // Descriptor depth is the description's strength; "length" sits at 60.
  Description d{"letter-category", "length", a};
  REQUIRE(ws.strength(net, d) == 60);

  Rng rng(5);
  int passed = 0;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t)
    if (test_strength(net, ws, Proposal{d, 0}, 50, rng)) ++passed;
  double expected = std::pow(0.6, 3) / (std::pow(0.6, 3) + std::pow(0.4, 3));
  CHECK(std::abs(static_cast<double>(passed) / trials - expected) < 0.01);
}

TEST_CASE("builders install unopposed structures and post activation",
          "[codelets]") {
  Slipnet net = default_net_copy();
  Workspace ws = Workspace::init("abc", "abd", "ijk", net);
  Handle a = *ws.letter_at(StringId::initial, 0);
  Handle b = *ws.letter_at(StringId::initial, 1);
  Rng rng(6);

  Bond bond{"successor", a, b, Direction::right};
  BuildResult result = build_with_fight(net, ws, Proposal{bond, 44}, 100, rng);
  CHECK(result.outcome == Outcome::built);
  REQUIRE(result.handle);
  CHECK(ws.bond(*result.handle) == bond);
  CHECK(net.node("successor").buffer >= 50);

  // Identical proposal fizzles rather than duplicating.
  CHECK(build_with_fight(net, ws, Proposal{bond, 44}, 100, rng).outcome ==
        Outcome::fizzled);
}

TEST_CASE("equal-strength duels are even", "[codelets]") {
  Slipnet net = default_net_copy();
  Rng rng(7);
  int wins = 0;
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    Workspace ws = Workspace::init("abc", "abd", "ijk", net);
    Handle a = *ws.letter_at(StringId::initial, 0);
    Handle b = *ws.letter_at(StringId::initial, 1);
    ws.add(Bond{"successor", a, b, Direction::right});
    // The reverse reading of the same pair: same strength, conflicting.
    Bond rival{"predecessor", b, a, Direction::left};
    BuildResult result = build_with_fight(net, ws, Proposal{rival, 0}, 100, rng);
    REQUIRE((result.outcome == Outcome::built || result.outcome == Outcome::lost));
    if (result.outcome == Outcome::built) ++wins;
  }
  CHECK(std::abs(static_cast<double>(wins) / trials - 0.5) < 0.02);
}

TEST_CASE("duels follow the warped strength share", "[codelets]") {
  // Challenger 80 vs incumbent 20 at T=100 wins 80% of duels.
  Slipnet net;
  net.add_node({"a", 10, 0, 0, std::nullopt});
  net.add_node({"b", 10, 0, 0, std::nullopt});
  net.add_node({"k", 10, 0, 0, std::nullopt});
  net.add_node({"string-position", 70, 0, 0, std::nullopt});
  net.add_node({"letter-category", 30, 0, 0, std::nullopt});
  net.add_node({"object-category", 20, 0, 0, std::nullopt});
  net.add_node({"letter", 20, 0, 0, std::nullopt});
  net.add_node({"leftmost", 40, 0, 0, std::nullopt});
  net.add_node({"rightmost", 40, 0, 0, std::nullopt});
  net.add_node({"middle", 40, 0, 0, std::nullopt});
  net.add_node({"single", 40, 0, 0, std::nullopt});
  net.add_node({"deep", 80, 0, 0, std::nullopt});   // (40+80)/2+20 = 80
  net.add_node({"shallow", 0, 0, 0, std::nullopt});
  net.add_node({"zero", 0, 0, 0, std::nullopt});    // (0+0)/2+20 = 20

  Rng rng(8);
  int wins = 0;
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    Workspace ws = Workspace::init("ab", "ab", "k", net);
    ws.add(Rule{"string-position", "zero", Transform::make_relation("shallow")});
    Rule challenger{"string-position", "rightmost", Transform::make_relation("deep")};
    REQUIRE(ws.strength(net, challenger) == 80);
    BuildResult result =
        build_with_fight(net, ws, Proposal{challenger, 80}, 100, rng);
    if (result.outcome == Outcome::built) {
      ++wins;
      // The loser is gone; exactly one rule remains.
      CHECK(ws.all_of(StoreId::rules).size() == 1);
    }
  }
  CHECK(std::abs(static_cast<double>(wins) / trials - 0.8) < 0.02);
}

TEST_CASE("group scouts grow maximal runs", "[codelets]") {
  Slipnet net = default_net_copy();
  Workspace ws = Workspace::init("abc", "abd", "ijk", net);
  Handle a = *ws.letter_at(StringId::initial, 0);
  Handle b = *ws.letter_at(StringId::initial, 1);
  Handle c = *ws.letter_at(StringId::initial, 2);
  ws.add(Bond{"successor", a, b, Direction::right});
  ws.add(Bond{"successor", b, c, Direction::right});
  Rng rng(9);

  auto codelet = scout_group(net, ws, 100, rng);
  REQUIRE(codelet);
  const Group& group = std::get<Group>(codelet->proposal->structure);
  CHECK(group.kind == "successor-group");
  CHECK(group.direction == Direction::right);
  REQUIRE(group.members.size() == 3);
  CHECK(ws.letter(group.members[0]).glyph == 'a');
  CHECK(ws.letter(group.members[2]).glyph == 'c');
}

TEST_CASE("a single sameness bond seeds a pair group", "[codelets]") {
  Slipnet net = default_net_copy();
  Workspace ws = Workspace::init("jj", "jj", "kk", net);
  Handle j0 = *ws.letter_at(StringId::initial, 0);
  Handle j1 = *ws.letter_at(StringId::initial, 1);
  ws.add(Bond{"sameness", j0, j1, Direction::none});
  Rng rng(10);

  auto codelet = scout_group(net, ws, 100, rng);
  REQUIRE(codelet);
  const Group& group = std::get<Group>(codelet->proposal->structure);
  CHECK(group.kind == "sameness-group");
  CHECK(group.members.size() == 2);
}

TEST_CASE("group scouts fizzle without bonds", "[codelets]") {
  Slipnet net = default_net_copy();
  Workspace ws = Workspace::init("abc", "abd", "ijk", net);
  Rng rng(11);
  CHECK_FALSE(scout_group(net, ws, 100, rng));
}

TEST_CASE("description scouts need the length concept hot", "[codelets]") {
  Slipnet net = default_net_copy();
  Workspace ws = Workspace::init("jj", "jj", "kk", net);
  Handle j0 = *ws.letter_at(StringId::initial, 0);
  Handle j1 = *ws.letter_at(StringId::initial, 1);
  Handle group = ws.add(Group{"sameness-group", {j0, j1}, Direction::none,
                              StringId::initial});
  Rng rng(12);

  // Gate closed: length inactive.
  net.set_activation("two", 100);
  for (int i = 0; i < 50; ++i) CHECK_FALSE(scout_description(net, ws, 100, rng));

  // Gate open but number node not fully active.
  net.set_activation("length", 100);
  net.set_activation("two", 99);
  for (int i = 0; i < 50; ++i) CHECK_FALSE(scout_description(net, ws, 100, rng));

  net.set_activation("two", 100);
  bool saw_length_two = false;
  for (int i = 0; i < 200 && !saw_length_two; ++i) {
    auto codelet = scout_description(net, ws, 100, rng);
    if (!codelet) continue;
    const Description& d = std::get<Description>(codelet->proposal->structure);
    CHECK(d.facet == "length");
    CHECK(d.descriptor == "two");
    CHECK(d.object == group);
    CHECK(codelet->urgency == 30);  // depth of the number node
    saw_length_two = true;
  }
  CHECK(saw_length_two);
}

TEST_CASE("letters never take number descriptions", "[codelets]") {
  Slipnet net = default_net_copy();
  Workspace ws = Workspace::init("abc", "abd", "ijk", net);
  net.set_activation("length", 100);
  for (const char* number : {"one", "two", "three", "four", "five"})
    net.set_activation(number, 100);
  Rng rng(13);
  for (int i = 0; i < 100; ++i) CHECK_FALSE(scout_description(net, ws, 100, rng));
}

TEST_CASE("correspondence scouts anchor on position or category", "[codelets]") {
  Slipnet net = default_net_copy();
  Workspace ws = Workspace::init("abc", "abd", "ijk", net);
  Rng rng(14);

  bool saw_leftmost_identity = false;
  for (int i = 0; i < 400; ++i) {
    auto codelet = scout_correspondence(net, ws, 100, rng);
    if (!codelet) continue;
    const Correspondence& c = std::get<Correspondence>(codelet->proposal->structure);
    CHECK(ws.letter(c.from).string_id == StringId::initial);
    CHECK(ws.letter(c.to).string_id == StringId::target);
    bool anchored = false;
    for (const ConceptMapping& m : c.mappings) {
      if (m.facet == "string-position" || m.facet == "letter-category")
        anchored = true;
      if (!m.identity()) {
        // Slippages only ride slip links.
        CHECK(net.degree_of_association(m.descriptor_from, m.descriptor_to,
                                        {LinkKind::slip}));
      }
    }
    CHECK(anchored);
    if (ws.letter(c.from).glyph == 'a' && ws.letter(c.to).glyph == 'i') {
      for (const ConceptMapping& m : c.mappings)
        if (m.facet == "string-position" && m.identity() &&
            m.descriptor_from == "leftmost")
          saw_leftmost_identity = true;
    }
  }
  CHECK(saw_leftmost_identity);
}

TEST_CASE("correspondence scouts fizzle without an anchor", "[codelets]") {
  Slipnet net = default_net_copy();
  Workspace ws = Workspace::init("bb", "bb", "kk", net);
  // Strip string positions; only object-category identity remains, which
  // cannot anchor a correspondence.
  for (Handle h : ws.all_of(StoreId::descriptions))
    if (ws.description(h).facet == "string-position") ws.remove(h);
  Rng rng(15);
  for (int i = 0; i < 200; ++i)
    CHECK_FALSE(scout_correspondence(net, ws, 100, rng));
}

TEST_CASE("rule scouts prefer deep descriptors when cold", "[codelets]") {
  Slipnet net = default_net_copy();
  Workspace ws = Workspace::init("abc", "abd", "ijk", net);
  Rng rng(16);

  std::map<std::string, int> seen;
  for (int i = 0; i < 300; ++i) {
    auto codelet = scout_rule(net, ws, 0, rng);
    REQUIRE(codelet);
    const Rule& rule = std::get<Rule>(codelet->proposal->structure);
    ++seen[rule.position_facet + "/" + rule.position_descriptor + "/" +
           (rule.transform.kind == Transform::Kind::relation
                ? rule.transform.relation
                : std::string(1, rule.transform.glyph))];
  }
  // At T=0 the deep reading dominates.
  CHECK(seen["string-position/rightmost/successor"] > 150);
}

TEST_CASE("rule scouts keep the literal reading alive when hot", "[codelets]") {
  Slipnet net = default_net_copy();
  Workspace ws = Workspace::init("abc", "abd", "ijk", net);
  Rng rng(17);
  int literal = 0;
  for (int i = 0; i < 2000; ++i) {
    auto codelet = scout_rule(net, ws, 100, rng);
    REQUIRE(codelet);
    const Rule& rule = std::get<Rule>(codelet->proposal->structure);
    if (rule.transform.kind == Transform::Kind::literal) {
      CHECK(rule.transform.glyph == 'd');
      ++literal;
    }
  }
  // Relation depth 50 vs glyph depth 10 at T=100: literal share 1/6.
  CHECK(literal > 100);
  CHECK(literal < 600);
}

TEST_CASE("rule scouts fall back to literals without a relation", "[codelets]") {
  Slipnet net = default_net_copy();
  Workspace ws = Workspace::init("abc", "abe", "ijk", net);
  Rng rng(18);
  for (int i = 0; i < 50; ++i) {
    auto codelet = scout_rule(net, ws, 50, rng);
    REQUIRE(codelet);
    const Rule& rule = std::get<Rule>(codelet->proposal->structure);
    CHECK(rule.transform.kind == Transform::Kind::literal);
    CHECK(rule.transform.glyph == 'e');
  }
}

TEST_CASE("identity problems yield the no-op rule", "[codelets]") {
  Slipnet net = default_net_copy();
  Workspace ws = Workspace::init("abc", "abc", "xyz", net);
  Rng rng(19);
  auto codelet = scout_rule(net, ws, 100, rng);
  REQUIRE(codelet);
  const Rule& rule = std::get<Rule>(codelet->proposal->structure);
  CHECK(rule.transform.kind == Transform::Kind::identity);
  CHECK(apply_rule(net, rule, "xyz") == "xyz");
}

TEST_CASE("translation through an identity correspondence is a no-op",
          "[codelets]") {
  Slipnet net = default_net_copy();
  Workspace ws = Workspace::init("abc", "abd", "ijk", net);
  Handle c = *ws.letter_at(StringId::initial, 2);
  Handle k = *ws.letter_at(StringId::target, 2);
  ws.add(Correspondence{c, k, {{"string-position", "rightmost", "rightmost"}}});
  Rng rng(20);

  Rule rule{"string-position", "rightmost", Transform::make_relation("successor")};
  auto translated = translate_rule(net, ws, rule, 50, rng);
  REQUIRE(translated);
  CHECK(*translated == rule);
}

TEST_CASE("slippages rewrite the rule during translation", "[codelets]") {
  Slipnet net = default_net_copy();
  Workspace ws = Workspace::init("abc", "abd", "ijk", net);
  Handle c = *ws.letter_at(StringId::initial, 2);
  Handle i = *ws.letter_at(StringId::target, 0);
  ws.add(Correspondence{c, i, {{"string-position", "rightmost", "leftmost"}}});
  Rng rng(21);

  Rule rule{"string-position", "rightmost", Transform::make_relation("successor")};
  auto translated = translate_rule(net, ws, rule, 50, rng);
  REQUIRE(translated);
  CHECK(translated->position_descriptor == "leftmost");
  CHECK(translated->transform.relation == "successor");

  // A mapping over the relation itself flips the transform too.
  Workspace ws2 = Workspace::init("abc", "abd", "ijk", net);
  Handle c2 = *ws2.letter_at(StringId::initial, 2);
  Handle k2 = *ws2.letter_at(StringId::target, 2);
  ws2.add(Correspondence{
      c2, k2,
      {{"string-position", "rightmost", "rightmost"},
       {"bond-relation", "successor", "predecessor"}}});
  auto flipped = translate_rule(net, ws2, rule, 50, rng);
  REQUIRE(flipped);
  CHECK(flipped->position_descriptor == "rightmost");
  CHECK(flipped->transform.relation == "predecessor");
}

TEST_CASE("untranslatable rules are accepted only when cold", "[codelets]") {
  Slipnet net = default_net_copy();
  Workspace ws = Workspace::init("abc", "abd", "ijk", net);
  Rng rng(22);
  Rule rule{"string-position", "rightmost", Transform::make_relation("successor")};

  for (int i = 0; i < 50; ++i) {
    auto cold = translate_rule(net, ws, rule, 0, rng);
    REQUIRE(cold);
    CHECK(*cold == rule);
  }
  for (int i = 0; i < 50; ++i) CHECK_FALSE(translate_rule(net, ws, rule, 100, rng));
}

TEST_CASE("apply_rule rewrites matched positions", "[codelets]") {
  Slipnet net = default_net_copy();
  Rule successor{"string-position", "rightmost",
                 Transform::make_relation("successor")};
  CHECK(apply_rule(net, successor, "ijk") == "ijl");

  Rule literal{"string-position", "rightmost", Transform::make_literal('d')};
  CHECK(apply_rule(net, literal, "ijk") == "ijd");

  // Successor of z does not exist: snag.
  CHECK_FALSE(apply_rule(net, successor, "xyz"));

  // No object matches the descriptor: absent.
  Rule mismatch{"letter-category", "c", Transform::make_relation("successor")};
  CHECK_FALSE(apply_rule(net, mismatch, "ijk"));
  CHECK(apply_rule(net, mismatch, "abc") == "abd");

  Rule all{"object-category", "letter", Transform::make_relation("successor")};
  CHECK(apply_rule(net, all, "ijk") == "jkl");

  // Purity: same inputs, same answer.
  for (int i = 0; i < 10; ++i) CHECK(apply_rule(net, successor, "ijk") == "ijl");
}

TEST_CASE("breaker probabilities", "[codelets]") {
  Slipnet net = default_net_copy();
  Rng rng(23);

  // A strength-0 structure at T=100 always breaks.
  {
    Workspace ws = Workspace::init("abc", "abd", "ijk", net);
    Handle a = *ws.letter_at(StringId::initial, 0);
    Handle i = *ws.letter_at(StringId::target, 0);
    ws.add(Correspondence{a, i, {{"letter-category", "a", "i"}}});
    BreakResult result = breaker_step(net, ws, 100, rng);
    CHECK(result.outcome == Outcome::broke);
    CHECK(ws.all_of(StoreId::correspondences).empty());
  }

  // Full-strength structures and cold workspaces never break.
  {
    Workspace ws = Workspace::init("abc", "abd", "ijk", net);
    Handle a = *ws.letter_at(StringId::initial, 0);
    Handle i = *ws.letter_at(StringId::target, 0);
    ws.add(Correspondence{a, i, {{"string-position", "leftmost", "leftmost"}}});
    for (int t = 0; t < 100; ++t)
      CHECK(breaker_step(net, ws, 100, rng).outcome == Outcome::fizzled);

    Handle b = *ws.letter_at(StringId::initial, 1);
    ws.add(Bond{"successor", a, b, Direction::right});
    for (int t = 0; t < 100; ++t)
      CHECK(breaker_step(net, ws, 0, rng).outcome == Outcome::fizzled);
  }

  // Nothing to break.
  {
    Workspace ws = Workspace::init("abc", "abd", "ijk", net);
    CHECK(breaker_step(net, ws, 100, rng).outcome == Outcome::fizzled);
  }
}

TEST_CASE("stale payloads fizzle without mutating the workspace", "[codelets]") {
  Slipnet net = default_net_copy();
  Workspace ws = Workspace::init("abc", "abd", "ijk", net);
  Handle a = *ws.letter_at(StringId::initial, 0);
  Handle b = *ws.letter_at(StringId::initial, 1);
  Bond bond{"successor", a, b, Direction::right};
  Rng rng(24);

  ws.remove(a);
  std::size_t descriptions = ws.all_of(StoreId::descriptions).size();
  std::size_t bonds = ws.all_of(StoreId::bonds).size();

  CHECK_FALSE(test_strength(net, ws, Proposal{bond, 0}, 50, rng));
  CHECK(build_with_fight(net, ws, Proposal{bond, 44}, 50, rng).outcome ==
        Outcome::fizzled);
  CHECK(ws.all_of(StoreId::descriptions).size() == descriptions);
  CHECK(ws.all_of(StoreId::bonds).size() == bonds);
}

TEST_CASE("built groups take a span position description", "[codelets]") {
  Slipnet net = default_net_copy();
  Workspace ws = Workspace::init("abcde", "abcde", "vwxyz", net);
  auto letters = ws.letters_of(StringId::initial);
  Rng rng(25);

  auto install = [&](std::vector<Handle> members) {
    Group g{"successor-group", std::move(members), Direction::right,
            StringId::initial};
    BuildResult r = build_with_fight(net, ws, Proposal{g, 80}, 100, rng);
    REQUIRE(r.outcome == Outcome::built);
    return *r.handle;
  };

  Handle left = install({letters[0], letters[1]});
  auto left_descs = ws.descriptions_of(left);
  REQUIRE(left_descs.size() == 1);
  CHECK(ws.description(left_descs[0]).descriptor == "leftmost");
  ws.remove(left);

  Handle middle = install({letters[1], letters[2], letters[3]});
  REQUIRE(ws.descriptions_of(middle).size() == 1);
  CHECK(ws.description(ws.descriptions_of(middle)[0]).descriptor == "middle");
  ws.remove(middle);

  Handle right = install({letters[3], letters[4]});
  REQUIRE(ws.descriptions_of(right).size() == 1);
  CHECK(ws.description(ws.descriptions_of(right)[0]).descriptor == "rightmost");
  ws.remove(right);

  Handle whole = install({letters[0], letters[1], letters[2], letters[3],
                          letters[4]});
  REQUIRE(ws.descriptions_of(whole).size() == 1);
  CHECK(ws.description(ws.descriptions_of(whole)[0]).descriptor == "single");

  // Cascade takes the description with the group.
  Handle desc = ws.descriptions_of(whole)[0];
  ws.remove(whole);
  CHECK_FALSE(ws.occupied(desc));
}
