#include <gtest/gtest.h>

#include "bddl/formula.hpp"

using namespace bddl;
using K = Formula::Kind;

namespace {

Formula atom(Predicate p, std::vector<std::string> args) {
  Atom a;
  a.predicate = p;
  for (auto& s : args) a.args.push_back({s.substr(s[0] == '?' ? 1 : 0), s[0] == '?'});
  return Formula::make_atom(a);
}

}  // namespace

TEST(Normalize, DeMorgan) {
  Formula a = atom(Predicate::Cooked, {"apple.n.01_1"});
  Formula b = atom(Predicate::Sliced, {"apple.n.01_1"});
  Formula f = normalize(Formula::make_not(Formula::make_and({a, b})));
  ASSERT_EQ(f.kind, K::Or);
  ASSERT_EQ(f.children.size(), 2u);
  EXPECT_EQ(f.children[0], Formula::make_not(a));
  EXPECT_EQ(f.children[1], Formula::make_not(b));
  EXPECT_TRUE(is_normalized(f));
}

TEST(Normalize, NegatedFilledBecomesEmpty) {
  Formula f = normalize(Formula::make_not(atom(Predicate::Filled, {"bottle.n.01_1", "water.n.06_1"})));
  ASSERT_EQ(f.kind, K::Atom);
  EXPECT_EQ(f.atom.predicate, Predicate::Empty);
  EXPECT_EQ(f.atom.args[0].name, "bottle.n.01_1");
}

TEST(Normalize, QuantifierDualityRewritesInside) {
  QuantifiedVariable v{"cabinet.n.01", "cabinet.n.01"};
  Formula f = normalize(Formula::make_not(Formula::make_forall(v, atom(Predicate::Open, {"?cabinet.n.01"}))));
  ASSERT_EQ(f.kind, K::Exists);
  ASSERT_EQ(f.children[0].kind, K::Atom);
  EXPECT_EQ(f.children[0].atom.predicate, Predicate::Closed);
}

TEST(Normalize, ImplicationAndDoubleNegation) {
  Formula a = atom(Predicate::ToggledOn, {"sink.n.01_1"});
  Formula b = atom(Predicate::Frozen, {"ice.n.01_1"});
  Formula f = normalize(Formula::make_imply(a, Formula::make_not(Formula::make_not(b))));
  ASSERT_EQ(f.kind, K::Or);
  EXPECT_EQ(f.children[0], Formula::make_not(a));
  EXPECT_EQ(f.children[1], b);
  EXPECT_FALSE(is_normalized(Formula::make_imply(a, b)));
}

TEST(Normalize, NegatedForNPairsStays) {
  QuantifiedVariable x{"x", "a.n.01"}, y{"y", "b.n.01"};
  Formula body = Formula::make_not(atom(Predicate::Filled, {"?x", "water.n.06_1"}));
  Formula f = normalize(Formula::make_not(Formula::make_for_n_pairs(2, x, y, body)));
  ASSERT_EQ(f.kind, K::Not);
  ASSERT_EQ(f.children[0].kind, K::ForNPairs);
  EXPECT_EQ(f.children[0].children[0].atom.predicate, Predicate::Empty);
  EXPECT_TRUE(is_normalized(f));
}

TEST(Normalize, LeafCount) {
  Formula a = atom(Predicate::Cooked, {"apple.n.01_1"});
  QuantifiedVariable v{"x", "apple.n.01"};
  Formula f = Formula::make_and({a, Formula::make_or({a, a}), Formula::make_forall(v, a)});
  EXPECT_EQ(leaf_count(f), 4u);
  EXPECT_EQ(leaf_count(Formula::make_and({})), 0u);
}
