#pragma once

#include <string>
#include <vector>

#include "bddl/diagnostics.hpp"
#include "bddl/predicate_table.hpp"

namespace bddl {

// An argument of an atom: either a declared instance id or a quantified
// variable. Names are stored without the leading '?'.
struct Term {
  std::string name;
  bool is_variable = false;

  friend bool operator==(const Term&, const Term&) = default;
};

struct Atom {
  Predicate predicate = Predicate::Real;
  std::vector<Term> args;
  SourceLocation location;

  // Locations are ignored so that reparsed text compares equal.
  friend bool operator==(const Atom& a, const Atom& b) {
    return a.predicate == b.predicate && a.args == b.args;
  }
};

struct QuantifiedVariable {
  std::string name;  // without '?'
  std::string synset;

  friend bool operator==(const QuantifiedVariable&, const QuantifiedVariable&) = default;
};

struct Formula {
  enum class Kind { Atom, Not, And, Or, Imply, ForAll, Exists, ForNPairs };

  Kind kind = Kind::And;
  Atom atom;                               // Kind::Atom
  std::vector<Formula> children;           // connectives and quantifier bodies
  std::vector<QuantifiedVariable> bound;   // one for forall/exists, two for for_n_pairs
  int count = 0;                           // for_n_pairs

  static Formula make_atom(Atom a);
  static Formula make_not(Formula f);
  static Formula make_and(std::vector<Formula> fs);
  static Formula make_or(std::vector<Formula> fs);
  static Formula make_imply(Formula lhs, Formula rhs);
  static Formula make_forall(QuantifiedVariable v, Formula body);
  static Formula make_exists(QuantifiedVariable v, Formula body);
  static Formula make_for_n_pairs(int n, QuantifiedVariable a, QuantifiedVariable b, Formula body);

  friend bool operator==(const Formula&, const Formula&) = default;
};

// Pushes negations down to atoms (De Morgan and quantifier duality), removes
// implications, then swaps each negated three-valued atom for its positive
// complement (not filled -> empty, not open -> closed, not folded ->
// unfolded, and back). A negated for_n_pairs has no inward form and stays as
// not(for_n_pairs) with a normalized body.
Formula normalize(const Formula& f);

// True when `not` appears only directly above atoms or for_n_pairs, and no
// implication or negated three-valued atom remains.
bool is_normalized(const Formula& f);

// Number of atom leaves.
std::size_t leaf_count(const Formula& f);

}  // namespace bddl
