#include "bddl/formula.hpp"

namespace bddl {

Formula Formula::make_atom(Atom a) {
  Formula f;
  f.kind = Kind::Atom;
  f.atom = std::move(a);
  return f;
}

Formula Formula::make_not(Formula inner) {
  Formula f;
  f.kind = Kind::Not;
  f.children.push_back(std::move(inner));
  return f;
}

Formula Formula::make_and(std::vector<Formula> fs) {
  Formula f;
  f.kind = Kind::And;
  f.children = std::move(fs);
  return f;
}

Formula Formula::make_or(std::vector<Formula> fs) {
  Formula f;
  f.kind = Kind::Or;
  f.children = std::move(fs);
  return f;
}

Formula Formula::make_imply(Formula lhs, Formula rhs) {
  Formula f;
  f.kind = Kind::Imply;
  f.children.push_back(std::move(lhs));
  f.children.push_back(std::move(rhs));
  return f;
}

Formula Formula::make_forall(QuantifiedVariable v, Formula body) {
  Formula f;
  f.kind = Kind::ForAll;
  f.bound.push_back(std::move(v));
  f.children.push_back(std::move(body));
  return f;
}

Formula Formula::make_exists(QuantifiedVariable v, Formula body) {
  Formula f;
  f.kind = Kind::Exists;
  f.bound.push_back(std::move(v));
  f.children.push_back(std::move(body));
  return f;
}

Formula Formula::make_for_n_pairs(int n, QuantifiedVariable a, QuantifiedVariable b, Formula body) {
  Formula f;
  f.kind = Kind::ForNPairs;
  f.count = n;
  f.bound.push_back(std::move(a));
  f.bound.push_back(std::move(b));
  f.children.push_back(std::move(body));
  return f;
}

namespace {

// Negation normal form; `negated` says whether an odd number of negations
// sits above `f`.
Formula push(const Formula& f, bool negated) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::Atom: {
      if (!negated) return f;
      if (auto c = spec_of(f.atom.predicate).complement) {
        Atom a = f.atom;
        a.predicate = *c;
        return Formula::make_atom(std::move(a));
      }
      return Formula::make_not(f);
    }
    case K::Not:
      return push(f.children.front(), !negated);
    case K::And:
    case K::Or: {
      std::vector<Formula> kids;
      kids.reserve(f.children.size());
      for (const auto& c : f.children) kids.push_back(push(c, negated));
      bool conj = (f.kind == K::And) != negated;
      return conj ? Formula::make_and(std::move(kids)) : Formula::make_or(std::move(kids));
    }
    case K::Imply: {
      // a -> b  ==  not a or b;  not (a -> b)  ==  a and not b
      if (negated)
        return Formula::make_and({push(f.children[0], false), push(f.children[1], true)});
      return Formula::make_or({push(f.children[0], true), push(f.children[1], false)});
    }
    case K::ForAll:
    case K::Exists: {
      Formula body = push(f.children.front(), negated);
      bool universal = (f.kind == K::ForAll) != negated;
      return universal ? Formula::make_forall(f.bound[0], std::move(body))
                       : Formula::make_exists(f.bound[0], std::move(body));
    }
    case K::ForNPairs: {
      Formula g = Formula::make_for_n_pairs(f.count, f.bound[0], f.bound[1], push(f.children.front(), false));
      return negated ? Formula::make_not(std::move(g)) : g;
    }
  }
  return f;
}

}  // namespace

Formula normalize(const Formula& f) { return push(f, false); }

bool is_normalized(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::Atom:
      return true;
    case K::Not: {
      const Formula& c = f.children.front();
      if (c.kind == K::Atom) return !spec_of(c.atom.predicate).complement.has_value();
      return c.kind == K::ForNPairs && is_normalized(c);
    }
    case K::Imply:
      return false;
    default:
      for (const auto& c : f.children)
        if (!is_normalized(c)) return false;
      return true;
  }
}

std::size_t leaf_count(const Formula& f) {
  if (f.kind == Formula::Kind::Atom) return 1;
  std::size_t n = 0;
  for (const auto& c : f.children) n += leaf_count(c);
  return n;
}

}  // namespace bddl
