#include "bddl/activity.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "bddl/sexpr.hpp"

namespace bddl {
namespace {

bool is_lemma_char(char c) {
  return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_' ||
         c == '-' || c == '\'';
}

const SExpr& expect_list(const SExpr& e, const char* what) {
  if (!e.is_list) throw ParseError(std::string("expected a list for ") + what, e.location);
  return e;
}

std::string head_of(const SExpr& e) { return e.is_list && !e.items.empty() && e.items[0].is_atom() ? e.items[0].atom : ""; }

Predicate predicate_or_throw(const SExpr& head) {
  if (!head.is_atom()) throw ParseError("expected a predicate name", head.location);
  auto p = lookup_predicate(head.atom);
  if (!p) throw ParseError("unknown predicate '" + head.atom + "'", head.location);
  return *p;
}

GroundLiteral parse_init_literal(const SExpr& e) {
  expect_list(e, "an init literal");
  if (e.items.empty()) throw ParseError("empty init literal", e.location);
  std::string head = head_of(e);
  if (head == "not") {
    if (e.items.size() != 2) throw ParseError("'not' takes exactly one literal", e.location);
    GroundLiteral inner = parse_init_literal(e.items[1]);
    if (!inner.positive) throw ParseError("double negation in init", e.location);
    inner.positive = false;
    inner.location = e.location;
    return inner;
  }
  if (head == "and" || head == "or" || head == "imply" || head == "forall" || head == "exists" ||
      head == "for_n_pairs")
    throw ParseError("init must be a conjunction of ground literals; '" + head + "' is not allowed", e.location);
  GroundLiteral lit;
  lit.predicate = predicate_or_throw(e.items[0]);
  lit.location = e.location;
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    const SExpr& a = e.items[i];
    if (!a.is_atom()) throw ParseError("nested expression in literal argument", a.location);
    if (!a.atom.empty() && a.atom[0] == '?') throw ParseError("variables are not allowed in init", a.location);
    lit.args.push_back(a.atom);
  }
  return lit;
}

QuantifiedVariable parse_binding(const SExpr& e) {
  expect_list(e, "a variable binding");
  if (e.items.size() != 3 || !e.items[0].is_atom() || !e.items[1].is_atom("-") || !e.items[2].is_atom() ||
      e.items[0].atom.size() < 2 || e.items[0].atom[0] != '?')
    throw ParseError("expected (?variable - synset)", e.location);
  return {e.items[0].atom.substr(1), e.items[2].atom};
}

class GoalParser {
 public:
  Formula parse(const SExpr& e) {
    expect_list(e, "a goal formula");
    if (e.items.empty()) throw ParseError("empty formula", e.location);
    std::string head = head_of(e);
    if (head == "and" || head == "or") {
      std::vector<Formula> kids;
      for (std::size_t i = 1; i < e.items.size(); ++i) kids.push_back(parse(e.items[i]));
      return head == "and" ? Formula::make_and(std::move(kids)) : Formula::make_or(std::move(kids));
    }
    if (head == "not") {
      if (e.items.size() != 2) throw ParseError("'not' takes exactly one formula", e.location);
      return Formula::make_not(parse(e.items[1]));
    }
    if (head == "imply") {
      if (e.items.size() != 3) throw ParseError("'imply' takes exactly two formulas", e.location);
      return Formula::make_imply(parse(e.items[1]), parse(e.items[2]));
    }
    if (head == "forall" || head == "exists") {
      if (e.items.size() != 3) throw ParseError("'" + head + "' takes a binding and a body", e.location);
      QuantifiedVariable v = parse_binding(e.items[1]);
      scope_.push_back(v.name);
      Formula body = parse(e.items[2]);
      scope_.pop_back();
      return head == "forall" ? Formula::make_forall(v, std::move(body)) : Formula::make_exists(v, std::move(body));
    }
    if (head == "for_n_pairs") {
      if (e.items.size() != 5) throw ParseError("for_n_pairs takes (n), two bindings and a body", e.location);
      const SExpr& n = e.items[1];
      int count = 0;
      const SExpr* num = n.is_list && n.items.size() == 1 ? &n.items[0] : (n.is_atom() ? &n : nullptr);
      try {
        std::size_t used = 0;
        if (!num || !num->is_atom()) throw std::invalid_argument("");
        count = std::stoi(num->atom, &used);
        if (used != num->atom.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw ParseError("for_n_pairs count must be an integer", n.location);
      }
      if (count < 1) throw ParseError("for_n_pairs count must be at least 1", n.location);
      QuantifiedVariable a = parse_binding(e.items[2]);
      QuantifiedVariable b = parse_binding(e.items[3]);
      if (a.name == b.name) throw ParseError("for_n_pairs binds two distinct variables", e.items[3].location);
      scope_.push_back(a.name);
      scope_.push_back(b.name);
      Formula body = parse(e.items[4]);
      scope_.pop_back();
      scope_.pop_back();
      return Formula::make_for_n_pairs(count, a, b, std::move(body));
    }
    Atom atom;
    atom.predicate = predicate_or_throw(e.items[0]);
    atom.location = e.location;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      const SExpr& a = e.items[i];
      if (!a.is_atom()) throw ParseError("nested expression in atom argument", a.location);
      Term t;
      if (!a.atom.empty() && a.atom[0] == '?') {
        t.name = a.atom.substr(1);
        t.is_variable = bound(t.name);
      } else {
        t.name = a.atom;
      }
      if (t.name.empty()) throw ParseError("empty argument", a.location);
      atom.args.push_back(std::move(t));
    }
    return Formula::make_atom(std::move(atom));
  }

 private:
  bool bound(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (*it == name) return true;
    return false;
  }
  std::vector<std::string> scope_;
};

std::string section_name(const SExpr& e) {
  if (!e.is_list || e.items.empty() || !e.items[0].is_atom()) throw ParseError("expected a section", e.location);
  return e.items[0].atom;
}

}  // namespace

bool is_valid_synset_id(std::string_view s) {
  // <lemma>.<pos>.<nn>
  auto last = s.rfind('.');
  if (last == std::string_view::npos || last < 3) return false;
  auto mid = s.rfind('.', last - 1);
  if (mid == std::string_view::npos || mid == 0) return false;
  std::string_view lemma = s.substr(0, mid);
  std::string_view pos = s.substr(mid + 1, last - mid - 1);
  std::string_view num = s.substr(last + 1);
  if (pos.size() != 1 || std::string_view("nvasr").find(pos[0]) == std::string_view::npos) return false;
  if (num.size() != 2 || !std::isdigit(static_cast<unsigned char>(num[0])) ||
      !std::isdigit(static_cast<unsigned char>(num[1])))
    return false;
  if (lemma.empty() ||
      (!std::islower(static_cast<unsigned char>(lemma[0])) && !std::isdigit(static_cast<unsigned char>(lemma[0]))))
    return false;
  for (char c : lemma)
    if (!is_lemma_char(c)) return false;
  return true;
}

std::optional<std::string> synset_of_instance(std::string_view instance) {
  auto us = instance.rfind('_');
  if (us == std::string_view::npos || us + 1 >= instance.size()) return std::nullopt;
  std::string_view num = instance.substr(us + 1);
  if (num[0] == '0') return std::nullopt;
  for (char c : num)
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  std::string_view syn = instance.substr(0, us);
  if (!is_valid_synset_id(syn)) return std::nullopt;
  return std::string(syn);
}

bool is_valid_instance_id(std::string_view s) { return synset_of_instance(s).has_value(); }

const ObjectDeclaration* ActivityDefinition::find_object(std::string_view instance) const {
  for (const auto& o : objects)
    if (o.instance == instance) return &o;
  return nullptr;
}

ActivityDefinition parse_problem(std::string_view text) {
  auto top = read_sexprs(text);
  if (top.empty()) throw ParseError("empty problem text", {1, 1});
  if (top.size() > 1) throw ParseError("unexpected text after the problem definition", top[1].location);
  const SExpr& def = top[0];
  if (!def.is_list || def.items.empty() || !def.items[0].is_atom("define"))
    throw ParseError("expected (define ...)", def.location);
  if (def.items.size() < 2) throw ParseError("missing (problem <name>)", def.location);
  const SExpr& prob = def.items[1];
  if (!prob.is_list || prob.items.size() != 2 || !prob.items[0].is_atom("problem") || !prob.items[1].is_atom())
    throw ParseError("expected (problem <name>)", prob.location);

  ActivityDefinition out;
  out.problem_name = prob.items[1].atom;
  bool seen_domain = false, seen_objects = false, seen_init = false, seen_goal = false;
  std::set<std::string> instances;
  for (std::size_t i = 2; i < def.items.size(); ++i) {
    const SExpr& sec = def.items[i];
    std::string name = section_name(sec);
    auto once = [&](bool& flag) {
      if (flag) throw ParseError("duplicate section " + name, sec.location);
      flag = true;
    };
    if (name == ":domain") {
      once(seen_domain);
      if (sec.items.size() != 2 || !sec.items[1].is_atom()) throw ParseError("expected (:domain <name>)", sec.location);
      out.domain_name = sec.items[1].atom;
    } else if (name == ":objects") {
      once(seen_objects);
      std::vector<const SExpr*> pending;
      for (std::size_t j = 1; j < sec.items.size(); ++j) {
        const SExpr& tok = sec.items[j];
        if (!tok.is_atom()) throw ParseError("unexpected list in :objects", tok.location);
        if (tok.atom != "-") {
          pending.push_back(&tok);
          continue;
        }
        if (j + 1 >= sec.items.size() || !sec.items[j + 1].is_atom())
          throw ParseError("expected a synset after '-'", tok.location);
        if (pending.empty()) throw ParseError("type without instances", tok.location);
        const SExpr& type = sec.items[++j];
        if (!is_valid_synset_id(type.atom)) throw ParseError("malformed synset id '" + type.atom + "'", type.location);
        for (const SExpr* inst : pending) {
          auto syn = synset_of_instance(inst->atom);
          if (!syn) throw ParseError("malformed instance id '" + inst->atom + "'", inst->location);
          if (*syn != type.atom)
            throw ParseError("instance '" + inst->atom + "' does not match its type " + type.atom, inst->location);
          if (!instances.insert(inst->atom).second)
            throw ParseError("duplicate instance id '" + inst->atom + "'", inst->location);
          out.objects.push_back({inst->atom, type.atom, inst->location});
        }
        pending.clear();
      }
      if (!pending.empty()) throw ParseError("instances without a type", pending.front()->location);
    } else if (name == ":init") {
      once(seen_init);
      for (std::size_t j = 1; j < sec.items.size(); ++j) out.init.push_back(parse_init_literal(sec.items[j]));
    } else if (name == ":goal") {
      once(seen_goal);
      if (sec.items.size() != 2) throw ParseError(":goal takes exactly one formula", sec.location);
      out.goal = GoalParser().parse(sec.items[1]);
    } else {
      throw ParseError("unknown section " + name, sec.location);
    }
  }
  if (!seen_objects) throw ParseError("missing :objects section", def.location);
  if (!seen_init) throw ParseError("missing :init section", def.location);
  if (!seen_goal) throw ParseError("missing :goal section", def.location);
  return out;
}

ActivityDefinition parse_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

GroundLiteral parse_literal(std::string_view text) {
  auto top = read_sexprs(text);
  if (top.size() != 1) throw ParseError("expected exactly one literal", {1, 1});
  return parse_init_literal(top[0]);
}

namespace {

std::string indent(int depth) { return std::string(4 * depth, ' '); }

std::string atom_text(const Atom& a, bool goal_style) {
  std::string s = "(" + std::string(bddl_name(a.predicate));
  for (const auto& t : a.args) s += " " + std::string(t.is_variable || goal_style ? "?" : "") + t.name;
  return s + ")";
}

void write_formula(std::ostringstream& os, const Formula& f, int depth, bool goal_style) {
  using K = Formula::Kind;
  auto binding = [](const QuantifiedVariable& v) { return "(?" + v.name + " - " + v.synset + ")"; };
  switch (f.kind) {
    case K::Atom:
      os << indent(depth) << atom_text(f.atom, goal_style) << "\n";
      return;
    case K::Not:
    case K::And:
    case K::Or:
    case K::Imply: {
      const char* head = f.kind == K::Not ? "not" : f.kind == K::And ? "and" : f.kind == K::Or ? "or" : "imply";
      os << indent(depth) << "(" << head << "\n";
      for (const auto& c : f.children) write_formula(os, c, depth + 1, goal_style);
      os << indent(depth) << ")\n";
      return;
    }
    case K::ForAll:
    case K::Exists:
      os << indent(depth) << (f.kind == K::ForAll ? "(forall" : "(exists") << "\n";
      os << indent(depth + 1) << binding(f.bound[0]) << "\n";
      write_formula(os, f.children.front(), depth + 1, goal_style);
      os << indent(depth) << ")\n";
      return;
    case K::ForNPairs:
      os << indent(depth) << "(for_n_pairs\n";
      os << indent(depth + 1) << "(" << f.count << ")\n";
      os << indent(depth + 1) << binding(f.bound[0]) << "\n";
      os << indent(depth + 1) << binding(f.bound[1]) << "\n";
      write_formula(os, f.children.front(), depth + 1, goal_style);
      os << indent(depth) << ")\n";
      return;
  }
}

}  // namespace

std::string serialize_formula(const Formula& f, bool goal_style) {
  std::ostringstream os;
  write_formula(os, f, 0, goal_style);
  return os.str();
}

std::string serialize_literal(const GroundLiteral& lit) {
  std::string s = "(" + std::string(bddl_name(lit.predicate));
  for (const auto& a : lit.args) s += " " + a;
  s += ")";
  return lit.positive ? s : "(not " + s + ")";
}

std::string serialize_problem(const ActivityDefinition& def) {
  std::ostringstream os;
  os << "(define (problem " << def.problem_name << ")\n";
  if (!def.domain_name.empty()) os << indent(1) << "(:domain " << def.domain_name << ")\n";
  os << "\n" << indent(1) << "(:objects\n";
  for (std::size_t i = 0; i < def.objects.size();) {
    std::size_t j = i;
    os << indent(2);
    while (j < def.objects.size() && def.objects[j].synset == def.objects[i].synset) os << def.objects[j++].instance << " ";
    os << "- " << def.objects[i].synset << "\n";
    i = j;
  }
  os << indent(1) << ")\n\n" << indent(1) << "(:init\n";
  for (const auto& lit : def.init) os << indent(2) << serialize_literal(lit) << "\n";
  os << indent(1) << ")\n\n" << indent(1) << "(:goal\n";
  write_formula(os, def.goal, 2, true);
  os << indent(1) << ")\n)\n";
  return os.str();
}

}  // namespace bddl
