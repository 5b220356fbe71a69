#include "bddl/validate.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

namespace bddl {
namespace {

constexpr std::array<std::string_view, 22> kRoomTypes{
    "bathroom",   "bedroom",     "break_room",      "childs_room", "closet",       "corridor",
    "dining_room", "empty_room", "exercise_room",   "garage",      "garden",       "home_office",
    "kitchen",    "laundry_room", "living_room",    "lobby",       "meeting_room", "pantry_room",
    "playroom",   "storage_room", "television_room", "utility_room",
};

bool reorderable(Predicate p) {
  return p == Predicate::Filled || p == Predicate::Empty || p == Predicate::Covered || p == Predicate::Soaked ||
         p == Predicate::InSource;
}

Diagnostic make(Severity s, std::string code, std::string message, SourceLocation loc) {
  return {s, std::move(code), std::move(message), loc};
}

class Canonicalizer {
 public:
  Canonicalizer(const ActivityDefinition& def, const KnowledgeBase& kb) : kb_(kb) { out_.definition = def; }

  CanonicalActivity run() {
    auto& d = out_.definition;
    declare_missing();
    for (auto& lit : d.init) {
      if (lit.args.size() == 2 && reorderable(lit.predicate)) {
        auto a = declared(lit.args[0]);
        auto b = declared(lit.args[1]);
        if (a && b && substance(*a) && !substance(*b)) swap_with_warning(lit.args[0], lit.args[1], lit.predicate, lit.location);
      }
      if (!lit.positive) {
        if (auto c = spec_of(lit.predicate).complement) {
          lit.predicate = *c;
          lit.positive = true;
        }
      }
    }
    std::map<std::string, std::string> scope;
    reorder_goal(d.goal, scope);
    d.goal = normalize(d.goal);
    return std::move(out_);
  }

 private:
  bool substance(const std::string& synset) const {
    return out_.definition.dialect() == Dialect::Modern && kb_.contains(synset) && kb_.is_substance(synset);
  }

  std::optional<std::string> declared(const std::string& instance) const {
    if (const auto* o = out_.definition.find_object(instance)) return o->synset;
    return std::nullopt;
  }

  void swap_with_warning(std::string& a, std::string& b, Predicate p, SourceLocation loc) {
    out_.diagnostics.push_back(make(Severity::Warning, "argument-order",
                                    std::string(canonical_name(p)) + " arguments reordered to (object, substance): (" +
                                        b + ", " + a + ")",
                                    loc));
    std::swap(a, b);
  }

  void note_reference(const std::string& name, SourceLocation loc) {
    auto& d = out_.definition;
    if (d.find_object(name)) return;
    auto syn = synset_of_instance(name);
    if (!syn) return;
    d.objects.push_back({name, *syn, loc});
    out_.diagnostics.push_back(
        make(Severity::Warning, "implicit-declaration", "instance " + name + " is used but not declared", loc));
  }

  void declare_missing() {
    for (const auto& lit : out_.definition.init)
      for (std::size_t i = 0; i < lit.args.size(); ++i)
        if (arg_role(lit.predicate, i) != ArgRole::RoomType) note_reference(lit.args[i], lit.location);
    declare_in_goal(out_.definition.goal);
  }

  void declare_in_goal(const Formula& f) {
    if (f.kind == Formula::Kind::Atom) {
      for (std::size_t i = 0; i < f.atom.args.size(); ++i)
        if (!f.atom.args[i].is_variable && arg_role(f.atom.predicate, i) != ArgRole::RoomType)
          note_reference(f.atom.args[i].name, f.atom.location);
      return;
    }
    for (const auto& c : f.children) declare_in_goal(c);
  }

  void reorder_goal(Formula& f, std::map<std::string, std::string>& scope) {
    if (f.kind == Formula::Kind::Atom) {
      auto& a = f.atom;
      if (a.args.size() != 2 || !reorderable(a.predicate)) return;
      auto syn = [&](const Term& t) -> std::optional<std::string> {
        if (t.is_variable) {
          auto it = scope.find(t.name);
          return it == scope.end() ? std::nullopt : std::optional<std::string>(it->second);
        }
        return declared(t.name);
      };
      auto x = syn(a.args[0]);
      auto y = syn(a.args[1]);
      if (x && y && substance(*x) && !substance(*y)) {
        out_.diagnostics.push_back(make(Severity::Warning, "argument-order",
                                        std::string(canonical_name(a.predicate)) +
                                            " arguments reordered to (object, substance): (" + a.args[1].name + ", " +
                                            a.args[0].name + ")",
                                        a.location));
        std::swap(a.args[0], a.args[1]);
      }
      return;
    }
    std::vector<std::pair<std::string, std::optional<std::string>>> saved;
    for (const auto& v : f.bound) {
      auto it = scope.find(v.name);
      saved.emplace_back(v.name, it == scope.end() ? std::nullopt : std::optional<std::string>(it->second));
      scope[v.name] = v.synset;
    }
    for (auto& c : f.children) reorder_goal(c, scope);
    for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
      if (it->second) scope[it->first] = *it->second;
      else scope.erase(it->first);
    }
  }

  const KnowledgeBase& kb_;
  CanonicalActivity out_;
};

class Validator {
 public:
  Validator(const ActivityDefinition& d, const KnowledgeBase& kb, DiagnosticList& out)
      : d_(d), kb_(kb), out_(out), legacy_(d.dialect() == Dialect::Legacy) {}

  void run() {
    check_objects();
    std::set<std::string> futures;
    for (const auto& lit : d_.init) {
      std::vector<std::optional<std::string>> syns;
      for (std::size_t i = 0; i < lit.args.size(); ++i) {
        if (arg_role(lit.predicate, i) == ArgRole::RoomType) {
          syns.emplace_back();
          continue;
        }
        const auto* o = d_.find_object(lit.args[i]);
        if (!o) error("undeclared-instance", "undeclared instance '" + lit.args[i] + "'", lit.location);
        syns.push_back(o ? std::optional<std::string>(o->synset) : std::nullopt);
      }
      check_atom(lit.predicate, lit.args, syns, lit.location);
      if (lit.predicate == Predicate::Future) {
        if (!lit.positive) error("future-literal", "future literals must be positive", lit.location);
        for (const auto& a : lit.args) futures.insert(a);
      }
      if (spec_of(lit.predicate).init_only && !lit.positive && lit.predicate != Predicate::Future)
        error("init-only", std::string(canonical_name(lit.predicate)) + " cannot be negated", lit.location);
    }
    for (const auto& lit : d_.init) {
      if (lit.predicate == Predicate::Future) continue;
      for (const auto& a : lit.args)
        if (futures.count(a))
          error("future-conflict", "future instance " + a + " appears in another init literal", lit.location);
    }
    std::map<std::string, std::string> scope;
    check_goal(d_.goal, scope);
  }

 private:
  void error(std::string code, std::string message, SourceLocation loc) {
    out_.push_back(make(Severity::Error, std::move(code), std::move(message), loc));
  }
  void warning(std::string code, std::string message, SourceLocation loc) {
    out_.push_back(make(Severity::Warning, std::move(code), std::move(message), loc));
  }

  bool substance(const std::string& s) const { return kb_.contains(s) && kb_.is_substance(s); }

  void check_objects() {
    int agents = 0;
    std::map<std::string, int> substance_counts;
    for (const auto& o : d_.objects) {
      if (!kb_.contains(o.synset)) {
        error("unknown-synset", "synset " + o.synset + " is unknown to the knowledge base", o.location);
        continue;
      }
      if (kb_.is_a(o.synset, "agent.n.01")) ++agents;
      if (!legacy_ && substance(o.synset)) ++substance_counts[o.synset];
    }
    for (const auto& [syn, n] : substance_counts)
      if (n > 1)
        error("substance-multiplicity",
              "substance " + syn + " is declared " + std::to_string(n) + " times; at most one instance is allowed",
              {});
    if (agents > 1) error("agent-multiplicity", "more than one agent instance is declared", {});
    if (agents == 0) warning("missing-agent", "no agent instance is declared", {});
  }

  void check_atom(Predicate p, const std::vector<std::string>& names, const std::vector<std::optional<std::string>>& syns,
                  SourceLocation loc) {
    const auto& spec = spec_of(p);
    std::size_t n = names.size();
    if ((spec.arity >= 0 && n != static_cast<std::size_t>(spec.arity)) || (spec.arity < 0 && n < 2)) {
      error("arity",
            std::string(spec.canonical) + " expects " +
                (spec.arity < 0 ? std::string("at least 2") : std::to_string(spec.arity)) + " arguments, got " +
                std::to_string(n),
            loc);
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      ArgRole role = arg_role(p, i);
      if (role == ArgRole::RoomType) {
        if (!is_known_room_type(names[i])) error("unknown-room-type", "unknown room type '" + names[i] + "'", loc);
        continue;
      }
      if (!syns[i] || !kb_.contains(*syns[i])) continue;
      const std::string& s = *syns[i];
      if (legacy_ || role == ArgRole::Any) continue;
      bool sub = substance(s);
      if (role == ArgRole::Object && sub)
        error("argument-type", std::string(spec.canonical) + " argument " + std::to_string(i + 1) + " (" + names[i] +
                                   ") must be an object, not a substance",
              loc);
      if (role == ArgRole::Substance && !sub)
        error("argument-type",
              std::string(spec.canonical) + " argument " + std::to_string(i + 1) + " (" + names[i] + ") must be a substance",
              loc);
      if (role == ArgRole::Liquid && kb_.substance_kind(s) != SubstanceKind::Liquid)
        error("argument-type",
              std::string(spec.canonical) + " argument " + std::to_string(i + 1) + " (" + names[i] + ") must be a liquid",
              loc);
    }
    if (spec.requires_property && syns[0] && kb_.contains(*syns[0]) && !kb_.has_property(*syns[0], *spec.requires_property))
      error("inapplicable", std::string(spec.canonical) + " inapplicable to " + *syns[0] + " (lacks property " +
                                std::string(property_name(*spec.requires_property)) + ")",
            loc);
  }

  void check_goal(const Formula& f, std::map<std::string, std::string>& scope) {
    if (f.kind == Formula::Kind::Atom) {
      const auto& a = f.atom;
      if (spec_of(a.predicate).init_only)
        error("init-only", std::string(canonical_name(a.predicate)) + " may only appear in :init", a.location);
      std::vector<std::string> names;
      std::vector<std::optional<std::string>> syns;
      for (std::size_t i = 0; i < a.args.size(); ++i) {
        const Term& t = a.args[i];
        names.push_back(t.name);
        if (arg_role(a.predicate, i) == ArgRole::RoomType) {
          syns.emplace_back();
        } else if (t.is_variable) {
          auto it = scope.find(t.name);
          if (it == scope.end()) error("unbound-variable", "variable ?" + t.name + " is not bound", a.location);
          syns.push_back(it == scope.end() ? std::nullopt : std::optional<std::string>(it->second));
        } else {
          const auto* o = d_.find_object(t.name);
          if (!o) error("undeclared-instance", "undeclared instance '" + t.name + "'", a.location);
          syns.push_back(o ? std::optional<std::string>(o->synset) : std::nullopt);
        }
      }
      check_atom(a.predicate, names, syns, a.location);
      return;
    }
    auto saved = scope;
    for (const auto& v : f.bound) {
      if (!kb_.contains(v.synset))
        error("unknown-synset", "quantified synset " + v.synset + " is unknown to the knowledge base", {});
      scope[v.name] = v.synset;
    }
    for (const auto& c : f.children) check_goal(c, scope);
    scope = std::move(saved);
  }

  const ActivityDefinition& d_;
  const KnowledgeBase& kb_;
  DiagnosticList& out_;
  bool legacy_;
};

}  // namespace

std::span<const std::string_view> known_room_types() { return kRoomTypes; }

bool is_known_room_type(std::string_view type) {
  return std::find(kRoomTypes.begin(), kRoomTypes.end(), type) != kRoomTypes.end();
}

CanonicalActivity canonicalize(const ActivityDefinition& def, const KnowledgeBase& kb) {
  return Canonicalizer(def, kb).run();
}

DiagnosticList validate_problem(const ActivityDefinition& def, const KnowledgeBase& kb) {
  CanonicalActivity c = canonicalize(def, kb);
  DiagnosticList out = c.diagnostics;
  Validator(c.definition, kb, out).run();
  return out;
}

}  // namespace bddl
