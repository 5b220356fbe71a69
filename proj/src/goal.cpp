#include "bddl/goal.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <set>

#include "bddl/activity.hpp"
#include "bddl/predicates.hpp"

namespace bddl {

namespace {

using Kind = Formula::Kind;
using Env = std::map<std::string, std::string>;
// Achievable leaf total -> most leaves satisfied with exactly that total.
using Profile = std::map<std::size_t, std::size_t>;

constexpr std::size_t kExhaustiveLimit = 10000;

class Evaluator {
 public:
  Evaluator(const WorldState& w, const KnowledgeBase& kb, const Grounding& g) : world_(w), kb_(kb), grounding_(g) {}

  bool eval(const Formula& f, Env& env) {
    switch (f.kind) {
      case Kind::Atom: return atom(f.atom, env);
      case Kind::Not: return !eval(f.children[0], env);
      case Kind::And:
        return std::all_of(f.children.begin(), f.children.end(), [&](const Formula& c) { return eval(c, env); });
      case Kind::Or:
        return std::any_of(f.children.begin(), f.children.end(), [&](const Formula& c) { return eval(c, env); });
      case Kind::Imply: return !eval(f.children[0], env) || eval(f.children[1], env);
      case Kind::ForAll:
      case Kind::Exists: {
        const auto& v = f.bound[0];
        auto saved = bind_scope(env, v.name);
        bool result = f.kind == Kind::ForAll;
        for (const auto& value : domain(v.synset)) {
          env[v.name] = value;
          bool b = eval(f.children[0], env);
          if (f.kind == Kind::ForAll && !b) {
            result = false;
            break;
          }
          if (f.kind == Kind::Exists && b) {
            result = true;
            break;
          }
        }
        restore(env, v.name, saved);
        return result;
      }
      case Kind::ForNPairs: {
        auto edges = pair_edges(f, env);
        return maximum_matching(edges.right, edges.adjacency) >= static_cast<std::size_t>(f.count);
      }
    }
    return false;
  }

  Profile profile(const Formula& f, Env& env) {
    switch (f.kind) {
      case Kind::Atom: return {{1, atom(f.atom, env) ? 1u : 0u}};
      case Kind::Not:
        if (f.children[0].kind == Kind::Atom || f.children[0].kind == Kind::ForNPairs)
          return {{1, eval(f, env) ? 1u : 0u}};
        throw GoalError("goal is not normalized");
      case Kind::And: {
        Profile acc{{0, 0}};
        for (const auto& c : f.children) acc = convolve(acc, profile(c, env));
        return acc;
      }
      case Kind::Or: {
        if (f.children.empty()) return {{1, 0}};
        Profile acc;
        for (const auto& c : f.children) merge(acc, profile(c, env));
        return acc;
      }
      case Kind::Imply: throw GoalError("goal is not normalized");
      case Kind::ForAll:
      case Kind::Exists: {
        const auto& v = f.bound[0];
        auto values = domain(v.synset);
        if (values.empty()) {
          if (f.kind == Kind::ForAll) return {{0, 0}};
          return {{std::max<std::size_t>(1, leaf_count(f.children[0])), 0}};
        }
        auto saved = bind_scope(env, v.name);
        Profile acc;
        if (f.kind == Kind::ForAll) acc = {{0, 0}};
        for (const auto& value : values) {
          env[v.name] = value;
          Profile p = profile(f.children[0], env);
          if (f.kind == Kind::ForAll)
            acc = convolve(acc, p);
          else
            merge(acc, p);
        }
        restore(env, v.name, saved);
        return acc;
      }
      case Kind::ForNPairs: return pairs_profile(f, env);
    }
    return {};
  }

 private:
  struct PairGraph {
    std::vector<std::string> left, right_values;
    std::size_t right = 0;
    std::vector<std::vector<std::size_t>> adjacency;
  };

  static std::optional<std::string> bind_scope(Env& env, const std::string& name) {
    auto it = env.find(name);
    if (it == env.end()) return std::nullopt;
    return it->second;
  }
  static void restore(Env& env, const std::string& name, const std::optional<std::string>& saved) {
    if (saved)
      env[name] = *saved;
    else
      env.erase(name);
  }

  static Profile convolve(const Profile& a, const Profile& b) {
    Profile out;
    for (const auto& [ta, sa] : a)
      for (const auto& [tb, sb] : b) {
        auto& slot = out[ta + tb];
        slot = std::max(slot, sa + sb);
      }
    return out;
  }
  static void merge(Profile& acc, const Profile& p) {
    for (const auto& [t, s] : p) {
      auto it = acc.find(t);
      if (it == acc.end())
        acc.emplace(t, s);
      else
        it->second = std::max(it->second, s);
    }
  }
  static double ratio(const Profile& p) {
    double best = 0.0;
    for (const auto& [t, s] : p) best = std::max(best, t == 0 ? 1.0 : static_cast<double>(s) / static_cast<double>(t));
    return best;
  }

  const std::vector<std::string>& domain(const std::string& synset) {
    auto it = domains_.find(synset);
    if (it == domains_.end()) it = domains_.emplace(synset, quantifier_domain(world_, kb_, synset)).first;
    return it->second;
  }

  std::string resolve(const Term& t, const Env& env) const {
    if (t.is_variable) {
      auto it = env.find(t.name);
      if (it == env.end()) throw GoalError("unbound variable ?" + t.name);
      return it->second;
    }
    auto g = grounding_.instances.find(t.name);
    if (g != grounding_.instances.end()) return g->second;
    return t.name;
  }

  bool atom(const Atom& a, const Env& env) {
    std::vector<std::string> args;
    args.reserve(a.args.size());
    for (const auto& t : a.args) args.push_back(resolve(t, env));
    try {
      return check(world_, kb_, a.predicate, args);
    } catch (const PredicateError&) {
      return false;
    }
  }

  PairGraph pair_edges(const Formula& f, Env& env) {
    PairGraph g;
    const auto &va = f.bound[0], &vb = f.bound[1];
    g.left = domain(va.synset);
    g.right_values = domain(vb.synset);
    g.right = g.right_values.size();
    g.adjacency.resize(g.left.size());
    auto sa = bind_scope(env, va.name), sb = bind_scope(env, vb.name);
    for (std::size_t i = 0; i < g.left.size(); ++i)
      for (std::size_t j = 0; j < g.right; ++j) {
        env[va.name] = g.left[i];
        env[vb.name] = g.right_values[j];
        if (eval(f.children[0], env)) g.adjacency[i].push_back(j);
      }
    restore(env, va.name, sa);
    restore(env, vb.name, sb);
    return g;
  }

  // Selections of n disjoint pairs, enumerated exhaustively when small and
  // greedily otherwise. A satisfied for_n_pairs always contributes a fully
  // satisfied selection so that success and Q = 1 coincide.
  Profile pairs_profile(const Formula& f, Env& env) {
    const auto &va = f.bound[0], &vb = f.bound[1];
    const std::size_t n = static_cast<std::size_t>(f.count);
    const auto left = domain(va.synset);
    const auto right = domain(vb.synset);
    const std::size_t body_leaves = std::max<std::size_t>(1, leaf_count(f.children[0]));
    if (left.size() < n || right.size() < n) return {{n * body_leaves, 0}};

    auto sa = bind_scope(env, va.name), sb = bind_scope(env, vb.name);
    std::vector<std::vector<Profile>> cell(left.size(), std::vector<Profile>(right.size()));
    std::vector<std::vector<bool>> holds(left.size(), std::vector<bool>(right.size()));
    for (std::size_t i = 0; i < left.size(); ++i)
      for (std::size_t j = 0; j < right.size(); ++j) {
        env[va.name] = left[i];
        env[vb.name] = right[j];
        cell[i][j] = profile(f.children[0], env);
        holds[i][j] = eval(f.children[0], env);
      }
    restore(env, va.name, sa);
    restore(env, vb.name, sb);

    Profile best;
    if (selection_count(left.size(), right.size(), n) <= kExhaustiveLimit) {
      std::vector<bool> used_right(right.size(), false);
      enumerate(cell, 0, n, Profile{{0, 0}}, used_right, best);
    } else {
      best = greedy(cell, n);
    }

    std::vector<std::vector<std::size_t>> adjacency(left.size());
    for (std::size_t i = 0; i < left.size(); ++i)
      for (std::size_t j = 0; j < right.size(); ++j)
        if (holds[i][j]) adjacency[i].push_back(j);
    auto pairs = matching_pairs(right.size(), adjacency);
    if (pairs.size() >= n) {
      std::size_t total = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const Profile& p = cell[pairs[k].first][pairs[k].second];
        std::size_t full = std::numeric_limits<std::size_t>::max();
        for (const auto& [t, s] : p)
          if (s == t) full = std::min(full, t);
        total += full == std::numeric_limits<std::size_t>::max() ? 0 : full;
      }
      merge(best, {{total, total}});
    }
    return best;
  }

  static double selection_count(std::size_t a, std::size_t b, std::size_t n) {
    double c = 1.0;
    for (std::size_t k = 0; k < n; ++k) c *= static_cast<double>(a - k) / static_cast<double>(k + 1) * static_cast<double>(b - k);
    return c;
  }

  // Left vertices are chosen in increasing order; each is paired with an
  // unused right vertex.
  static void enumerate(const std::vector<std::vector<Profile>>& cell, std::size_t from, std::size_t remaining,
                        const Profile& acc, std::vector<bool>& used_right, Profile& best) {
    if (remaining == 0) {
      merge(best, acc);
      return;
    }
    for (std::size_t i = from; i + remaining <= cell.size(); ++i)
      for (std::size_t j = 0; j < used_right.size(); ++j) {
        if (used_right[j]) continue;
        used_right[j] = true;
        enumerate(cell, i + 1, remaining - 1, convolve(acc, cell[i][j]), used_right, best);
        used_right[j] = false;
      }
  }

  static Profile greedy(const std::vector<std::vector<Profile>>& cell, std::size_t n) {
    std::vector<bool> used_left(cell.size(), false), used_right(cell[0].size(), false);
    Profile acc{{0, 0}};
    for (std::size_t k = 0; k < n; ++k) {
      double best = -1.0;
      std::size_t bi = 0, bj = 0;
      for (std::size_t i = 0; i < cell.size(); ++i)
        for (std::size_t j = 0; j < cell[i].size(); ++j)
          if (!used_left[i] && !used_right[j] && ratio(cell[i][j]) > best) {
            best = ratio(cell[i][j]);
            bi = i;
            bj = j;
          }
      used_left[bi] = used_right[bj] = true;
      acc = convolve(acc, cell[bi][bj]);
    }
    return acc;
  }

  static std::vector<std::pair<std::size_t, std::size_t>> matching_pairs(
      std::size_t right_count, const std::vector<std::vector<std::size_t>>& adjacency);

  const WorldState& world_;
  const KnowledgeBase& kb_;
  const Grounding& grounding_;
  std::map<std::string, std::vector<std::string>> domains_;

};

// Hopcroft-Karp; returns the matched pairs.
std::vector<std::pair<std::size_t, std::size_t>> hopcroft_karp(std::size_t right_count,
                                                               const std::vector<std::vector<std::size_t>>& adj) {
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  const std::size_t left_count = adj.size();
  std::vector<std::size_t> match_left(left_count, kNone), match_right(right_count, kNone), dist(left_count);

  auto bfs = [&] {
    std::queue<std::size_t> q;
    bool found = false;
    for (std::size_t u = 0; u < left_count; ++u) {
      if (match_left[u] == kNone) {
        dist[u] = 0;
        q.push(u);
      } else {
        dist[u] = kNone;
      }
    }
    while (!q.empty()) {
      std::size_t u = q.front();
      q.pop();
      for (std::size_t v : adj[u]) {
        std::size_t w = match_right[v];
        if (w == kNone)
          found = true;
        else if (dist[w] == kNone) {
          dist[w] = dist[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  };
  std::function<bool(std::size_t)> dfs = [&](std::size_t u) {
    for (std::size_t v : adj[u]) {
      std::size_t w = match_right[v];
      if (w == kNone || (dist[w] == dist[u] + 1 && dfs(w))) {
        match_left[u] = v;
        match_right[v] = u;
        return true;
      }
    }
    dist[u] = kNone;
    return false;
  };
  while (bfs())
    for (std::size_t u = 0; u < left_count; ++u)
      if (match_left[u] == kNone) dfs(u);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t u = 0; u < left_count; ++u)
    if (match_left[u] != kNone) pairs.emplace_back(u, match_left[u]);
  return pairs;
}

std::vector<std::pair<std::size_t, std::size_t>> Evaluator::matching_pairs(
    std::size_t right_count, const std::vector<std::vector<std::size_t>>& adjacency) {
  return hopcroft_karp(right_count, adjacency);
}

}  // namespace

std::vector<std::string> quantifier_domain(const WorldState& world, const KnowledgeBase& kb, const std::string& synset) {
  std::vector<std::string> out;
  if (kb.is_substance(synset)) {
    std::set<std::string> keys;
    for (const auto& [key, sys] : world.substances)
      if (kb.is_a(key, synset)) keys.insert(key);
    if (kb.is_leaf(synset)) keys.insert(synset);
    out.assign(keys.begin(), keys.end());
  }
  for (const auto& [id, o] : world.objects)
    if (o.real && kb.contains(o.synset) && kb.is_a(o.synset, synset)) out.push_back(id);
  return out;
}

std::size_t maximum_matching(std::size_t right_count, const std::vector<std::vector<std::size_t>>& adjacency) {
  return hopcroft_karp(right_count, adjacency).size();
}

bool goal_satisfied(const WorldState& world, const KnowledgeBase& kb, const Grounding& grounding, const Formula& goal) {
  Evaluator ev(world, kb, grounding);
  Env env;
  return ev.eval(goal, env);
}

double q_score(const WorldState& world, const KnowledgeBase& kb, const Grounding& grounding, const Formula& goal) {
  Formula f = is_normalized(goal) ? goal : normalize(goal);
  Evaluator ev(world, kb, grounding);
  Env env;
  Profile p = ev.profile(f, env);
  double best = 0.0;
  for (const auto& [t, s] : p) best = std::max(best, t == 0 ? 1.0 : static_cast<double>(s) / static_cast<double>(t));
  return best;
}

GoalEvaluation evaluate_goal(const WorldState& world, const KnowledgeBase& kb, const Grounding& grounding,
                             const Formula& goal) {
  Formula f = is_normalized(goal) ? goal : normalize(goal);
  return {goal_satisfied(world, kb, grounding, f), q_score(world, kb, grounding, f)};
}

}  // namespace bddl
