#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "bddl/property.hpp"

namespace bddl {

enum class Predicate {
  InsideOf,
  OnTopOf,
  NextTo,
  InContactWith,
  ConnectedWith,
  Under,
  OnFloor,
  Open,
  Closed,
  Cooked,
  Burnt,
  OnFire,
  Frozen,
  Heated,
  Boiled,
  Soaked,
  Filled,
  Empty,
  Covered,
  ToggledOn,
  Sliced,
  Broken,
  Folded,
  Unfolded,
  Assembled,
  Hung,
  Blended,
  InFoVOfAgent,
  InHandOfAgent,
  InReachOfAgent,
  InSameRoomAsAgent,
  Real,
  Future,
  InSource,
  InRoom,
};

enum class ArgRole {
  Object,     // a non-substance instance
  Substance,  // any substance synset instance
  Liquid,     // a liquid substance instance
  RoomType,   // a bare room-type token, not an instance
  Any,
};

enum class PredicateClass { Kinematic, State, Substance, Agent, Meta };

struct PredicateSpec {
  Predicate id;
  std::string_view canonical;  // e.g. "OnTopOf"
  std::string_view bddl;       // serialized spelling, e.g. "ontop"
  int arity;                   // -1: variadic with at least two arguments
  ArgRole first;
  ArgRole second;
  std::optional<Property> requires_property;  // on the first argument
  PredicateClass category;
  bool init_only;
  std::optional<Predicate> complement;  // three-valued partner
};

std::span<const PredicateSpec> predicate_specs();
const PredicateSpec& spec_of(Predicate p);

// Accepts every BDDL spelling in the alias table plus the canonical names.
std::optional<Predicate> lookup_predicate(std::string_view name);

std::string_view canonical_name(Predicate p);
std::string_view bddl_name(Predicate p);
ArgRole arg_role(Predicate p, std::size_t index);

// Every (alias -> canonical) pair, for documentation and the CLI dump.
struct PredicateAlias {
  std::string_view alias;
  Predicate predicate;
};
std::span<const PredicateAlias> predicate_aliases();

inline bool is_kinematic(Predicate p) { return spec_of(p).category == PredicateClass::Kinematic; }

}  // namespace bddl
