#include "bddl/predicate_table.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace bddl {
namespace {

using P = Predicate;
using R = ArgRole;
using C = PredicateClass;
using Pr = Property;

constexpr std::optional<Property> none = std::nullopt;

const std::array<PredicateSpec, 35> kSpecs{{
    {P::InsideOf, "InsideOf", "inside", 2, R::Object, R::Object, none, C::Kinematic, false, std::nullopt},
    {P::OnTopOf, "OnTopOf", "ontop", 2, R::Object, R::Object, none, C::Kinematic, false, std::nullopt},
    {P::NextTo, "NextTo", "nextto", 2, R::Object, R::Object, none, C::Kinematic, false, std::nullopt},
    {P::InContactWith, "InContactWith", "touching", 2, R::Object, R::Object, none, C::Kinematic, false, std::nullopt},
    {P::ConnectedWith, "ConnectedWith", "attached", 2, R::Object, R::Object, none, C::Kinematic, false, std::nullopt},
    {P::Under, "Under", "under", 2, R::Object, R::Object, none, C::Kinematic, false, std::nullopt},
    {P::OnFloor, "OnFloor", "onfloor", 2, R::Object, R::Object, none, C::Kinematic, false, std::nullopt},
    {P::Open, "Open", "open", 1, R::Object, R::Any, Pr::Openable, C::State, false, P::Closed},
    {P::Closed, "Closed", "closed", 1, R::Object, R::Any, Pr::Openable, C::State, false, P::Open},
    {P::Cooked, "Cooked", "cooked", 1, R::Object, R::Any, Pr::Cookable, C::State, false, std::nullopt},
    {P::Burnt, "Burnt", "burnt", 1, R::Object, R::Any, Pr::Cookable, C::State, false, std::nullopt},
    {P::OnFire, "OnFire", "on_fire", 1, R::Object, R::Any, Pr::Flammable, C::State, false, std::nullopt},
    {P::Frozen, "Frozen", "frozen", 1, R::Object, R::Any, Pr::Freezable, C::State, false, std::nullopt},
    {P::Heated, "Heated", "hot", 1, R::Object, R::Any, Pr::Heatable, C::State, false, std::nullopt},
    {P::Boiled, "Boiled", "boiled", 1, R::Liquid, R::Any, none, C::Substance, false, std::nullopt},
    {P::Soaked, "Soaked", "saturated", 2, R::Object, R::Liquid, Pr::ParticleRemover, C::Substance, false, std::nullopt},
    {P::Filled, "Filled", "filled", 2, R::Object, R::Substance, Pr::Fillable, C::Substance, false, P::Empty},
    {P::Empty, "Empty", "empty", 2, R::Object, R::Substance, Pr::Fillable, C::Substance, false, P::Filled},
    {P::Covered, "Covered", "covered", 2, R::Object, R::Substance, none, C::Substance, false, std::nullopt},
    {P::ToggledOn, "ToggledOn", "toggled_on", 1, R::Object, R::Any, Pr::Toggleable, C::State, false, std::nullopt},
    {P::Sliced, "Sliced", "sliced", 1, R::Object, R::Any, Pr::Sliceable, C::State, false, std::nullopt},
    {P::Broken, "Broken", "broken", 1, R::Object, R::Any, Pr::Breakable, C::State, false, std::nullopt},
    {P::Folded, "Folded", "folded", 1, R::Object, R::Any, Pr::Foldable, C::State, false, P::Unfolded},
    {P::Unfolded, "Unfolded", "unfolded", 1, R::Object, R::Any, Pr::Unfoldable, C::State, false, P::Folded},
    {P::Assembled, "Assembled", "assembled", 1, R::Object, R::Any, Pr::Assembleable, C::State, false, std::nullopt},
    {P::Hung, "Hung", "hung", 2, R::Object, R::Object, none, C::State, false, std::nullopt},
    {P::Blended, "Blended", "blended", -1, R::Any, R::Any, none, C::State, false, std::nullopt},
    {P::InFoVOfAgent, "InFoVOfAgent", "infovofagent", 1, R::Object, R::Any, none, C::Agent, false, std::nullopt},
    {P::InHandOfAgent, "InHandOfAgent", "inhandofagent", 1, R::Object, R::Any, none, C::Agent, false, std::nullopt},
    {P::InReachOfAgent, "InReachOfAgent", "inreachofagent", 1, R::Object, R::Any, none, C::Agent, false, std::nullopt},
    {P::InSameRoomAsAgent, "InSameRoomAsAgent", "insameroomasagent", 1, R::Object, R::Any, none, C::Agent, false,
     std::nullopt},
    {P::Real, "Real", "real", 1, R::Any, R::Any, none, C::Meta, false, std::nullopt},
    {P::Future, "Future", "future", 1, R::Any, R::Any, none, C::Meta, true, std::nullopt},
    {P::InSource, "InSource", "insource", 2, R::Object, R::Substance, Pr::ParticleApplier, C::Substance, true,
     std::nullopt},
    {P::InRoom, "InRoom", "inroom", 2, R::Object, R::RoomType, none, C::Meta, true, std::nullopt},
}};

const std::array<PredicateAlias, 41> kAliases{{
    {"inside", P::InsideOf},
    {"ontop", P::OnTopOf},
    {"nextto", P::NextTo},
    {"touching", P::InContactWith},
    {"attached", P::ConnectedWith},
    {"under", P::Under},
    {"onfloor", P::OnFloor},
    {"open", P::Open},
    {"closed", P::Closed},
    {"cooked", P::Cooked},
    {"burnt", P::Burnt},
    {"on_fire", P::OnFire},
    {"frozen", P::Frozen},
    {"hot", P::Heated},
    {"heated", P::Heated},
    {"boiled", P::Boiled},
    {"saturated", P::Soaked},
    {"soaked", P::Soaked},
    {"filled", P::Filled},
    {"empty", P::Empty},
    {"covered", P::Covered},
    {"toggled_on", P::ToggledOn},
    {"sliced", P::Sliced},
    {"broken", P::Broken},
    {"folded", P::Folded},
    {"unfolded", P::Unfolded},
    {"assembled", P::Assembled},
    {"hung", P::Hung},
    {"blended", P::Blended},
    {"infovofagent", P::InFoVOfAgent},
    {"inhandofagent", P::InHandOfAgent},
    {"inreachofagent", P::InReachOfAgent},
    {"insameroomasagent", P::InSameRoomAsAgent},
    {"real", P::Real},
    {"future", P::Future},
    {"insource", P::InSource},
    {"inroom", P::InRoom},
    {"connected", P::ConnectedWith},
    {"incontact", P::InContactWith},
    {"onfire", P::OnFire},
    {"toggledon", P::ToggledOn},
}};

}  // namespace

std::span<const PredicateSpec> predicate_specs() { return kSpecs; }

const PredicateSpec& spec_of(Predicate p) {
  const auto& s = kSpecs[static_cast<std::size_t>(p)];
  if (s.id != p) throw std::logic_error("predicate table out of order");
  return s;
}

std::optional<Predicate> lookup_predicate(std::string_view name) {
  for (const auto& a : kAliases)
    if (a.alias == name) return a.predicate;
  for (const auto& s : kSpecs)
    if (s.canonical == name) return s.id;
  return std::nullopt;
}

std::string_view canonical_name(Predicate p) { return spec_of(p).canonical; }
std::string_view bddl_name(Predicate p) { return spec_of(p).bddl; }

ArgRole arg_role(Predicate p, std::size_t index) {
  const auto& s = spec_of(p);
  if (s.arity < 0) return s.first;
  return index == 0 ? s.first : s.second;
}

std::span<const PredicateAlias> predicate_aliases() { return kAliases; }

}  // namespace bddl
