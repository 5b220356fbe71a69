#pragma once

#include <bitset>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bddl {

// Object-category properties. The first block is annotated on leaf synsets;
// the second block is derived programmatically and never trusted from input.
enum class Property : std::uint8_t {
  Assembleable,
  Breakable,
  CleaningTool,
  Cloth,
  ColdSource,
  Cookable,
  Fillable,
  FireSource,
  Flammable,
  HeatSource,
  Liquid,
  MacroPhysicalSubstance,
  Meltable,
  MicroPhysicalSubstance,
  MixingTool,
  NeedsOrientation,
  Openable,
  ParticleApplier,
  ParticleRemover,
  ParticleSink,
  ParticleSource,
  PhysicalSubstance,
  RigidBody,
  Rope,
  Sliceable,
  SlicingTool,
  SoftBody,
  Toggleable,
  VisualSubstance,
  WaterCook,
  WaterSource,
  // derived
  Deformable,
  Diceable,
  Drapeable,
  Foldable,
  Freezable,
  Heatable,
  Substance,
  Unfoldable,
  Count_
};

inline constexpr std::size_t kPropertyCount = static_cast<std::size_t>(Property::Count_);

std::string_view property_name(Property p);
std::optional<Property> parse_property(std::string_view name);
bool is_derived(Property p);

class PropertySet {
 public:
  PropertySet() = default;
  PropertySet(std::initializer_list<Property> props) {
    for (Property p : props) insert(p);
  }

  static PropertySet all() {
    PropertySet s;
    s.bits_.set();
    return s;
  }

  bool contains(Property p) const { return bits_.test(index(p)); }
  void insert(Property p) { bits_.set(index(p)); }
  void erase(Property p) { bits_.reset(index(p)); }
  bool empty() const { return bits_.none(); }
  std::size_t size() const { return bits_.count(); }

  PropertySet& operator&=(const PropertySet& o) {
    bits_ &= o.bits_;
    return *this;
  }
  friend PropertySet operator&(PropertySet a, const PropertySet& b) { return a &= b; }
  friend bool operator==(const PropertySet&, const PropertySet&) = default;

  bool is_subset_of(const PropertySet& o) const { return (bits_ & ~o.bits_).none(); }

  std::vector<Property> to_vector() const;
  std::vector<std::string> names() const;

 private:
  static std::size_t index(Property p) { return static_cast<std::size_t>(p); }
  std::bitset<kPropertyCount> bits_;
};

enum class SubstanceKind { Liquid, VisualSubstance, MicroPhysicalSubstance, MacroPhysicalSubstance };

std::string_view substance_kind_name(SubstanceKind k);
std::optional<SubstanceKind> parse_substance_kind(std::string_view name);
inline bool is_physical(SubstanceKind k) {
  return k == SubstanceKind::MicroPhysicalSubstance || k == SubstanceKind::MacroPhysicalSubstance;
}

}  // namespace bddl
