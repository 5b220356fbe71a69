#include "bddl/property.hpp"

#include <array>

namespace bddl {
namespace {

constexpr std::array<std::string_view, kPropertyCount> kNames{
    "assembleable",  "breakable",       "cleaningTool",   "cloth",
    "coldSource",    "cookable",        "fillable",       "fireSource",
    "flammable",     "heatSource",      "liquid",         "macroPhysicalSubstance",
    "meltable",      "microPhysicalSubstance", "mixingTool", "needsOrientation",
    "openable",      "particleApplier", "particleRemover", "particleSink",
    "particleSource", "physicalSubstance", "rigidBody",   "rope",
    "sliceable",     "slicingTool",     "softBody",       "toggleable",
    "visualSubstance", "waterCook",     "waterSource",    "deformable",
    "diceable",      "drapeable",       "foldable",       "freezable",
    "heatable",      "substance",       "unfoldable",
};

}  // namespace

std::string_view property_name(Property p) { return kNames[static_cast<std::size_t>(p)]; }

std::optional<Property> parse_property(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (kNames[i] == name) return static_cast<Property>(i);
  return std::nullopt;
}

bool is_derived(Property p) { return p >= Property::Deformable; }

std::vector<Property> PropertySet::to_vector() const {
  std::vector<Property> out;
  for (std::size_t i = 0; i < kPropertyCount; ++i)
    if (bits_.test(i)) out.push_back(static_cast<Property>(i));
  return out;
}

std::vector<std::string> PropertySet::names() const {
  std::vector<std::string> out;
  for (Property p : to_vector()) out.emplace_back(property_name(p));
  return out;
}

std::string_view substance_kind_name(SubstanceKind k) {
  switch (k) {
    case SubstanceKind::Liquid: return "liquid";
    case SubstanceKind::VisualSubstance: return "visualSubstance";
    case SubstanceKind::MicroPhysicalSubstance: return "microPhysicalSubstance";
    case SubstanceKind::MacroPhysicalSubstance: return "macroPhysicalSubstance";
  }
  return "liquid";
}

std::optional<SubstanceKind> parse_substance_kind(std::string_view name) {
  for (auto k : {SubstanceKind::Liquid, SubstanceKind::VisualSubstance, SubstanceKind::MicroPhysicalSubstance,
                 SubstanceKind::MacroPhysicalSubstance})
    if (substance_kind_name(k) == name) return k;
  return std::nullopt;
}

}  // namespace bddl
