#pragma once

#include <span>
#include <string_view>

#include "bddl/activity.hpp"
#include "bddl/diagnostics.hpp"
#include "bddl/kb.hpp"

namespace bddl {

// Room types recognised by the scene schema.
std::span<const std::string_view> known_room_types();
bool is_known_room_type(std::string_view type);

struct CanonicalActivity {
  ActivityDefinition definition;
  DiagnosticList diagnostics;
};

// Resolves the definition against a kb:
//  - binary substance predicates (filled, empty, covered, soaked, insource)
//    are reordered to (object, substance) with a warning;
//  - undeclared but well-formed instance ids get an implicit declaration
//    with a warning;
//  - init literals and the goal are normalized (three-valued complements).
// Never throws; problems it cannot resolve are left for validate_problem.
CanonicalActivity canonicalize(const ActivityDefinition& def, const KnowledgeBase& kb);

// Static checks. Works on the canonical form internally, so its diagnostics
// include the canonicalization warnings. Empty list (or warnings only) means
// the definition is usable.
DiagnosticList validate_problem(const ActivityDefinition& def, const KnowledgeBase& kb);

}  // namespace bddl
