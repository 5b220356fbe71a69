#include "bddl/diagnostics.hpp"

#include <algorithm>

namespace bddl {

bool has_errors(const DiagnosticList& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::string to_string(Severity severity) { return severity == Severity::Error ? "error" : "warning"; }

std::string format(const Diagnostic& d) {
  std::string out = to_string(d.severity);
  if (d.location.line > 0) out += " " + std::to_string(d.location.line) + ":" + std::to_string(d.location.column);
  out += " [" + d.code + "] " + d.message;
  return out;
}

ParseError::ParseError(const std::string& message, SourceLocation location)
    : std::runtime_error(std::to_string(location.line) + ":" + std::to_string(location.column) + ": " + message),
      bare_(message),
      location_(location) {}

}  // namespace bddl
