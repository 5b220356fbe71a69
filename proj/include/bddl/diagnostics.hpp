#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bddl {

struct SourceLocation {
  int line = 0;
  int column = 0;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;  // stable kebab-case identifier, e.g. "substance-multiplicity"
  std::string message;
  SourceLocation location;
};

using DiagnosticList = std::vector<Diagnostic>;

bool has_errors(const DiagnosticList& diagnostics);
std::string to_string(Severity severity);
std::string format(const Diagnostic& diagnostic);

// Thrown by the lexer/parser; carries the offending location.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, SourceLocation location);

  const SourceLocation& location() const { return location_; }
  const std::string& bare_message() const { return bare_; }

 private:
  std::string bare_;
  SourceLocation location_;
};

}  // namespace bddl
