#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bddl/diagnostics.hpp"

namespace bddl {

// A node of an s-expression tree: either an atom (symbol) or a list.
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  SourceLocation location;

  bool is_atom() const { return !is_list; }
  bool is_atom(std::string_view text) const { return !is_list && atom == text; }
};

// Reads every top-level expression in `text`. `;` starts a comment that runs
// to the end of the line. Throws ParseError on unbalanced parentheses.
std::vector<SExpr> read_sexprs(std::string_view text);

}  // namespace bddl
