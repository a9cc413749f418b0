#pragma once

#include <map>
#include <optional>
#include <string_view>

#include "sbp/tdl/ast.hpp"

namespace sbp::tdl {

// Total parse: always returns diagnostics; an Ast only when there were no
// errors. Grammar in docs/formats.md.
ParseResult parse(std::string_view source);

// Parses a single expression (used for macro templates in scenario files).
struct ExprParseResult {
  ExprPtr expr;
  std::vector<Diagnostic> diagnostics;
};
ExprParseResult parse_expression(std::string_view source);

// Static checks: unbound binders, unknown builtins, unknown macros / arity
// mismatches (when a macro table is supplied), await shape, unreachable code.
struct CheckContext {
  // name -> arity; when absent, macro invocations are not checked.
  std::optional<std::map<Name, std::size_t>> macros;
  // extra binders visible to the program (macro template parameters)
  std::vector<Name> ambient_binders;
};
std::vector<Diagnostic> check(const Ast& ast, const CheckContext& ctx = {});
std::vector<Diagnostic> check_expression(const Expr& expr, const CheckContext& ctx = {});

// Canonical source form; parse(pretty_print(parse(s))) is structurally
// identical to parse(s).
std::string pretty_print(const Ast& ast);

bool expr_uses_random(const Expr& expr);

// Structural AST equality (spans ignored) — used by round-trip tests.
bool same_structure(const Ast& a, const Ast& b);

}  // namespace sbp::tdl
