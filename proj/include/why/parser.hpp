#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "why/diag.hpp"
#include "why/logic.hpp"

namespace why {

struct TheoryParseResult {
  std::optional<Theory> theory;
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const { return theory.has_value(); }
};

struct FormulaParseResult {
  std::optional<Formula> formula;
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const { return formula.has_value(); }
};

// Concrete `.why` syntax:
//
//   theory    := "theory" IDENT "{" decls axioms "}"
//   decls     := ("sorts" IDENT ("," IDENT)* ";")? (funcdecl | preddecl)*
//   funcdecl  := "func" NAME ":" sortlist "->" IDENT ";"
//              | "const" IDENT ":" IDENT ";"
//   preddecl  := "pred" NAME (":" sortlist)? ";"
//   sortlist  := IDENT ("x" IDENT)*
//   axioms    := ("axiom" IDENT ":" formula ";")*
//
// NAME is an identifier or one of the builtin operator symbols + * <,
// which may be declared with their usual infix profiles. A predicate
// without a sortlist is propositional (0-ary). Formulas use
// ~ & | -> <-> with that precedence order, quantifiers
// ("forall"|"exists") v ":" sort ("," v ":" sort)* "." body (body extends
// maximally to the right), equality t = t, and the infix comparisons/terms
// t < t, t + t, t * t with * binding tighter than +.
// Line comments start with //.
TheoryParseResult parse_theory(std::string_view text,
                               std::string_view filename = "<input>");

FormulaParseResult parse_formula(std::string_view text, const Signature& sig,
                                 std::string_view filename = "<input>");

// Deterministic pretty-printing with minimal parentheses;
// parse_formula(render(f)) is alpha-equal (in fact equal) to f.
std::string render(const Term& t);
std::string render(const Formula& f);

// Serializes a whole theory in `.why` syntax (parseable by parse_theory).
std::string render_theory(const Theory& th);

}  // namespace why
