#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "why/diag.hpp"
#include "why/logic.hpp"

namespace why {

// Single-sorted relativization of a many-sorted theory: every sort becomes a
// unary guard predicate over one universe sort, quantifiers are guarded, and
// guard-nonemptiness plus function-closure axioms are added.
struct Relativized {
  Signature sig;  // one sort "U", guard predicates, mangled symbols untouched
  std::vector<NamedFormula> axioms;      // guarded axioms + support axioms
  std::optional<Formula> goal;           // guarded goal, when present
  std::map<std::string, std::string> guards;  // sort -> guard predicate
};

Relativized relativize(const Theory& th, const Formula* goal);

// First-order-form TPTP text: one fof(...) per axiom (role axiom) and the
// goal as role conjecture. Predicates/functions are lowercased, variables
// uppercased; the name-mangling table is emitted as comments.
std::string export_tptp(const Theory& th, const Formula* goal = nullptr);

// Well-formedness re-parse of TPTP produced by export_tptp: balanced
// structure, valid roles, unique names, closed formulas.
std::vector<ParseDiagnostic> tptp_check(std::string_view text);

}  // namespace why
