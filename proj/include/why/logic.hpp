#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "why/diag.hpp"

namespace why {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Same symbol declared with two different profiles.
struct SignatureError : Error {
  using Error::Error;
};

// Ill-sorted formula/term or sort-violating binding.
struct SortError : Error {
  using Error::Error;
};

struct TheoryError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Signatures
// ---------------------------------------------------------------------------

struct FuncDecl {
  std::vector<std::string> args;  // empty for constants
  std::string result;
  bool operator==(const FuncDecl&) const = default;
};

struct RelDecl {
  std::vector<std::string> args;  // empty for propositional atoms
  bool operator==(const RelDecl&) const = default;
};

// Many-sorted signature. Symbol names are globally unique across sorts,
// functions and relations so that concrete syntax stays unambiguous.
class Signature {
 public:
  void add_sort(const std::string& name);
  void add_function(const std::string& name, std::vector<std::string> args,
                    std::string result);
  void add_constant(const std::string& name, const std::string& sort);
  void add_relation(const std::string& name, std::vector<std::string> args);

  bool has_sort(const std::string& name) const { return sorts_.count(name) > 0; }
  const FuncDecl* function(const std::string& name) const;
  const RelDecl* relation(const std::string& name) const;
  bool has_symbol(const std::string& name) const;

  const std::set<std::string>& sorts() const { return sorts_; }
  const std::map<std::string, FuncDecl>& functions() const { return functions_; }
  const std::map<std::string, RelDecl>& relations() const { return relations_; }

  bool operator==(const Signature&) const = default;

 private:
  void check_fresh(const std::string& name) const;
  std::set<std::string> sorts_;
  std::map<std::string, FuncDecl> functions_;
  std::map<std::string, RelDecl> relations_;
};

// Union of two signatures; shared names must have identical profiles.
Signature signature_union(const Signature& a, const Signature& b);

// ---------------------------------------------------------------------------
// Terms and formulas
// ---------------------------------------------------------------------------

struct Term {
  enum class Kind { Var, App };

  Kind kind = Kind::Var;
  std::string name;
  std::string var_sort;    // Var only
  std::vector<Term> args;  // App only

  static Term var(std::string name, std::string sort);
  static Term app(std::string fn, std::vector<Term> args = {});
};

bool operator==(const Term& a, const Term& b);
inline bool operator!=(const Term& a, const Term& b) { return !(a == b); }

struct Formula {
  enum class Kind { Rel, Eq, Not, And, Or, Implies, Iff, Forall, Exists };

  Kind kind = Kind::Rel;
  std::string name;            // Rel: symbol; Forall/Exists: bound variable
  std::string sort;            // quantifier variable sort
  std::vector<Term> terms;     // Rel arguments; Eq: exactly [lhs, rhs]
  std::vector<Formula> kids;   // Not: 1; And/Or/Implies/Iff: 2; quantifiers: 1

  static Formula rel(std::string name, std::vector<Term> args = {});
  static Formula eq(Term lhs, Term rhs);
  static Formula neg(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);
  static Formula forall(std::string var, std::string sort, Formula body);
  static Formula exists(std::string var, std::string sort, Formula body);

  bool is_quantifier() const {
    return kind == Kind::Forall || kind == Kind::Exists;
  }
};

bool operator==(const Formula& a, const Formula& b);
inline bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

struct NamedFormula {
  std::string label;
  Formula formula;
};

// ---------------------------------------------------------------------------
// Theories
// ---------------------------------------------------------------------------

// A named, finite, ordered list of named axioms. Deliberately not closed
// under consequence; membership questions are answered modulo
// alpha-equivalence of canonicalized formulas.
class Theory {
 public:
  Theory() = default;
  Theory(std::string name, Signature sig);

  // Rejects duplicate labels, alpha-duplicate formulas and ill-sorted input.
  void add_axiom(const std::string& label, Formula f);

  const std::string& name() const { return name_; }
  const Signature& signature() const { return sig_; }
  const std::vector<NamedFormula>& axioms() const { return axioms_; }

  const NamedFormula* find(const std::string& label) const;
  // Label of an axiom alpha-equal to f, if any.
  std::optional<std::string> contains_alpha(const Formula& f) const;

  void set_name(std::string name) { name_ = std::move(name); }

 private:
  std::string name_;
  Signature sig_;
  std::vector<NamedFormula> axioms_;
  std::vector<Formula> canon_;  // canonical forms, same order as axioms_
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

using Binding = std::map<std::string, Term>;

// Sort of a term under sig, or nullopt if ill-sorted/undeclared.
std::optional<std::string> term_sort(const Signature& sig, const Term& t);

// All sorting violations of f over sig; empty iff f is well-sorted.
std::vector<SortDiagnostic> well_sorted(const Signature& sig, const Formula& f);

// Free variables (name -> sort) of a formula.
std::map<std::string, std::string> free_vars(const Formula& f);
std::map<std::string, std::string> term_vars(const Term& t);

// Capture-avoiding substitution of free variables. Bound variables are
// renamed where a binding target would otherwise be captured. Throws
// SortError when a binding target's sort differs from the variable's.
Term substitute(const Signature& sig, const Term& t, const Binding& b);
Formula substitute(const Signature& sig, const Formula& f, const Binding& b);

// Canonical bound-variable renaming: alpha_equal(f, g) iff
// canonicalize(f) == canonicalize(g). Idempotent.
Formula canonicalize(const Formula& f);
bool alpha_equal(const Formula& a, const Formula& b);

// A fresh identifier based on `base` that avoids every name in `avoid`.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

// Replaces every axiom of shape forall-block over a conjunction by the
// quantified conjuncts, recursively; alpha-duplicates merged, labels suffixed.
Theory split_conjunctions(const Theory& th);

// Theory over the union signature holding both axiom lists (mod alpha),
// labels prefixed with their source theory's name.
Theory juxtapose(const Theory& t1, const Theory& t2);

}  // namespace why
