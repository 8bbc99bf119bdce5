#include "why/logic.hpp"

#include <algorithm>
#include <sstream>

namespace why {

// ---------------------------------------------------------------------------
// Signature
// ---------------------------------------------------------------------------

void Signature::check_fresh(const std::string& name) const {
  if (name.empty()) throw SignatureError("empty symbol name");
  if (functions_.count(name) || relations_.count(name) || sorts_.count(name))
    throw SignatureError("symbol '" + name + "' already declared");
}

void Signature::add_sort(const std::string& name) {
  if (name.empty()) throw SignatureError("empty sort name");
  if (functions_.count(name) || relations_.count(name))
    throw SignatureError("symbol '" + name + "' already declared");
  sorts_.insert(name);
}

void Signature::add_function(const std::string& name,
                             std::vector<std::string> args,
                             std::string result) {
  check_fresh(name);
  for (const auto& s : args)
    if (!has_sort(s)) throw SignatureError("undeclared sort '" + s + "' in profile of '" + name + "'");
  if (!has_sort(result))
    throw SignatureError("undeclared sort '" + result + "' in profile of '" + name + "'");
  functions_[name] = FuncDecl{std::move(args), std::move(result)};
}

void Signature::add_constant(const std::string& name, const std::string& sort) {
  add_function(name, {}, sort);
}

void Signature::add_relation(const std::string& name, std::vector<std::string> args) {
  check_fresh(name);
  for (const auto& s : args)
    if (!has_sort(s)) throw SignatureError("undeclared sort '" + s + "' in profile of '" + name + "'");
  relations_[name] = RelDecl{std::move(args)};
}

const FuncDecl* Signature::function(const std::string& name) const {
  auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : &it->second;
}

const RelDecl* Signature::relation(const std::string& name) const {
  auto it = relations_.find(name);
  return it == relations_.end() ? nullptr : &it->second;
}

bool Signature::has_symbol(const std::string& name) const {
  return functions_.count(name) || relations_.count(name) || sorts_.count(name);
}

Signature signature_union(const Signature& a, const Signature& b) {
  Signature u = a;
  for (const auto& s : b.sorts())
    if (!u.has_sort(s)) u.add_sort(s);
  for (const auto& [name, decl] : b.functions()) {
    if (const FuncDecl* have = u.function(name)) {
      if (!(*have == decl))
        throw SignatureError("profile conflict for function '" + name + "'");
    } else if (u.has_symbol(name)) {
      throw SignatureError("profile conflict for symbol '" + name + "'");
    } else {
      u.add_function(name, decl.args, decl.result);
    }
  }
  for (const auto& [name, decl] : b.relations()) {
    if (const RelDecl* have = u.relation(name)) {
      if (!(*have == decl))
        throw SignatureError("profile conflict for relation '" + name + "'");
    } else if (u.has_symbol(name)) {
      throw SignatureError("profile conflict for symbol '" + name + "'");
    } else {
      u.add_relation(name, decl.args);
    }
  }
  return u;
}

// ---------------------------------------------------------------------------
// Terms / formulas: constructors and structural equality
// ---------------------------------------------------------------------------

Term Term::var(std::string name, std::string sort) {
  Term t;
  t.kind = Kind::Var;
  t.name = std::move(name);
  t.var_sort = std::move(sort);
  return t;
}

Term Term::app(std::string fn, std::vector<Term> args) {
  Term t;
  t.kind = Kind::App;
  t.name = std::move(fn);
  t.args = std::move(args);
  return t;
}

bool operator==(const Term& a, const Term& b) {
  if (a.kind != b.kind || a.name != b.name) return false;
  if (a.kind == Term::Kind::Var) return a.var_sort == b.var_sort;
  if (a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!(a.args[i] == b.args[i])) return false;
  return true;
}

Formula Formula::rel(std::string name, std::vector<Term> args) {
  Formula f;
  f.kind = Kind::Rel;
  f.name = std::move(name);
  f.terms = std::move(args);
  return f;
}

Formula Formula::eq(Term lhs, Term rhs) {
  Formula f;
  f.kind = Kind::Eq;
  f.terms = {std::move(lhs), std::move(rhs)};
  return f;
}

static Formula unary(Formula::Kind k, Formula a) {
  Formula f;
  f.kind = k;
  f.kids.push_back(std::move(a));
  return f;
}

static Formula binary(Formula::Kind k, Formula a, Formula b) {
  Formula f;
  f.kind = k;
  f.kids.push_back(std::move(a));
  f.kids.push_back(std::move(b));
  return f;
}

Formula Formula::neg(Formula f) { return unary(Kind::Not, std::move(f)); }
Formula Formula::conj(Formula a, Formula b) { return binary(Kind::And, std::move(a), std::move(b)); }
Formula Formula::disj(Formula a, Formula b) { return binary(Kind::Or, std::move(a), std::move(b)); }
Formula Formula::implies(Formula a, Formula b) { return binary(Kind::Implies, std::move(a), std::move(b)); }
Formula Formula::iff(Formula a, Formula b) { return binary(Kind::Iff, std::move(a), std::move(b)); }

Formula Formula::forall(std::string var, std::string sort, Formula body) {
  Formula f;
  f.kind = Kind::Forall;
  f.name = std::move(var);
  f.sort = std::move(sort);
  f.kids.push_back(std::move(body));
  return f;
}

Formula Formula::exists(std::string var, std::string sort, Formula body) {
  Formula f;
  f.kind = Kind::Exists;
  f.name = std::move(var);
  f.sort = std::move(sort);
  f.kids.push_back(std::move(body));
  return f;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.kind != b.kind || a.name != b.name || a.sort != b.sort) return false;
  if (a.terms.size() != b.terms.size() || a.kids.size() != b.kids.size()) return false;
  for (size_t i = 0; i < a.terms.size(); ++i)
    if (!(a.terms[i] == b.terms[i])) return false;
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!(a.kids[i] == b.kids[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Sorting
// ---------------------------------------------------------------------------

std::optional<std::string> term_sort(const Signature& sig, const Term& t) {
  if (t.kind == Term::Kind::Var) {
    if (!sig.has_sort(t.var_sort)) return std::nullopt;
    return t.var_sort;
  }
  const FuncDecl* decl = sig.function(t.name);
  if (!decl || decl->args.size() != t.args.size()) return std::nullopt;
  for (size_t i = 0; i < t.args.size(); ++i) {
    auto s = term_sort(sig, t.args[i]);
    if (!s || *s != decl->args[i]) return std::nullopt;
  }
  return decl->result;
}

namespace {

// Checks a term, emitting diagnostics; returns its sort when determinable.
std::optional<std::string> check_term(const Signature& sig, const Term& t,
                                      const std::string& path,
                                      std::vector<SortDiagnostic>& out) {
  if (t.kind == Term::Kind::Var) {
    if (!sig.has_sort(t.var_sort)) {
      out.push_back({path, "variable '" + t.name + "' has undeclared sort '" + t.var_sort + "'"});
      return std::nullopt;
    }
    return t.var_sort;
  }
  const FuncDecl* decl = sig.function(t.name);
  if (!decl) {
    out.push_back({path, "unknown function symbol '" + t.name + "'"});
    return std::nullopt;
  }
  if (decl->args.size() != t.args.size()) {
    out.push_back({path, "function '" + t.name + "' expects " +
                             std::to_string(decl->args.size()) + " arguments, got " +
                             std::to_string(t.args.size())});
    return decl->result;
  }
  for (size_t i = 0; i < t.args.size(); ++i) {
    auto s = check_term(sig, t.args[i], path + "/" + t.name + ".arg" + std::to_string(i + 1), out);
    if (s && *s != decl->args[i])
      out.push_back({path, "argument " + std::to_string(i + 1) + " of '" + t.name +
                               "' has sort " + *s + ", expected " + decl->args[i]});
  }
  return decl->result;
}

void check_formula(const Signature& sig, const Formula& f, const std::string& path,
                   std::vector<SortDiagnostic>& out) {
  switch (f.kind) {
    case Formula::Kind::Rel: {
      const RelDecl* decl = sig.relation(f.name);
      if (!decl) {
        out.push_back({path, "unknown relation symbol '" + f.name + "'"});
        return;
      }
      if (decl->args.size() != f.terms.size()) {
        out.push_back({path, "relation '" + f.name + "' expects " +
                                 std::to_string(decl->args.size()) + " arguments, got " +
                                 std::to_string(f.terms.size())});
        return;
      }
      for (size_t i = 0; i < f.terms.size(); ++i) {
        auto s = check_term(sig, f.terms[i], path + "/" + f.name + ".arg" + std::to_string(i + 1), out);
        if (s && *s != decl->args[i])
          out.push_back({path, "argument " + std::to_string(i + 1) + " of '" + f.name +
                                   "' has sort " + *s + ", expected " + decl->args[i]});
      }
      return;
    }
    case Formula::Kind::Eq: {
      auto l = check_term(sig, f.terms[0], path + "/eq.lhs", out);
      auto r = check_term(sig, f.terms[1], path + "/eq.rhs", out);
      if (l && r && *l != *r)
        out.push_back({path, "equality between sorts " + *l + " and " + *r});
      return;
    }
    case Formula::Kind::Not:
      check_formula(sig, f.kids[0], path + "/not", out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff: {
      const char* tag = f.kind == Formula::Kind::And       ? "and"
                        : f.kind == Formula::Kind::Or      ? "or"
                        : f.kind == Formula::Kind::Implies ? "implies"
                                                           : "iff";
      check_formula(sig, f.kids[0], path + "/" + tag + ".1", out);
      check_formula(sig, f.kids[1], path + "/" + tag + ".2", out);
      return;
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      const char* tag = f.kind == Formula::Kind::Forall ? "forall" : "exists";
      if (!sig.has_sort(f.sort))
        out.push_back({path, std::string(tag) + " binds '" + f.name +
                                 "' at undeclared sort '" + f.sort + "'"});
      check_formula(sig, f.kids[0], path + "/" + tag + "(" + f.name + ")", out);
      return;
    }
  }
}

}  // namespace

std::vector<SortDiagnostic> well_sorted(const Signature& sig, const Formula& f) {
  std::vector<SortDiagnostic> out;
  check_formula(sig, f, "", out);
  return out;
}

// ---------------------------------------------------------------------------
// Variables, substitution, alpha
// ---------------------------------------------------------------------------

static void term_vars_rec(const Term& t, std::map<std::string, std::string>& out) {
  if (t.kind == Term::Kind::Var) {
    out.emplace(t.name, t.var_sort);
    return;
  }
  for (const Term& a : t.args) term_vars_rec(a, out);
}

std::map<std::string, std::string> term_vars(const Term& t) {
  std::map<std::string, std::string> out;
  term_vars_rec(t, out);
  return out;
}

static void free_vars_rec(const Formula& f, std::set<std::string>& bound,
                          std::map<std::string, std::string>& out) {
  switch (f.kind) {
    case Formula::Kind::Rel:
    case Formula::Kind::Eq:
      for (const Term& t : f.terms) {
        for (const auto& [name, sort] : term_vars(t))
          if (!bound.count(name)) out.emplace(name, sort);
      }
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      bool was_bound = bound.count(f.name) > 0;
      bound.insert(f.name);
      free_vars_rec(f.kids[0], bound, out);
      if (!was_bound) bound.erase(f.name);
      return;
    }
    default:
      for (const Formula& k : f.kids) free_vars_rec(k, bound, out);
      return;
  }
}

std::map<std::string, std::string> free_vars(const Formula& f) {
  std::map<std::string, std::string> out;
  std::set<std::string> bound;
  free_vars_rec(f, bound, out);
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string candidate = base;
  while (avoid.count(candidate)) candidate += "'";
  return candidate;
}

Term substitute(const Signature& sig, const Term& t, const Binding& b) {
  if (t.kind == Term::Kind::Var) {
    auto it = b.find(t.name);
    if (it == b.end()) return t;
    auto s = term_sort(sig, it->second);
    if (!s || *s != t.var_sort)
      throw SortError("binding for '" + t.name + "' has sort " + (s ? *s : "?") +
                      ", expected " + t.var_sort);
    return it->second;
  }
  Term out = t;
  for (Term& a : out.args) a = substitute(sig, a, b);
  return out;
}

Formula substitute(const Signature& sig, const Formula& f, const Binding& b) {
  if (b.empty()) return f;
  switch (f.kind) {
    case Formula::Kind::Rel:
    case Formula::Kind::Eq: {
      Formula out = f;
      for (Term& t : out.terms) t = substitute(sig, t, b);
      return out;
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      Binding inner = b;
      inner.erase(f.name);
      // Rename the bound variable when some binding target mentions it free.
      bool capture = false;
      for (const auto& [from, to] : inner) {
        (void)from;
        if (term_vars(to).count(f.name)) {
          capture = true;
          break;
        }
      }
      Formula out = f;
      if (capture) {
        std::set<std::string> avoid;
        for (const auto& [name, sort] : free_vars(f.kids[0])) avoid.insert(name);
        for (const auto& [from, to] : inner) {
          avoid.insert(from);
          for (const auto& [name, sort] : term_vars(to)) avoid.insert(name);
        }
        std::string renamed = fresh_name(f.name + "'", avoid);
        Binding rename{{f.name, Term::var(renamed, f.sort)}};
        out.name = renamed;
        out.kids[0] = substitute(sig, f.kids[0], rename);
      }
      if (!inner.empty()) out.kids[0] = substitute(sig, out.kids[0], inner);
      return out;
    }
    default: {
      Formula out = f;
      for (Formula& k : out.kids) k = substitute(sig, k, b);
      return out;
    }
  }
}

namespace {

struct CanonState {
  int counter = 0;
  const std::set<std::string>* avoid = nullptr;

  std::string next() {
    for (;;) {
      std::string name = "V" + std::to_string(counter++);
      if (!avoid->count(name)) return name;
    }
  }
};

Term rename_term(const Term& t, const std::map<std::string, std::string>& env) {
  if (t.kind == Term::Kind::Var) {
    auto it = env.find(t.name);
    if (it == env.end()) return t;
    return Term::var(it->second, t.var_sort);
  }
  Term out = t;
  for (Term& a : out.args) a = rename_term(a, env);
  return out;
}

Formula canon_rec(const Formula& f, std::map<std::string, std::string> env,
                  CanonState& st) {
  switch (f.kind) {
    case Formula::Kind::Rel:
    case Formula::Kind::Eq: {
      Formula out = f;
      for (Term& t : out.terms) t = rename_term(t, env);
      return out;
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      Formula out = f;
      std::string name = st.next();
      env[f.name] = name;
      out.name = name;
      out.kids[0] = canon_rec(f.kids[0], env, st);
      return out;
    }
    default: {
      Formula out = f;
      for (size_t i = 0; i < f.kids.size(); ++i)
        out.kids[i] = canon_rec(f.kids[i], env, st);
      return out;
    }
  }
}

}  // namespace

Formula canonicalize(const Formula& f) {
  std::set<std::string> avoid;
  for (const auto& [name, sort] : free_vars(f)) avoid.insert(name);
  CanonState st;
  st.avoid = &avoid;
  return canon_rec(f, {}, st);
}

bool alpha_equal(const Formula& a, const Formula& b) {
  return canonicalize(a) == canonicalize(b);
}

// ---------------------------------------------------------------------------
// Theory
// ---------------------------------------------------------------------------

Theory::Theory(std::string name, Signature sig)
    : name_(std::move(name)), sig_(std::move(sig)) {}

void Theory::add_axiom(const std::string& label, Formula f) {
  if (label.empty()) throw TheoryError("empty axiom label");
  if (find(label)) throw TheoryError("duplicate axiom label '" + label + "'");
  auto diags = well_sorted(sig_, f);
  if (!diags.empty())
    throw SortError("axiom '" + label + "' is not well-sorted: " + diags.front().message +
                    " (at " + diags.front().path + ")");
  Formula canon = canonicalize(f);
  for (size_t i = 0; i < canon_.size(); ++i)
    if (canon_[i] == canon)
      throw TheoryError("axiom '" + label + "' duplicates '" + axioms_[i].label +
                        "' up to renaming of bound variables");
  axioms_.push_back(NamedFormula{label, std::move(f)});
  canon_.push_back(std::move(canon));
}

const NamedFormula* Theory::find(const std::string& label) const {
  for (const auto& ax : axioms_)
    if (ax.label == label) return &ax;
  return nullptr;
}

std::optional<std::string> Theory::contains_alpha(const Formula& f) const {
  Formula canon = canonicalize(f);
  for (size_t i = 0; i < canon_.size(); ++i)
    if (canon_[i] == canon) return axioms_[i].label;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// split_conjunctions / juxtapose
// ---------------------------------------------------------------------------

namespace {

// Strips a leading block of universal quantifiers; returns (prefix, core).
std::pair<std::vector<std::pair<std::string, std::string>>, const Formula*>
strip_forall_block(const Formula& f) {
  std::vector<std::pair<std::string, std::string>> prefix;
  const Formula* cur = &f;
  while (cur->kind == Formula::Kind::Forall) {
    prefix.emplace_back(cur->name, cur->sort);
    cur = &cur->kids[0];
  }
  return {prefix, cur};
}

Formula rewrap(const std::vector<std::pair<std::string, std::string>>& prefix,
               Formula core) {
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    core = Formula::forall(it->first, it->second, std::move(core));
  return core;
}

void split_rec(const Formula& f, std::vector<Formula>& out) {
  auto [prefix, core] = strip_forall_block(f);
  if (core->kind == Formula::Kind::And) {
    split_rec(rewrap(prefix, core->kids[0]), out);
    split_rec(rewrap(prefix, core->kids[1]), out);
    return;
  }
  out.push_back(f);
}

}  // namespace

Theory split_conjunctions(const Theory& th) {
  Theory out(th.name() + "_split", th.signature());
  for (const auto& ax : th.axioms()) {
    std::vector<Formula> parts;
    split_rec(ax.formula, parts);
    for (size_t i = 0; i < parts.size(); ++i) {
      if (out.contains_alpha(parts[i])) continue;
      std::string label =
          parts.size() == 1 ? ax.label : ax.label + "_" + std::to_string(i + 1);
      out.add_axiom(label, std::move(parts[i]));
    }
  }
  return out;
}

Theory juxtapose(const Theory& t1, const Theory& t2) {
  Signature sig = signature_union(t1.signature(), t2.signature());
  Theory out(t1.name() + "_" + t2.name(), std::move(sig));
  for (const Theory* src : {&t1, &t2}) {
    for (const auto& ax : src->axioms()) {
      if (out.contains_alpha(ax.formula)) continue;
      out.add_axiom(src->name() + "_" + ax.label, ax.formula);
    }
  }
  return out;
}

}  // namespace why
