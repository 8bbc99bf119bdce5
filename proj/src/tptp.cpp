#include "why/tptp.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace why {

namespace {

const char* kUniverse = "U";

Term to_universe(const Term& t) {
  if (t.kind == Term::Kind::Var) return Term::var(t.name, kUniverse);
  Term out = t;
  for (Term& a : out.args) a = to_universe(a);
  return out;
}

Formula guard_formula(const Formula& f, const std::map<std::string, std::string>& guards) {
  switch (f.kind) {
    case Formula::Kind::Rel:
    case Formula::Kind::Eq: {
      Formula out = f;
      for (Term& t : out.terms) t = to_universe(t);
      return out;
    }
    case Formula::Kind::Forall: {
      Formula guard = Formula::rel(guards.at(f.sort), {Term::var(f.name, kUniverse)});
      return Formula::forall(f.name, kUniverse,
                             Formula::implies(std::move(guard), guard_formula(f.kids[0], guards)));
    }
    case Formula::Kind::Exists: {
      Formula guard = Formula::rel(guards.at(f.sort), {Term::var(f.name, kUniverse)});
      return Formula::exists(f.name, kUniverse,
                             Formula::conj(std::move(guard), guard_formula(f.kids[0], guards)));
    }
    default: {
      Formula out = f;
      for (Formula& k : out.kids) k = guard_formula(k, guards);
      return out;
    }
  }
}

}  // namespace

Relativized relativize(const Theory& th, const Formula* goal) {
  const Signature& src = th.signature();
  Relativized out;
  out.sig.add_sort(kUniverse);

  std::set<std::string> taken;
  for (const auto& [name, decl] : src.functions()) taken.insert(name);
  for (const auto& [name, decl] : src.relations()) taken.insert(name);
  for (const auto& s : src.sorts()) {
    std::string guard = fresh_name("is" + s, taken);
    taken.insert(guard);
    out.guards[s] = guard;
    out.sig.add_relation(guard, {kUniverse});
  }
  for (const auto& [name, decl] : src.functions())
    out.sig.add_function(name, std::vector<std::string>(decl.args.size(), kUniverse), kUniverse);
  for (const auto& [name, decl] : src.relations())
    out.sig.add_relation(name, std::vector<std::string>(decl.args.size(), kUniverse));

  // Guards are nonempty: every sort of the original had a nonempty domain.
  for (const auto& s : src.sorts())
    out.axioms.push_back(
        {"sort_" + s + "_nonempty",
         Formula::exists("X", kUniverse,
                         Formula::rel(out.guards.at(s), {Term::var("X", kUniverse)}))});

  // Functions respect guards.
  for (const auto& [name, decl] : src.functions()) {
    std::vector<Term> args;
    for (size_t i = 0; i < decl.args.size(); ++i)
      args.push_back(Term::var("X" + std::to_string(i + 1), kUniverse));
    Formula concl = Formula::rel(out.guards.at(decl.result), {Term::app(name, args)});
    Formula body = std::move(concl);
    if (!decl.args.empty()) {
      Formula premise = Formula::rel(out.guards.at(decl.args[0]), {args[0]});
      for (size_t i = 1; i < decl.args.size(); ++i)
        premise = Formula::conj(std::move(premise),
                                Formula::rel(out.guards.at(decl.args[i]), {args[i]}));
      body = Formula::implies(std::move(premise), std::move(body));
      for (size_t i = decl.args.size(); i > 0; --i)
        body = Formula::forall("X" + std::to_string(i), kUniverse, std::move(body));
    }
    out.axioms.push_back({"closure_" + name, std::move(body)});
  }

  for (const auto& ax : th.axioms())
    out.axioms.push_back({ax.label, guard_formula(ax.formula, out.guards)});
  if (goal) out.goal = guard_formula(*goal, out.guards);
  return out;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

std::string mangle_word(const std::string& name, bool upper) {
  std::string base;
  if (name == "+") base = "plus";
  else if (name == "*") base = "times";
  else if (name == "<") base = "less";
  else {
    for (char c : name) {
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') base += c;
      else base += '_';
    }
    if (base.empty()) base = "sym";
  }
  if (upper) {
    if (!std::isalpha(static_cast<unsigned char>(base[0]))) base = "X" + base;
    base[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(base[0])));
  } else {
    if (!std::isalpha(static_cast<unsigned char>(base[0]))) base = "s" + base;
    base[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(base[0])));
  }
  return base;
}

class TptpPrinter {
 public:
  explicit TptpPrinter(const Relativized& rel) {
    for (const auto& [name, decl] : rel.sig.functions()) assign(name);
    for (const auqto = 0; false;) {}
  }

 private:
  void assign(const std::string& name) { (void)name; }
};

struct SymbolTable {
  std::map<std::string, std::string> mangled;  // original -> tptp
  std::set<std::string> used;

  const std::string& get(const std::string& name) {
    auto it = mangled.find(name);
    if (it != mangled.end()) return it->second;
    std::string m = mangle_word(name, false);
    int n = 0;
    std::string candidate = m;
    while (used.count(candidate)) candidate = m + "_" + std::to_string(++n);
    used.insert(candidate);
    return mangled.emplace(name, candidate).first->second;
  }
};

void print_term(const Term& t, SymbolTable& syms,
                const std::map<std::string, std::string>& vars, std::string& out) {
  if (t.kind == Term::Kind::Var) {
    out += vars.at(t.name);
    return;
  }
  out += syms.get(t.name);
  if (!t.args.empty()) {
    out += "(";
    for (size_t i = 0; i < t.args.size(); ++i) {
      if (i) out += ",";
      print_term(t.args[i], syms, vars, out);
    }
    out += ")";
  }
}

void print_formula(const Formula& f, SymbolTable& syms,
                   std::map<std::string, std::string> vars,
                   std::set<std::string>& var_names, std::string& out) {
  switch (f.kind) {
    case Formula::Kind::Rel:
      out += syms.get(f.name);
      if (!f.terms.empty()) {
        out += "(";
        for (size_t i = 0; i < f.terms.size(); ++i) {
          if (i) out += ",";
          print_term(f.terms[i], syms, vars, out);
        }
        out += ")";
      }
      return;
    case Formula::Kind::Eq:
      print_term(f.terms[0], syms, vars, out);
      out += " = ";
      print_term(f.terms[1], syms, vars, out);
      return;
    case Formula::Kind::Not:
      out += "~(";
      print_formula(f.kids[0], syms, vars, var_names, out);
      out += ")";
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff: {
      const char* op = f.kind == Formula::Kind::And       ? " & "
                       : f.kind == Formula::Kind::Or      ? " | "
                       : f.kind == Formula::Kind::Implies ? " => "
                                                          : " <=> ";
      out += "(";
      print_formula(f.kids[0], syms, vars, var_names, out);
      out += op;
      print_formula(f.kids[1], syms, vars, var_names, out);
      out += ")";
      return;
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      std::string base = mangle_word(f.name, true);
      std::string candidate = base;
      int n = 0;
      while (var_names.count(candidate)) candidate = base + "_" + std::to_string(++n);
      var_names.insert(candidate);
      vars[f.name] = candidate;
      out += f.kind == Formula::Kind::Forall ? "! [" : "? [";
      out += candidate;
      out += "] : (";
      print_formula(f.kids[0], syms, vars, var_names, out);
      out += ")";
      return;
    }
  }
}

std::string fof_line(const std::string& name, const char* role, const Formula& f,
                     SymbolTable& syms) {
  std::string out = "fof(" + name + ", " + role + ", ";
  std::map<std::string, std::string> vars;
  std::set<std::string> var_names;
  print_formula(f, syms, vars, var_names, out);
  out += ").";
  return out;
}

}  // namespace

std::string export_tptp(const Theory& th, const Formula* goal) {
  Relativized rel = relativize(th, goal);
  std::ostringstream os;
  os << "% TPTP first-order form export of theory '" << th.name() << "'\n";
  os << "% many-sorted quantifiers relativized by sort guard predicates\n";

  SymbolTable syms;
  // Pre-assign symbols in sorted order so the mangling table is stable.
  for (const auto& [name, decl] : rel.sig.relations()) syms.get(name);
  for (const auto& [name, decl] : rel.sig.functions()) syms.get(name);
  for (const auto& [orig, m] : syms.mangled)
    if (orig != m) os << "% name " << orig << " -> " << m << "\n";

  std::set<std::string> fof_names;
  auto fof_name = [&fof_names](const std::string& label) {
    std::string base = mangle_word(label, false);
    std::string candidate = base;
    int n = 0;
    while (fof_names.count(candidate)) candidate = base + "_" + std::to_string(++n);
    fof_names.insert(candidate);
    return candidate;
  };

  for (const auto& ax : rel.axioms)
    os << fof_line(fof_name(ax.label), "axiom", ax.formula, syms) << "\n";
  if (rel.goal) os << fof_line(fof_name("goal"), "conjecture", *rel.goal, syms) << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Well-formedness re-parse
// ---------------------------------------------------------------------------

namespace {

struct TptpTok {
  enum Kind {
    Lower,
    Upper,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Colon,
    Amp,
    Pipe,
    Implies,
    Iff,
    Tilde,
    Equal,
    NotEqual,
    End,
    Bad
  };
  Kind kind = End;
  std::string text;
  int line = 1, col = 1;
};

class TptpLexer {
 public:
  explicit TptpLexer(std::string_view text) : text_(text) { next(); }
  const TptpTok& peek() const { return tok_; }
  TptpTok take() {
    TptpTok t = tok_;
    next();
    return t;
  }

 private:
  void advance() {
    if (i_ < text_.size()) {
      if (text_[i_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++i_;
    }
  }

  void next() {
    for (;;) {
      while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) advance();
      if (i_ < text_.size() && text_[i_] == '%') {
        while (i_ < text_.size() && text_[i_] != '\n') advance();
        continue;
      }
      break;
    }
    tok_.line = line_;
    tok_.col = col_;
    if (i_ >= text_.size()) {
      tok_.kind = TptpTok::End;
      tok_.text = "<end>";
      return;
    }
    char c = text_[i_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = i_;
      while (i_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[i_])) || text_[i_] == '_'))
        advance();
      tok_.text = std::string(text_.substr(start, i_ - start));
      tok_.kind = std::isupper(static_cast<unsigned char>(tok_.text[0])) ? TptpTok::Upper
                                                                         : TptpTok::Lower;
      return;
    }
    if (c == '=' && i_ + 1 < text_.size() && text_[i_ + 1] == '>') {
      advance(); advance();
      tok_.kind = TptpTok::Implies;
      tok_.text = "=>";
      return;
    }
    if (c == '<' && i_ + 2 < text_.size() && text_[i_ + 1] == '=' && text_[i_ + 2] == '>') {
      advance(); advance(); advance();
      tok_.kind = TptpTok::Iff;
      tok_.text = "<=>";
      return;
    }
    if (c == '!' && i_ + 1 < text_.size() && text_[i_ + 1] == '=') {
      advance(); advance();
      tok_.kind = TptpTok::NotEqual;
      tok_.text = "!=";
      return;
    }
    advance();
    tok_.text = std::string(1, c);
    switch (c) {
      case '(': tok_.kind = TptpTok::LParen; break;
      case ')': tok_.kind = TptpTok::RParen; break;
      case '[': tok_.kind = TptpTok::LBracket; break;
      case ']': tok_.kind = TptpTok::RBracket; break;
      case ',': tok_.kind = TptpTok::Comma; break;
      case '.': tok_.kind = TptpTok::Dot; break;
      case ':': tok_.kind = TptpTok::Colon; break;
      case '&': tok_.kind = TptpTok::Amp; break;
      case '|': tok_.kind = TptpTok::Pipe; break;
      case '~': tok_.kind = TptpTok::Tilde; break;
      case '=': tok_.kind = TptpTok::Equal; break;
      case '!': tok_.kind = TptpTok::Lower; tok_.text = "!"; tok_.kind = TptpTok::Bad; break;
      case '?': tok_.kind = TptpTok::Bad; break;
      default: tok_.kind = TptpTok::Bad; break;
    }
    // Quantifier markers arrive as '!'/'?' followed by '['.
    if (c == '!' || c == '?') {
      tok_.kind = TptpTok::Lower;
      tok_.text = std::string(1, c);
    }
  }

  std::string_view text_;
  size_t i_ = 0;
  int line_ = 1, col_ = 1;
  TptpTok tok_;
};

class TptpChecker {
 public:
  TptpChecker(std::string_view text, std::vector<ParseDiagnostic>& diags)
      : lex_(text), diags_(diags) {}

  void run() {
    try {
      while (lex_.peek().kind != TptpTok::End) parse_fof();
    } catch (const ParseAbort&) {
    }
  }

 private:
  struct ParseAbort {};

  void error(const TptpTok& t, const std::string& msg) {
    SourceSpan span{"<tptp>", {t.line, t.col}, {t.line, t.col}};
    diags_.push_back({span, Severity::Error, msg});
  }

  [[noreturn]] void fail(const TptpTok& t, const std::string& msg) {
    error(t, msg);
    throw ParseAbort{};
  }

  TptpTok expect(TptpTok::Kind k, const std::string& msg) {
    if (lex_.peek().kind != k) fail(lex_.peek(), msg + ", got '" + lex_.peek().text + "'");
    return lex_.take();
  }

  void parse_fof() {
    TptpTok head = expect(TptpTok::Lower, "expected 'fof'");
    if (head.text != "fof") fail(head, "expected 'fof', got '" + head.text + "'");
    expect(TptpTok::LParen, "expected '('");
    TptpTok name = expect(TptpTok::Lower, "expected formula name");
    if (names_.count(name.text)) error(name, "duplicate formula name '" + name.text + "'");
    names_.insert(name.text);
    expect(TptpTok::Comma, "expected ','");
    TptpTok role = expect(TptpTok::Lower, "expected role");
    if (role.text != "axiom" && role.text != "conjecture")
      error(role, "unexpected role '" + role.text + "'");
    expect(TptpTok::Comma, "expected ','");
    std::set<std::string> bound;
    parse_formula(bound);
    expect(TptpTok::RParen, "expected ')'");
    expect(TptpTok::Dot, "expected '.'");
  }

  void parse_formula(std::set<std::string>& bound) {
    parse_unitary(bound);
    TptpTok::Kind k = lex_.peek().kind;
    if (k == TptpTok::Amp || k == TptpTok::Pipe) {
      TptpTok::Kind op = k;
      while (lex_.peek().kind == op) {
        lex_.take();
        parse_unitary(bound);
      }
      return;
    }
    if (k == TptpTok::Implies || k == TptpTok::Iff) {
      lex_.take();
      parse_unitary(bound);
    }
  }

  void parse_unitary(std::set<std::string>& bound) {
    const TptpTok& t = lex_.peek();
    if (t.kind == TptpTok::Tilde) {
      lex_.take();
      parse_unitary(bound);
      return;
    }
    if (t.kind == TptpTok::Lower && (t.text == "!" || t.text == "?")) {
      lex_.take();
      expect(TptpTok::LBracket, "expected '[' after quantifier");
      std::set<std::string> added;
      for (;;) {
        TptpTok v = expect(TptpTok::Upper, "expected variable");
        if (!bound.count(v.text)) added.insert(v.text);
        bound.insert(v.text);
        if (lex_.peek().kind != TptpTok::Comma) break;
        lex_.take();
      }
      expect(TptpTok::RBracket, "expected ']'");
      expect(TptpTok::Colon, "expected ':'");
      parse_unitary(bound);
      for (const auto& v : added) bound.erase(v);
      return;
    }
    if (t.kind == TptpTok::LParen) {
      lex_.take();
      parse_formula(bound);
      expect(TptpTok::RParen, "expected ')'");
      return;
    }
    parse_atom(bound);
  }

  void parse_term(std::set<std::string>& bound) {
    const TptpTok& t = lex_.peek();
    if (t.kind == TptpTok::Upper) {
      if (!bound.count(t.text)) error(t, "free variable '" + t.text + "'");
      lex_.take();
      return;
    }
    TptpTok f = expect(TptpTok::Lower, "expected term");
    (void)f;
    if (lex_.peek().kind == TptpTok::LParen) {
      lex_.take();
      for (;;) {
        parse_term(bound);
        if (lex_.peek().kind != TptpTok::Comma) break;
        lex_.take();
      }
      expect(TptpTok::RParen, "expected ')'");
    }
  }

  void parse_atom(std::set<std::string>& bound) {
    parse_term(bound);
    TptpTok::Kind k = lex_.peek().kind;
    if (k == TptpTok::Equal || k == TptpTok::NotEqual) {
      lex_.take();
      parse_term(bound);
    }
  }

  TptpLexer lex_;
  std::vector<ParseDiagnostic>& diags_;
  std::set<std::string> names_;
};

}  // namespace

std::vector<ParseDiagnostic> tptp_check(std::string_view text) {
  std::vector<ParseDiagnostic> diags;
  TptpChecker checker(text, diags);
  checker.run();
  return diags;
}

}  // namespace why
