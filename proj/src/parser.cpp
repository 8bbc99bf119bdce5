#include "why/parser.hpp"

#include <cctype>
#include <sstream>

namespace why {

std::string format_diagnostic(const ParseDiagnostic& d) {
  std::ostringstream os;
  os << d.span.file << ":" << d.span.start.line << ":" << d.span.start.col << ": "
     << (d.severity == Severity::Error ? "error: " : "warning: ") << d.message;
  return os.str();
}

namespace {

enum class Tok {
  Ident,
  KwTheory,
  KwSorts,
  KwFunc,
  KwConst,
  KwPred,
  KwAxiom,
  KwForall,
  KwExists,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Semi,
  Colon,
  Comma,
  Dot,
  Arrow,      // ->
  Iff,        // <->
  Amp,
  Pipe,
  Tilde,
  Equals,
  Less,
  Plus,
  Star,
  End,
  Bad,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Lexer {
 public:
  Lexer(std::string_view text, std::string_view file) : text_(text), file_(file) {
    next_token();
  }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    next_token();
    return t;
  }
  std::string_view file() const { return file_; }

 private:
  void advance() {
    if (i_ < text_.size()) {
      if (text_[i_] == '\n') {
        ++pos_.line;
        pos_.col = 1;
      } else {
        ++pos_.col;
      }
      ++i_;
    }
  }

  void skip_ws() {
    for (;;) {
      while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) advance();
      if (i_ + 1 < text_.size() && text_[i_] == '/' && text_[i_ + 1] == '/') {
        while (i_ < text_.size() && text_[i_] != '\n') advance();
        continue;
      }
      break;
    }
  }

  void next_token() {
    skip_ws();
    tok_.pos = pos_;
    if (i_ >= text_.size()) {
      tok_.kind = Tok::End;
      tok_.text = "<end of input>";
      return;
    }
    char c = text_[i_];
    if (ident_start(c)) {
      size_t start = i_;
      while (i_ < text_.size() && ident_char(text_[i_])) advance();
      tok_.text = std::string(text_.substr(start, i_ - start));
      if (tok_.text == "theory") tok_.kind = Tok::KwTheory;
      else if (tok_.text == "sorts") tok_.kind = Tok::KwSorts;
      else if (tok_.text == "func") tok_.kind = Tok::KwFunc;
      else if (tok_.text == "const") tok_.kind = Tok::KwConst;
      else if (tok_.text == "pred") tok_.kind = Tok::KwPred;
      else if (tok_.text == "axiom") tok_.kind = Tok::KwAxiom;
      else if (tok_.text == "forall") tok_.kind = Tok::KwForall;
      else if (tok_.text == "exists") tok_.kind = Tok::KwExists;
      else tok_.kind = Tok::Ident;
      return;
    }
    auto two = [&](char a, char b) {
      return c == a && i_ + 1 < text_.size() && text_[i_ + 1] == b;
    };
    if (c == '<' && i_ + 2 < text_.size() && text_[i_ + 1] == '-' && text_[i_ + 2] == '>') {
      advance(); advance(); advance();
      tok_.kind = Tok::Iff;
      tok_.text = "<->";
      return;
    }
    if (two('-', '>')) {
      advance(); advance();
      tok_.kind = Tok::Arrow;
      tok_.text = "->";
      return;
    }
    advance();
    tok_.text = std::string(1, c);
    switch (c) {
      case '{': tok_.kind = Tok::LBrace; break;
      case '}': tok_.kind = Tok::RBrace; break;
      case '(': tok_.kind = Tok::LParen; break;
      case ')': tok_.kind = Tok::RParen; break;
      case ';': tok_.kind = Tok::Semi; break;
      case ':': tok_.kind = Tok::Colon; break;
      case ',': tok_.kind = Tok::Comma; break;
      case '.': tok_.kind = Tok::Dot; break;
      case '&': tok_.kind = Tok::Amp; break;
      case '|': tok_.kind = Tok::Pipe; break;
      case '~': tok_.kind = Tok::Tilde; break;
      case '=': tok_.kind = Tok::Equals; break;
      case '<': tok_.kind = Tok::Less; break;
      case '+': tok_.kind = Tok::Plus; break;
      case '*': tok_.kind = Tok::Star; break;
      default: tok_.kind = Tok::Bad; break;
    }
  }

  std::string_view text_;
  std::string_view file_;
  size_t i_ = 0;
  SourcePos pos_;
  Token tok_;
};

struct ParseAbort {};

class Parser {
 public:
  Parser(std::string_view text, std::string_view file, std::vector<ParseDiagnostic>& diags)
      : lex_(text, file), file_(file), diags_(diags) {}

  // Scoped variable environment while parsing a formula: name -> sort.
  Theory parse_theory_file() {
    expect(Tok::KwTheory, "expected 'theory'");
    Token name = expect(Tok::Ident, "expected theory name");
    expect(Tok::LBrace, "expected '{'");
    Signature sig;
    parse_decls(sig);
    Theory th(name.text, sig);
    sig_ = &th.signature();
    while (lex_.peek().kind == Tok::KwAxiom) {
      Token kw = lex_.take();
      Token label = expect(Tok::Ident, "expected axiom label");
      expect(Tok::Colon, "expected ':' after axiom label");
      Formula f = parse_formula_top();
      expect(Tok::Semi, "expected ';' after axiom");
      check_and_add(th, label, f, kw.pos);
    }
    expect(Tok::RBrace, "expected '}'");
    expect(Tok::End, "trailing input after theory");
    return th;
  }

  Formula parse_single_formula(const Signature& sig) {
    sig_ = &sig;
    Formula f = parse_formula_top();
    expect(Tok::End, "trailing input after formula");
    auto sort_diags = well_sorted(sig, f);
    for (const auto& d : sort_diags) error_at(lex_.peek().pos, d.message + " (at " + d.path + ")");
    if (!sort_diags.empty()) throw ParseAbort{};
    return f;
  }

 private:
  void error_at(SourcePos pos, const std::string& msg) {
    SourceSpan span{std::string(file_), pos, pos};
    diags_.push_back({span, Severity::Error, msg});
  }

  [[noreturn]] void fail(SourcePos pos, const std::string& msg) {
    error_at(pos, msg);
    throw ParseAbort{};
  }

  Token expect(Tok kind, const std::string& msg) {
    if (lex_.peek().kind != kind) fail(lex_.peek().pos, msg + ", got '" + lex_.peek().text + "'");
    return lex_.take();
  }

  // Symbol position that also accepts the builtin operator tokens.
  Token expect_symbol_name() {
    Tok k = lex_.peek().kind;
    if (k == Tok::Ident || k == Tok::Plus || k == Tok::Star || k == Tok::Less)
      return lex_.take();
    fail(lex_.peek().pos, "expected symbol name, got '" + lex_.peek().text + "'");
  }

  std::vector<std::string> parse_sortlist() {
    std::vector<std::string> sorts;
    sorts.push_back(expect(Tok::Ident, "expected sort name").text);
    while (lex_.peek().kind == Tok::Ident && lex_.peek().text == "x") {
      lex_.take();
      sorts.push_back(expect(Tok::Ident, "expected sort name after 'x'").text);
    }
    return sorts;
  }

  void parse_decls(Signature& sig) {
    if (lex_.peek().kind == Tok::KwSorts) {
      lex_.take();
      for (;;) {
        Token s = expect(Tok::Ident, "expected sort name");
        try {
          sig.add_sort(s.text);
        } catch (const SignatureError& e) {
          error_at(s.pos, e.what());
        }
        if (lex_.peek().kind != Tok::Comma) break;
        lex_.take();
      }
      expect(Tok::Semi, "expected ';' after sorts");
    }
    for (;;) {
      Tok k = lex_.peek().kind;
      if (k == Tok::KwFunc) {
        lex_.take();
        Token name = expect_symbol_name();
        expect(Tok::Colon, "expected ':' in func declaration");
        auto args = parse_sortlist();
        expect(Tok::Arrow, "expected '->' in func declaration");
        Token result = expect(Tok::Ident, "expected result sort");
        expect(Tok::Semi, "expected ';'");
        try {
          sig.add_function(name.text, args, result.text);
        } catch (const SignatureError& e) {
          error_at(name.pos, e.what());
        }
      } else if (k == Tok::KwConst) {
        lex_.take();
        Token name = expect(Tok::Ident, "expected constant name");
        expect(Tok::Colon, "expected ':' in const declaration");
        Token sort = expect(Tok::Ident, "expected sort");
        expect(Tok::Semi, "expected ';'");
        try {
          sig.add_constant(name.text, sort.text);
        } catch (const SignatureError& e) {
          error_at(name.pos, e.what());
        }
      } else if (k == Tok::KwPred) {
        lex_.take();
        Token name = expect_symbol_name();
        std::vector<std::string> args;
        if (lex_.peek().kind == Tok::Colon) {
          lex_.take();
          args = parse_sortlist();
        }
        expect(Tok::Semi, "expected ';'");
        try {
          sig.add_relation(name.text, args);
        } catch (const SignatureError& e) {
          error_at(name.pos, e.what());
        }
      } else {
        break;
      }
    }
  }

  void check_and_add(Theory& th, const Token& label, Formula f, SourcePos pos) {
    auto sort_diags = well_sorted(th.signature(), f);
    if (!sort_diags.empty()) {
      for (const auto& d : sort_diags)
        error_at(pos, "axiom '" + label.text + "': " + d.message + " (at " + d.path + ")");
      return;
    }
    try {
      th.add_axiom(label.text, std::move(f));
    } catch (const Error& e) {
      error_at(label.pos, e.what());
    }
  }

  // formula := iff-chain; quantifiers and ~ live at the unary level with
  // quantifier bodies extending maximally to the right.
  Formula parse_formula_top() { return parse_iff(); }

  Formula parse_iff() {
    Formula lhs = parse_implies();
    if (lex_.peek().kind == Tok::Iff) {
      lex_.take();
      return Formula::iff(std::move(lhs), parse_iff());
    }
    return lhs;
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (lex_.peek().kind == Tok::Arrow) {
      lex_.take();
      return Formula::implies(std::move(lhs), parse_implies());
    }
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    while (lex_.peek().kind == Tok::Pipe) {
      lex_.take();
      lhs = Formula::disj(std::move(lhs), parse_and());
    }
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_unary();
    while (lex_.peek().kind == Tok::Amp) {
      lex_.take();
      lhs = Formula::conj(std::move(lhs), parse_unary());
    }
    return lhs;
  }

  Formula parse_unary() {
    Tok k = lex_.peek().kind;
    if (k == Tok::Tilde) {
      lex_.take();
      return Formula::neg(parse_unary());
    }
    if (k == Tok::KwForall || k == Tok::KwExists) {
      bool universal = k == Tok::KwForall;
      lex_.take();
      std::vector<std::pair<std::string, std::string>> binders;
      for (;;) {
        Token var = expect(Tok::Ident, "expected variable name");
        expect(Tok::Colon, "expected ':' after quantified variable");
        Token sort = expect(Tok::Ident, "expected sort annotation");
        if (sig_ && !sig_->has_sort(sort.text))
          error_at(sort.pos, "undeclared sort '" + sort.text + "'");
        binders.emplace_back(var.text, sort.text);
        if (lex_.peek().kind != Tok::Comma) break;
        lex_.take();
      }
      expect(Tok::Dot, "expected '.' after quantifier binders");
      for (const auto& [name, sort] : binders) scope_.emplace_back(name, sort);
      Formula body = parse_formula_top();
      scope_.resize(scope_.size() - binders.size());
      for (auto it = binders.rbegin(); it != binders.rend(); ++it)
        body = universal ? Formula::forall(it->first, it->second, std::move(body))
                         : Formula::exists(it->first, it->second, std::move(body));
      return body;
    }
    if (k == Tok::LParen) {
      lex_.take();
      Formula f = parse_formula_top();
      expect(Tok::RParen, "expected ')'");
      return f;
    }
    return parse_atom();
  }

  // An atom is a relation application, a bare propositional symbol, or a
  // comparison term = term | term < term.
  Formula parse_atom() {
    SourcePos pos = lex_.peek().pos;
    if (lex_.peek().kind == Tok::Ident && sig_ && sig_->relation(lex_.peek().text)) {
      // Relation atom; nullary symbols appear bare.
      Token name = lex_.take();
      std::vector<Term> args;
      if (lex_.peek().kind == Tok::LParen) {
        lex_.take();
        args = parse_term_list();
        expect(Tok::RParen, "expected ')'");
      }
      return Formula::rel(name.text, std::move(args));
    }
    Term lhs = parse_term();
    Tok k = lex_.peek().kind;
    if (k == Tok::Equals) {
      lex_.take();
      return Formula::eq(std::move(lhs), parse_term());
    }
    if (k == Tok::Less) {
      lex_.take();
      Term rhs = parse_term();
      return Formula::rel("<", {std::move(lhs), std::move(rhs)});
    }
    fail(pos, "expected an atom: relation, '=' or '<' comparison");
  }

  std::vector<Term> parse_term_list() {
    std::vector<Term> out;
    out.push_back(parse_term());
    while (lex_.peek().kind == Tok::Comma) {
      lex_.take();
      out.push_back(parse_term());
    }
    return out;
  }

  // term := factor ('+' factor)* ; factor := primary ('*' primary)*
  Term parse_term() {
    Term lhs = parse_factor();
    while (lex_.peek().kind == Tok::Plus) {
      lex_.take();
      lhs = Term::app("+", {std::move(lhs), parse_factor()});
    }
    return lhs;
  }

  Term parse_factor() {
    Term lhs = parse_primary();
    while (lex_.peek().kind == Tok::Star) {
      lex_.take();
      lhs = Term::app("*", {std::move(lhs), parse_primary()});
    }
    return lhs;
  }

  Term parse_primary() {
    if (lex_.peek().kind == Tok::LParen) {
      lex_.take();
      Term t = parse_term();
      expect(Tok::RParen, "expected ')'");
      return t;
    }
    Token name = expect(Tok::Ident, "expected a term");
    if (lex_.peek().kind == Tok::LParen) {
      lex_.take();
      std::vector<Term> args = parse_term_list();
      expect(Tok::RParen, "expected ')'");
      return Term::app(name.text, std::move(args));
    }
    // Bound variable, else a declared constant; free variables are errors.
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == name.text) return Term::var(name.text, it->second);
    if (sig_) {
      const FuncDecl* decl = sig_->function(name.text);
      if (decl && decl->args.empty()) return Term::app(name.text, {});
    }
    fail(name.pos, "unknown symbol or unbound variable '" + name.text + "'");
  }

  Lexer lex_;
  std::string_view file_;
  std::vector<ParseDiagnostic>& diags_;
  const Signature* sig_ = nullptr;
  std::vector<std::pair<std::string, std::string>> scope_;
};

}  // namespace

TheoryParseResult parse_theory(std::string_view text, std::string_view filename) {
  TheoryParseResult result;
  Parser p(text, filename, result.diagnostics);
  try {
    Theory th = p.parse_theory_file();
    if (!has_errors(result.diagnostics)) result.theory = std::move(th);
  } catch (const ParseAbort&) {
  }
  return result;
}

FormulaParseResult parse_formula(std::string_view text, const Signature& sig,
                                 std::string_view filename) {
  FormulaParseResult result;
  Parser p(text, filename, result.diagnostics);
  try {
    Formula f = p.parse_single_formula(sig);
    if (!has_errors(result.diagnostics)) result.formula = std::move(f);
  } catch (const ParseAbort&) {
  }
  return result;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

// Term precedence: + = 1, * = 2, atomic = 3.
int term_prec(const Term& t) {
  if (t.kind == Term::Kind::App && t.name == "+") return 1;
  if (t.kind == Term::Kind::App && t.name == "*") return 2;
  return 3;
}

void render_term(const Term& t, int ctx, std::string& out) {
  int prec = term_prec(t);
  bool parens = prec < ctx;
  if (parens) out += "(";
  if (t.kind == Term::Kind::Var) {
    out += t.name;
  } else if (t.name == "+" || t.name == "*") {
    render_term(t.args[0], prec, out);
    out += " ";
    out += t.name;
    out += " ";
    render_term(t.args[1], prec + 1, out);
  } else {
    out += t.name;
    if (!t.args.empty()) {
      out += "(";
      for (size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += ", ";
        render_term(t.args[i], 0, out);
      }
      out += ")";
    }
  }
  if (parens) out += ")";
}

// Connective precedence: <-> 1, -> 2, | 3, & 4, ~ 5, atoms 6.
int formula_prec(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Iff: return 1;
    case Formula::Kind::Implies: return 2;
    case Formula::Kind::Or: return 3;
    case Formula::Kind::And: return 4;
    case Formula::Kind::Not: return 5;
    default: return 6;
  }
}

// A quantifier body extends maximally to the right, so a quantified
// subformula needs parentheses exactly when rendered away from the right
// edge of its enclosing formula.
void render_formula(const Formula& f, int ctx, bool right_edge, std::string& out) {
  int prec = formula_prec(f);
  bool parens = prec < ctx || (f.is_quantifier() && !right_edge);
  if (parens) out += "(";
  switch (f.kind) {
    case Formula::Kind::Rel:
      out += f.name == "<" ? "" : f.name;
      if (f.name == "<") {
        render_term(f.terms[0], 0, out);
        out += " < ";
        render_term(f.terms[1], 0, out);
      } else if (!f.terms.empty()) {
        out += "(";
        for (size_t i = 0; i < f.terms.size(); ++i) {
          if (i) out += ", ";
          render_term(f.terms[i], 0, out);
        }
        out += ")";
      }
      break;
    case Formula::Kind::Eq:
      render_term(f.terms[0], 0, out);
      out += " = ";
      render_term(f.terms[1], 0, out);
      break;
    case Formula::Kind::Not:
      out += "~";
      render_formula(f.kids[0], 5, parens ? true : right_edge, out);
      break;
    case Formula::Kind::And:
      render_formula(f.kids[0], 4, false, out);
      out += " & ";
      render_formula(f.kids[1], 5, parens ? true : right_edge, out);
      break;
    case Formula::Kind::Or:
      render_formula(f.kids[0], 3, false, out);
      out += " | ";
      render_formula(f.kids[1], 4, parens ? true : right_edge, out);
      break;
    case Formula::Kind::Implies:
      render_formula(f.kids[0], 3, false, out);
      out += " -> ";
      render_formula(f.kids[1], 2, parens ? true : right_edge, out);
      break;
    case Formula::Kind::Iff:
      render_formula(f.kids[0], 2, false, out);
      out += " <-> ";
      render_formula(f.kids[1], 1, parens ? true : right_edge, out);
      break;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      // Fuse consecutive same-kind binders into one keyword.
      out += f.kind == Formula::Kind::Forall ? "forall " : "exists ";
      const Formula* cur = &f;
      for (;;) {
        out += cur->name;
        out += ":";
        out += cur->sort;
        const Formula& body = cur->kids[0];
        if (body.kind == cur->kind) {
          out += ", ";
          cur = &body;
        } else {
          break;
        }
      }
      out += ". ";
      render_formula(cur->kids[0], 0, true, out);
      break;
    }
  }
  if (parens) out += ")";
}

}  // namespace

std::string render(const Term& t) {
  std::string out;
  render_term(t, 0, out);
  return out;
}

std::string render(const Formula& f) {
  std::string out;
  render_formula(f, 0, true, out);
  return out;
}

std::string render_theory(const Theory& th) {
  std::ostringstream os;
  os << "theory " << th.name() << " {\n";
  const Signature& sig = th.signature();
  if (!sig.sorts().empty()) {
    os << "  sorts ";
    bool first = true;
    for (const auto& s : sig.sorts()) {
      if (!first) os << ", ";
      os << s;
      first = false;
    }
    os << ";\n";
  }
  for (const auto& [name, decl] : sig.functions()) {
    if (decl.args.empty()) {
      os << "  const " << name << ": " << decl.result << ";\n";
      continue;
    }
    os << "  func " << name << ": ";
    for (size_t i = 0; i < decl.args.size(); ++i) {
      if (i) os << " x ";
      os << decl.args[i];
    }
    os << " -> " << decl.result << ";\n";
  }
  for (const auto& [name, decl] : sig.relations()) {
    os << "  pred " << name;
    if (!decl.args.empty()) {
      os << ": ";
      for (size_t i = 0; i < decl.args.size(); ++i) {
        if (i) os << " x ";
        os << decl.args[i];
      }
    }
    os << ";\n";
  }
  for (const auto& ax : th.axioms())
    os << "  axiom " << ax.label << ": " << render(ax.formula) << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace why
