#include "ldk/syntax.hpp"

#include <cctype>
#include <vector>

namespace ldk {

// ---------------------------------------------------------------------------
// Printing

namespace {

// 0 binder, 1 application, 2 prefix operator, 3 atomic.
int term_level(const Term& t) {
  switch (t.kind()) {
    case TermKind::Lam:
    case TermKind::Delta: return 0;
    case TermKind::App: return 1;
    case TermKind::Proj:
    case TermKind::Inj: return 2;
    default: return 3;
  }
}

void render(const Term& t, int min_level, std::string& out) {
  bool parens = term_level(t) < min_level;
  if (parens) out += '(';
  switch (t.kind()) {
    case TermKind::Var: out += t.name(); break;
    case TermKind::Lam:
      out += '\\' + t.name() + ':' + t.annot().str() + ". ";
      render(t.child(0), 0, out);
      break;
    case TermKind::Delta:
      out += "delta " + t.name() + ':' + Formula::neg(t.annot()).str() + ". ";
      render(t.child(0), 0, out);
      break;
    case TermKind::App:
      render(t.child(0), 1, out);
      out += ' ';
      render(t.child(1), 3, out);
      break;
    case TermKind::Pair:
      out += '<';
      render(t.child(0), 0, out);
      out += ", ";
      render(t.child(1), 0, out);
      out += '>';
      break;
    case TermKind::Proj:
      out += t.index() == 1 ? "p1 " : "p2 ";
      render(t.child(0), 2, out);
      break;
    case TermKind::Inj:
      out += (t.index() == 1 ? "in1[" : "in2[") + t.annot().str() + "] ";
      render(t.child(0), 2, out);
      break;
    case TermKind::Case:
      out += "case ";
      render(t.child(0), 0, out);
      out += " of { " + t.name() + ':' + t.annot().str() + " => ";
      render(t.child(1), 0, out);
      out += " | " + t.name2() + ':' + t.annot2().str() + " => ";
      render(t.child(2), 0, out);
      out += " }";
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string print(const Term& t) {
  std::string out;
  render(t, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Lexing

namespace {

enum class Tok {
  Ident, Lambda, Colon, Dot, LParen, RParen, LAngle, RAngle, Comma, LBrack, RBrack, LBrace,
  RBrace, Bar, FatArrow, Arrow, Conj, Disj, Tilde, KwCase, KwOf, KwDelta, KwP1, KwP2, KwIn1,
  KwIn2, KwBot, End
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto push = [&](Tok k, std::string text, std::size_t len) {
    out.push_back({k, std::move(text), line, col});
    i += len;
    col += len;
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
      continue;
    }
    if (c == '#') {  // comment to end of line
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    auto next = [&](std::size_t k) { return i + k < s.size() ? s[i + k] : '\0'; };
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      std::string w(s.substr(i, j - i));
      Tok k = Tok::Ident;
      if (w == "case") k = Tok::KwCase;
      else if (w == "of") k = Tok::KwOf;
      else if (w == "delta") k = Tok::KwDelta;
      else if (w == "p1") k = Tok::KwP1;
      else if (w == "p2") k = Tok::KwP2;
      else if (w == "in1") k = Tok::KwIn1;
      else if (w == "in2") k = Tok::KwIn2;
      else if (w == "Bot") k = Tok::KwBot;
      push(k, w, j - i);
      continue;
    }
    switch (c) {
      case '\\':
        if (next(1) == '/') push(Tok::Disj, "\\/", 2);
        else push(Tok::Lambda, "\\", 1);
        continue;
      case '/':
        if (next(1) == '\\') {
          push(Tok::Conj, "/\\", 2);
          continue;
        }
        break;
      case '-':
        if (next(1) == '>') {
          push(Tok::Arrow, "->", 2);
          continue;
        }
        break;
      case '=':
        if (next(1) == '>') {
          push(Tok::FatArrow, "=>", 2);
          continue;
        }
        break;
      case ':': push(Tok::Colon, ":", 1); continue;
      case '.': push(Tok::Dot, ".", 1); continue;
      case '(': push(Tok::LParen, "(", 1); continue;
      case ')': push(Tok::RParen, ")", 1); continue;
      case '<': push(Tok::LAngle, "<", 1); continue;
      case '>': push(Tok::RAngle, ">", 1); continue;
      case ',': push(Tok::Comma, ",", 1); continue;
      case '[': push(Tok::LBrack, "[", 1); continue;
      case ']': push(Tok::RBrack, "]", 1); continue;
      case '{': push(Tok::LBrace, "{", 1); continue;
      case '}': push(Tok::RBrace, "}", 1); continue;
      case '|': push(Tok::Bar, "|", 1); continue;
      case '~': push(Tok::Tilde, "~", 1); continue;
      default: break;
    }
    throw SyntaxError(line, col, "a token, found '" + std::string(1, c) + "'");
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Formula formula() {
    Formula lhs = disj();
    if (accept(Tok::Arrow)) return Formula::imp(lhs, formula());
    return lhs;
  }

  Term term() {
    if (accept(Tok::Lambda)) {
      Name x = ident();
      expect(Tok::Colon, "':'");
      Formula a = formula();
      expect(Tok::Dot, "'.'");
      return Term::lam(x, a, term());
    }
    if (peek().kind == Tok::KwDelta) {
      const Token& at = advance();
      Name k = ident();
      expect(Tok::Colon, "':'");
      Formula a = formula();
      if (!a.is_neg()) throw SyntaxError(at.line, at.column, "a negated annotation ~A on delta");
      expect(Tok::Dot, "'.'");
      return Term::delta(k, a.left(), term());
    }
    Term head = operand();
    while (true) {
      Tok k = peek().kind;
      if (k == Tok::Lambda || k == Tok::KwDelta) return Term::app(head, term());
      if (!starts_operand(k)) return head;
      head = Term::app(head, operand());
    }
  }

  Context context() {
    std::vector<std::pair<Name, Formula>> decls;
    if (peek().kind == Tok::End) return {};
    do {
      Name x = ident();
      expect(Tok::Colon, "':'");
      decls.emplace_back(x, formula());
    } while (accept(Tok::Comma));
    return Context::of(decls);
  }

  void finish() {
    if (peek().kind != Tok::End) fail("end of input");
  }

 private:
  static bool starts_operand(Tok k) {
    switch (k) {
      case Tok::Ident:
      case Tok::LParen:
      case Tok::LAngle:
      case Tok::KwCase:
      case Tok::KwP1:
      case Tok::KwP2:
      case Tok::KwIn1:
      case Tok::KwIn2: return true;
      default: return false;
    }
  }

  Formula disj() {
    Formula lhs = conj();
    if (accept(Tok::Disj)) return Formula::disj(lhs, disj());
    return lhs;
  }

  Formula conj() {
    Formula lhs = unary();
    if (accept(Tok::Conj)) return Formula::conj(lhs, conj());
    return lhs;
  }

  Formula unary() {
    if (accept(Tok::Tilde)) return Formula::neg(unary());
    if (accept(Tok::KwBot)) return Formula::bottom();
    if (accept(Tok::LParen)) {
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (peek().kind == Tok::Ident) return Formula::atom(advance().text);
    fail("a formula");
  }

  Term operand() {
    if (accept(Tok::KwP1)) return Term::proj(1, operand());
    if (accept(Tok::KwP2)) return Term::proj(2, operand());
    if (peek().kind == Tok::KwIn1 || peek().kind == Tok::KwIn2) {
      int i = advance().kind == Tok::KwIn1 ? 1 : 2;
      expect(Tok::LBrack, "'['");
      Formula d = formula();
      expect(Tok::RBrack, "']'");
      return Term::inj(i, d, operand());
    }
    return atom();
  }

  Term atom() {
    if (peek().kind == Tok::Ident) return Term::var(advance().text);
    if (accept(Tok::LParen)) {
      Term t = term();
      expect(Tok::RParen, "')'");
      return t;
    }
    if (accept(Tok::LAngle)) {
      Term a = term();
      expect(Tok::Comma, "','");
      Term b = term();
      expect(Tok::RAngle, "'>'");
      return Term::pair(a, b);
    }
    if (accept(Tok::KwCase)) {
      Term s = term();
      expect(Tok::KwOf, "'of'");
      expect(Tok::LBrace, "'{'");
      Name x = ident();
      expect(Tok::Colon, "':'");
      Formula a = formula();
      expect(Tok::FatArrow, "'=>'");
      Term p = term();
      expect(Tok::Bar, "'|'");
      Name y = ident();
      expect(Tok::Colon, "':'");
      Formula b = formula();
      expect(Tok::FatArrow, "'=>'");
      Term q = term();
      expect(Tok::RBrace, "'}'");
      return Term::case_of(s, x, a, p, y, b, q);
    }
    fail("a term");
  }

  Name ident() {
    if (peek().kind != Tok::Ident) fail("an identifier");
    return advance().text;
  }

  const Token& peek() const { return toks_[pos_]; }
  const Token& advance() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  void expect(Tok k, const char* what) {
    if (!accept(k)) fail(what);
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError(peek().line, peek().column, what);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

Term freshen(const Term& t, NameSet& scope) {
  if (t.is(TermKind::Var)) return t;
  Term out = t;
  if (t.is(TermKind::Case)) {
    out = t.with_child(0, freshen(t.child(0), scope));
    Name x = t.name(), y = t.name2();
    Term p = t.child(1), q = t.child(2);
    auto branch = [&](Name& b, Term& body) {
      if (scope.count(b)) {
        NameSet avoid = scope;
        NameSet fv = free_vars(body);
        avoid.insert(fv.begin(), fv.end());
        Name nb = fresh(avoid, b);
        body = subst(body, b, Term::var(nb));
        b = nb;
      }
      bool added = scope.insert(b).second;
      body = freshen(body, scope);
      if (added) scope.erase(b);
    };
    branch(x, p);
    branch(y, q);
    return Term::case_of(out.child(0), x, t.annot(), p, y, t.annot2(), q);
  }
  if (t.is(TermKind::Lam) || t.is(TermKind::Delta)) {
    Name b = t.name();
    Term body = t.child(0);
    if (scope.count(b)) {
      NameSet avoid = scope;
      NameSet fv = free_vars(body);
      avoid.insert(fv.begin(), fv.end());
      Name nb = fresh(avoid, b);
      body = subst(body, b, Term::var(nb));
      b = nb;
    }
    bool added = scope.insert(b).second;
    body = freshen(body, scope);
    if (added) scope.erase(b);
    return t.is(TermKind::Lam) ? Term::lam(b, t.annot(), body) : Term::delta(b, t.annot(), body);
  }
  for (std::size_t i = 0; i < t.arity(); ++i) out = out.with_child(i, freshen(t.child(i), scope));
  return out;
}

}  // namespace

Formula parse_formula(std::string_view src) {
  Parser p(src);
  Formula f = p.formula();
  p.finish();
  return f;
}

Term parse_term(std::string_view src, const Context& context) {
  Parser p(src);
  Term t = p.term();
  p.finish();
  NameSet scope = context.names();
  return freshen(t, scope);
}

Context parse_context(std::string_view src) {
  Parser p(src);
  Context c = p.context();
  p.finish();
  return c;
}

}  // namespace ldk
