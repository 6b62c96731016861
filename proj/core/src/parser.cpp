#include "deltah/parser.hpp"

#include <cctype>
#include <cstdint>
#include <optional>
#include <vector>

namespace deltah {

namespace {

enum class Tok {
  Ident,
  Number,
  KwFun,
  KwMu,
  KwIf,
  KwThen,
  KwElse,
  KwTrue,
  KwFalse,
  KwSucc,
  KwPred,
  KwIsZero,
  KwProj1,
  KwProj2,
  KwNat,
  KwBool,
  KwBlame,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LAngle,
  RAngle,
  LTrace,  // <|
  RTrace,  // |>
  Comma,
  Dot,
  Colon,
  Pipe,
  Arrow,   // ->
  DArrow,  // =>
  Wedge,  // the "/\ " type operator
  Question,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

Tok keyword_kind(const std::string& s) {
  if (s == "fun") return Tok::KwFun;
  if (s == "mu") return Tok::KwMu;
  if (s == "if") return Tok::KwIf;
  if (s == "then") return Tok::KwThen;
  if (s == "else") return Tok::KwElse;
  if (s == "true") return Tok::KwTrue;
  if (s == "false") return Tok::KwFalse;
  if (s == "succ") return Tok::KwSucc;
  if (s == "pred") return Tok::KwPred;
  if (s == "iszero") return Tok::KwIsZero;
  if (s == "proj1") return Tok::KwProj1;
  if (s == "proj2") return Tok::KwProj2;
  if (s == "nat") return Tok::KwNat;
  if (s == "bool") return Tok::KwBool;
  if (s == "blame") return Tok::KwBlame;
  return Tok::Ident;
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> tokens;
  int line = 1, column = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (i < src.size() && src[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
      ++i;
    }
  };
  auto push = [&](Tok kind, std::string text, int l, int c) {
    tokens.push_back(Token{kind, std::move(text), l, c});
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    int tl = line, tc = column;
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
        num += src[i];
        advance(1);
      }
      push(Tok::Number, std::move(num), tl, tc);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) ||
              src[i] == '_' || src[i] == '\'')) {
        id += src[i];
        advance(1);
      }
      Tok kind = keyword_kind(id);
      push(kind, std::move(id), tl, tc);
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < src.size() && src[i + 1] == b;
    };
    if (two('-', '>')) {
      advance(2);
      push(Tok::Arrow, "->", tl, tc);
      continue;
    }
    if (two('=', '>')) {
      advance(2);
      push(Tok::DArrow, "=>", tl, tc);
      continue;
    }
    if (two('/', '\\')) {
      advance(2);
      push(Tok::Wedge, "/\\", tl, tc);
      continue;
    }
    if (two('<', '|')) {
      advance(2);
      push(Tok::LTrace, "<|", tl, tc);
      continue;
    }
    if (two('|', '>')) {
      advance(2);
      push(Tok::RTrace, "|>", tl, tc);
      continue;
    }
    switch (c) {
      case '(': advance(1); push(Tok::LParen, "(", tl, tc); continue;
      case ')': advance(1); push(Tok::RParen, ")", tl, tc); continue;
      case '{': advance(1); push(Tok::LBrace, "{", tl, tc); continue;
      case '}': advance(1); push(Tok::RBrace, "}", tl, tc); continue;
      case '<': advance(1); push(Tok::LAngle, "<", tl, tc); continue;
      case '>': advance(1); push(Tok::RAngle, ">", tl, tc); continue;
      case ',': advance(1); push(Tok::Comma, ",", tl, tc); continue;
      case '.': advance(1); push(Tok::Dot, ".", tl, tc); continue;
      case ':': advance(1); push(Tok::Colon, ":", tl, tc); continue;
      case '|': advance(1); push(Tok::Pipe, "|", tl, tc); continue;
      case '?': advance(1); push(Tok::Question, "?", tl, tc); continue;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", tl,
                         tc);
    }
  }
  tokens.push_back(Token{Tok::End, "", line, column});
  return tokens;
}

struct Parser {
  std::vector<Token> toks;
  std::size_t pos = 0;
  const ParseOptions& opts;

  const Token& peek() const { return toks[pos]; }
  const Token& next() { return toks[pos++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().column);
  }

  Token expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what);
    return next();
  }

  bool accept(Tok kind) {
    if (peek().kind == kind) {
      ++pos;
      return true;
    }
    return false;
  }

  // -- types ---------------------------------------------------------------

  TypePtr type() {
    TypePtr t = wedge_type();
    if (accept(Tok::Arrow)) return arrow(t, type());
    return t;
  }

  TypePtr wedge_type() {
    TypePtr t = atom_type();
    while (accept(Tok::Wedge)) t = wedge(t, atom_type());
    return t;
  }

  TypePtr atom_type() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::KwNat:
        next();
        return nat_type();
      case Tok::KwBool:
        next();
        return bool_type();
      case Tok::Ident: {
        if (opts.abbrevs) {
          for (const auto& [name, ty] : *opts.abbrevs) {
            if (name == t.text) {
              next();
              return ty;
            }
          }
        }
        fail("unknown type name '" + t.text + "'");
      }
      case Tok::LBrace: {
        next();
        Token binder = expect(Tok::Ident, "refinement binder");
        expect(Tok::Colon, "':'");
        TypePtr underlying = type();
        expect(Tok::Pipe, "'|'");
        ExprPtr predicate = expr();
        expect(Tok::RBrace, "'}'");
        return refine(binder.text, underlying, predicate);
      }
      case Tok::LParen: {
        next();
        TypePtr inner = type();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        fail("expected a type");
    }
  }

  TypePtr refinement_type() {
    const Token& at = peek();
    TypePtr t = type();
    if (!is_refine(t)) {
      throw ParseError("expected a refinement type", at.line, at.column);
    }
    return t;
  }

  // -- expressions ---------------------------------------------------------

  bool starts_atom(Tok k) const {
    switch (k) {
      case Tok::Number:
      case Tok::Ident:
      case Tok::KwTrue:
      case Tok::KwFalse:
      case Tok::LParen:
      case Tok::LAngle:
      case Tok::LTrace:
        return true;
      default:
        return false;
    }
  }

  bool starts_prefix(Tok k) const {
    switch (k) {
      case Tok::KwSucc:
      case Tok::KwPred:
      case Tok::KwIsZero:
      case Tok::KwProj1:
      case Tok::KwProj2:
        return true;
      default:
        return starts_atom(k);
    }
  }

  ExprPtr expr() {
    switch (peek().kind) {
      case Tok::KwFun: {
        next();
        Token param = expect(Tok::Ident, "parameter name");
        expect(Tok::Colon, "':'");
        TypePtr ann = type();
        expect(Tok::Dot, "'.'");
        return abs(param.text, ann, expr());
      }
      case Tok::KwMu: {
        Token mu = next();
        Token self = expect(Tok::Ident, "recursion name");
        expect(Tok::Colon, "':'");
        TypePtr ann = type();
        expect(Tok::Dot, "'.'");
        ExprPtr body = expr();
        try {
          return fix(self.text, ann, body);
        } catch (const std::invalid_argument& ex) {
          throw ParseError(ex.what(), mu.line, mu.column);
        }
      }
      case Tok::KwIf: {
        next();
        ExprPtr cond = expr();
        expect(Tok::KwThen, "'then'");
        ExprPtr then_branch = expr();
        expect(Tok::KwElse, "'else'");
        ExprPtr else_branch = expr();
        return if_expr(cond, then_branch, else_branch);
      }
      default:
        return application();
    }
  }

  ExprPtr application() {
    ExprPtr e = prefix_expr();
    while (starts_prefix(peek().kind)) e = app(e, prefix_expr());
    return e;
  }

  ExprPtr prefix_expr() {
    switch (peek().kind) {
      case Tok::KwSucc:
        next();
        return succ(prefix_expr());
      case Tok::KwPred:
        next();
        return pred(prefix_expr());
      case Tok::KwIsZero:
        next();
        return iszero(prefix_expr());
      case Tok::KwProj1:
        next();
        return proj(1, prefix_expr());
      case Tok::KwProj2:
        next();
        return proj(2, prefix_expr());
      default:
        return atom();
    }
  }

  ExprPtr atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        next();
        return numeral(std::stoull(t.text));
      }
      case Tok::KwTrue:
        next();
        return true_expr();
      case Tok::KwFalse:
        next();
        return false_expr();
      case Tok::Ident:
        next();
        return var(t.text);
      case Tok::LAngle: {
        next();
        ExprPtr left = expr();
        expect(Tok::Comma, "','");
        ExprPtr right = expr();
        expect(Tok::RAngle, "'>'");
        return pair(left, right);
      }
      case Tok::LTrace:
        return runtime_form();
      case Tok::LParen: {
        next();
        ExprPtr inner = expr();
        if (accept(Tok::Colon)) {
          TypePtr source = type();
          expect(Tok::DArrow, "'=>'");
          TypePtr target = type();
          expect(Tok::RParen, "')'");
          return cast(inner, source, target);
        }
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        fail("expected an expression");
    }
  }

  ExprPtr runtime_form() {
    Token open = expect(Tok::LTrace, "'<|'");
    if (opts.mode == ParseOptions::Mode::Source) {
      throw ParseError("run-time forms are not source syntax", open.line,
                       open.column);
    }
    ExprPtr first = expr();
    try {
      if (accept(Tok::Colon)) {
        TypePtr source = type();
        expect(Tok::DArrow, "'=>'");
        TypePtr target = type();
        expect(Tok::RTrace, "'|>'");
        const auto* a = std::get_if<ArrowType>(&target->node);
        if (!a) {
          throw ParseError("delayed-check target must be an arrow type",
                           open.line, open.column);
        }
        return delayed(first, source, a->domain, a->codomain);
      }
      if (accept(Tok::Question)) {
        TypePtr r = refinement_type();
        expect(Tok::RTrace, "'|>'");
        const auto& rf = std::get<RefineType>(r->node);
        return waiting(first, rf.binder, rf.underlying, rf.predicate);
      }
      expect(Tok::DArrow, "'=>', ':' or '?'");
      ExprPtr subject = application();
      expect(Tok::Colon, "':'");
      TypePtr r = refinement_type();
      expect(Tok::RTrace, "'|>'");
      const auto& rf = std::get<RefineType>(r->node);
      return active(first, subject, rf.binder, rf.underlying, rf.predicate);
    } catch (const std::invalid_argument& ex) {
      throw ParseError(ex.what(), open.line, open.column);
    }
  }
};

Parser make_parser(std::string_view src, const ParseOptions& opts) {
  return Parser{lex(src), 0, opts};
}

}  // namespace

ExprPtr parse_expr(std::string_view src, const ParseOptions& opts) {
  Parser p = make_parser(src, opts);
  ExprPtr e = p.expr();
  p.expect(Tok::End, "end of input");
  return e;
}

TypePtr parse_type(std::string_view src, const ParseOptions& opts) {
  Parser p = make_parser(src, opts);
  TypePtr t = p.type();
  p.expect(Tok::End, "end of input");
  return t;
}

Command parse_command(std::string_view src, const ParseOptions& opts) {
  Parser p = make_parser(src, opts);
  if (p.accept(Tok::KwBlame)) {
    p.expect(Tok::End, "end of input");
    return Command::blame();
  }
  ExprPtr e = p.expr();
  p.expect(Tok::End, "end of input");
  return Command::term(e);
}

}  // namespace deltah
