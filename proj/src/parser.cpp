#include <cstdlib>

#include "funstack/errors.hpp"
#include "funstack/frontend.hpp"

namespace funstack {

namespace {

SExprPtr snode(SExpr::Kind k, Span sp) {
  auto e = std::make_shared<SExpr>();
  e->kind = k;
  e->span = sp;
  return e;
}

class Parser {
 public:
  explicit Parser(const std::vector<Token>& toks) : toks_(toks) {}

  SExprPtr run() {
    auto e = expr();
    expect_end();
    return e;
  }

 private:
  const std::vector<Token>& toks_;
  size_t pos_ = 0;

  const Token& cur() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool at_punct(const std::string& p) const {
    return cur().kind == Token::Kind::Punct && cur().lexeme == p;
  }
  bool at_kw(const std::string& k) const {
    return cur().kind == Token::Kind::Keyword && cur().lexeme == k;
  }
  bool eat_punct(const std::string& p) {
    if (!at_punct(p)) return false;
    ++pos_;
    return true;
  }
  void expect_punct(const std::string& p) {
    if (!eat_punct(p))
      throw ParseError("expected '" + p + "', found '" + cur().lexeme + "'",
                       cur().span);
  }
  void expect_kw(const std::string& k) {
    if (!at_kw(k))
      throw ParseError("expected '" + k + "', found '" + cur().lexeme + "'",
                       cur().span);
    ++pos_;
  }
  std::string expect_ident() {
    if (cur().kind != Token::Kind::Ident)
      throw ParseError("expected identifier, found '" + cur().lexeme + "'",
                       cur().span);
    return next().lexeme;
  }
  void expect_end() {
    if (cur().kind != Token::Kind::End)
      throw ParseError("unexpected trailing input '" + cur().lexeme + "'",
                       cur().span);
  }

  bool at_eq() const { return at_punct("=") || at_punct("=="); }

  // expr := seq of let-level expressions
  SExprPtr expr() {
    auto e = let_level();
    if (eat_punct(";")) {
      auto rest = expr();
      auto s = snode(SExpr::Kind::Seq, e->span);
      s->kids = {e, rest};
      return s;
    }
    return e;
  }

  SExprPtr let_level() {
    Span sp = cur().span;
    if (at_kw("let")) {
      ++pos_;
      auto e = snode(SExpr::Kind::Let, sp);
      if (eat_punct("(")) {
        e->params.push_back(expect_ident());
        while (eat_punct(",")) e->params.push_back(expect_ident());
        expect_punct(")");
        if (e->params.size() < 2)
          throw ParseError("tuple pattern needs at least two names", sp);
      } else {
        e->params.push_back(expect_ident());
      }
      if (!eat_punct("=") && !eat_punct("=="))
        throw ParseError("expected '=' in let binding", cur().span);
      e->kids.push_back(expr());
      expect_kw("in");
      e->kids.push_back(expr());
      return e;
    }
    if (at_kw("fun")) {
      ++pos_;
      auto e = snode(SExpr::Kind::FunDef, sp);
      e->name = expect_ident();
      while (cur().kind == Token::Kind::Ident)
        e->params.push_back(next().lexeme);
      if (e->params.empty())
        throw ParseError("function definition needs at least one parameter",
                         sp);
      if (!eat_punct("=") && !eat_punct("=="))
        throw ParseError("expected '=' in function definition", cur().span);
      e->kids.push_back(expr());
      expect_kw("in");
      e->kids.push_back(expr());
      return e;
    }
    if (at_kw("if")) {
      ++pos_;
      auto e = snode(SExpr::Kind::If, sp);
      e->kids.push_back(expr());
      expect_kw("then");
      e->kids.push_back(expr());
      expect_kw("else");
      e->kids.push_back(expr());
      return e;
    }
    if (at_kw("observe")) {
      ++pos_;
      auto e = snode(SExpr::Kind::Observe, sp);
      e->kids.push_back(postfix());
      return e;
    }
    return or_level();
  }

  SExprPtr binop(SExprPtr a, OpCode op, SExprPtr b) {
    auto e = snode(SExpr::Kind::Op, a->span);
    e->op = op;
    e->kids = {a, b};
    return e;
  }

  SExprPtr or_level() {
    auto a = and_level();
    while (eat_punct("||")) a = binop(a, OpCode::Or, and_level());
    return a;
  }
  SExprPtr and_level() {
    auto a = cmp_level();
    while (eat_punct("&&")) a = binop(a, OpCode::And, cmp_level());
    return a;
  }
  SExprPtr cmp_level() {
    auto a = add_level();
    for (;;) {
      if (at_eq()) {
        ++pos_;
        a = binop(a, OpCode::Eq, add_level());
      } else if (eat_punct(">")) {
        a = binop(a, OpCode::Gt, add_level());
      } else {
        return a;
      }
    }
  }
  SExprPtr add_level() {
    auto a = mul_level();
    for (;;) {
      if (eat_punct("+"))
        a = binop(a, OpCode::Add, mul_level());
      else if (eat_punct("-"))
        a = binop(a, OpCode::Sub, mul_level());
      else
        return a;
    }
  }
  SExprPtr mul_level() {
    auto a = app_level();
    for (;;) {
      if (eat_punct("*"))
        a = binop(a, OpCode::Mul, app_level());
      else if (eat_punct("%"))
        a = binop(a, OpCode::Mod, app_level());
      else
        return a;
    }
  }

  bool at_atom_start() const {
    switch (cur().kind) {
      case Token::Kind::Ident:
      case Token::Kind::IntLit:
      case Token::Kind::RealLit:
      case Token::Kind::BoolLit:
        return true;
      case Token::Kind::Punct:
        return cur().lexeme == "(" || cur().lexeme == "[";
      case Token::Kind::Keyword:
        return cur().lexeme == "random" || cur().lexeme == "if" ||
               cur().lexeme == "observe";
      default:
        return false;
    }
  }

  // Function application by juxtaposition: `f a b`.
  SExprPtr app_level() {
    if (cur().kind == Token::Kind::Ident &&
        toks_[pos_ + 1].kind != Token::Kind::End) {
      size_t save = pos_;
      std::string fn = next().lexeme;
      if (at_atom_start() && !at_kw("if") && !at_kw("observe")) {
        auto e = snode(SExpr::Kind::Apply, toks_[save].span);
        e->name = fn;
        while (at_atom_start() && !at_kw("if") && !at_kw("observe"))
          e->kids.push_back(postfix());
        return e;
      }
      pos_ = save;
    }
    return postfix();
  }

  SExprPtr postfix() {
    auto a = atom();
    for (;;) {
      if (at_punct(".")) {
        Span sp = cur().span;
        ++pos_;
        if (eat_punct("[")) {
          auto e = snode(SExpr::Kind::Index, sp);
          e->kids = {a, expr()};
          expect_punct("]");
          a = e;
        } else if (cur().kind == Token::Kind::IntLit) {
          int which = std::atoi(next().lexeme.c_str());
          if (which != 1 && which != 2)
            throw ParseError("projection must be .1 or .2", sp);
          auto e = snode(SExpr::Kind::Proj, sp);
          e->proj = which;
          e->kids = {a};
          a = e;
        } else {
          throw ParseError("expected projection index or '[' after '.'", sp);
        }
      } else {
        return a;
      }
    }
  }

  SExprPtr atom() {
    Span sp = cur().span;
    switch (cur().kind) {
      case Token::Kind::Ident: {
        auto e = snode(SExpr::Kind::Var, sp);
        e->name = next().lexeme;
        return e;
      }
      case Token::Kind::IntLit: {
        auto e = snode(SExpr::Kind::Const, sp);
        e->lit = Value::integer(std::atoll(next().lexeme.c_str()));
        return e;
      }
      case Token::Kind::RealLit: {
        auto e = snode(SExpr::Kind::Const, sp);
        e->lit = Value::real(std::strtod(next().lexeme.c_str(), nullptr));
        return e;
      }
      case Token::Kind::BoolLit: {
        auto e = snode(SExpr::Kind::Const, sp);
        e->lit = Value::boolean(next().lexeme == "true");
        return e;
      }
      default:
        break;
    }
    if (at_kw("random")) {
      ++pos_;
      expect_punct("(");
      auto e = snode(SExpr::Kind::Random, sp);
      e->name = expect_ident();
      expect_punct("(");
      e->kids.push_back(expr());
      while (eat_punct(",")) e->kids.push_back(expr());
      expect_punct(")");
      expect_punct(")");
      return e;
    }
    if (at_kw("if") || at_kw("observe")) return let_level();
    if (eat_punct("(")) {
      if (eat_punct(")")) {
        auto e = snode(SExpr::Kind::Const, sp);
        e->lit = Value::unit();
        return e;
      }
      auto first = expr();
      if (eat_punct(",")) {
        auto e = snode(SExpr::Kind::Tuple, sp);
        e->kids.push_back(first);
        e->kids.push_back(expr());
        while (eat_punct(",")) e->kids.push_back(expr());
        expect_punct(")");
        return e;
      }
      expect_punct(")");
      return first;
    }
    if (eat_punct("[")) {
      if (at_kw("for")) {
        ++pos_;
        auto e = snode(SExpr::Kind::For, sp);
        e->name = expect_ident();
        expect_kw("in");
        e->kids.push_back(expr());
        expect_punct("->");
        e->kids.push_back(expr());
        expect_punct("]");
        return e;
      }
      auto e = snode(SExpr::Kind::ArrayLit, sp);
      e->kids.push_back(let_level());
      while (eat_punct(";")) e->kids.push_back(let_level());
      expect_punct("]");
      return e;
    }
    throw ParseError("expected expression, found '" + cur().lexeme + "'", sp);
  }
};

}  // namespace

SExprPtr parse(const std::vector<Token>& tokens) {
  return Parser(tokens).run();
}

SExprPtr parse_program(const std::string& source) {
  return parse(tokenize(source));
}

}  // namespace funstack
