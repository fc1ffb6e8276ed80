#pragma once

#include <memory>
#include <string>
#include <vector>

#include "funstack/ast.hpp"

namespace funstack {

struct Token {
  enum class Kind { Ident, IntLit, RealLit, BoolLit, Keyword, Punct, End };
  Kind kind;
  std::string lexeme;
  Span span;
};

std::vector<Token> tokenize(const std::string& source);

struct SExpr;
using SExprPtr = std::shared_ptr<SExpr>;

// Surface syntax before desugaring: tuples of any arity, sequencing,
// first-order function definitions and applications, tuple-binding lets.
struct SExpr {
  enum class Kind {
    Var, Const, Tuple, Proj, Op, If, Let, Random, Observe,
    FunDef, Apply, Seq, ArrayLit, Index, For
  };
  Kind kind;
  Span span;
  std::string name;                 // Var/Let binder/Random dist/FunDef/Apply/For
  std::vector<std::string> params;  // FunDef parameters; Let tuple pattern
  Value lit;
  OpCode op = OpCode::And;
  int proj = 0;
  std::vector<SExprPtr> kids;
};

SExprPtr parse(const std::vector<Token>& tokens);
SExprPtr parse_program(const std::string& source);

std::string print_surface(const SExpr& e);

// Desugar to the core A-normal-form calculus. Fresh names are %d0, %d1, ...;
// bound variables in the output are pairwise distinct and distinct from free
// variables.
ExprPtr desugar(const SExpr& e);

ExprPtr load_program_text(const std::string& source);

}  // namespace funstack
