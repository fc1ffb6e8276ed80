#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "funstack/errors.hpp"
#include "funstack/type.hpp"
#include "funstack/value.hpp"

namespace funstack {

enum class OpCode { And, Or, Eq, Gt, Add, Sub, Mul, Mod };

std::string op_str(OpCode op);

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

// Core Fun expression in A-normal form. Value positions (operator operands,
// pair components, projection targets, if conditions, random parameters,
// observe arguments, array elements, index operands) hold only value nodes
// (Var / Const / Pair built from values).
struct Expr {
  enum class Kind {
    Var,       // name
    Const,     // lit (unit, bool, int, or real scalar)
    Pair,      // kids[0], kids[1]
    Op,        // op, kids[0], kids[1]
    Proj,      // proj in {1,2}, kids[0]
    If,        // kids[0] cond, kids[1] then, kids[2] else
    Let,       // name binder, kids[0] bound, kids[1] body
    Random,    // name = distribution, kids = parameter values
    Observe,   // kids[0]
    ArrayLit,  // kids = element values
    Index,     // kids[0] array value, kids[1] int value
    For        // name = iteration binder, kids[0] source var, kids[1] body
  };

  Kind kind;
  Span span;
  std::string name;
  Value lit;
  OpCode op = OpCode::And;
  int proj = 0;
  std::vector<ExprPtr> kids;

  // Set by the typechecker.
  Type type;
  bool typed = false;
  // Equality written directly under an observe in the surface syntax; the
  // typechecker rewrites it to subtraction when both operands are real.
  bool obs_eq_sugar = false;
  // Observe nodes: the observed base type.
  Type observed_type;

  // Monte Carlo annotations (observe_rewrite).
  enum class ObsMode { Discrete, LonePivot, SharedPivot, Unsupported };
  ObsMode obs_mode = ObsMode::Discrete;
  std::string pivot_var;       // the random draw being observed
  ExprPtr pivot_offset;        // value expression E, null for bare `x`
  bool pivot_negated = false;  // true for E - x, false for x - E or bare x
  bool pivot_preweighted = false;  // weight applied at the draw site
  bool pivot_site = false;         // set on the Let binding the pivot draw
  double pivot_force = 0.0;        // forced value for shared pivots
};

ExprPtr mk_var(const std::string& n, Span sp = {});
ExprPtr mk_const(Value v, Span sp = {});
ExprPtr mk_pair(ExprPtr a, ExprPtr b, Span sp = {});
ExprPtr mk_op(OpCode op, ExprPtr a, ExprPtr b, Span sp = {});
ExprPtr mk_proj(int which, ExprPtr a, Span sp = {});
ExprPtr mk_if(ExprPtr c, ExprPtr t, ExprPtr e, Span sp = {});
ExprPtr mk_let(const std::string& x, ExprPtr bound, ExprPtr body, Span sp = {});
ExprPtr mk_random(const std::string& dist, std::vector<ExprPtr> params,
                  Span sp = {});
ExprPtr mk_observe(ExprPtr v, Span sp = {});

bool is_value(const Expr& e);
bool is_anf(const Expr& e);

void free_vars(const Expr& e, std::set<std::string>& out);
std::set<std::string> free_vars(const Expr& e);
void bound_vars(const Expr& e, std::vector<std::string>& out);

// Capture-avoiding substitution of a closed value expression for a variable.
ExprPtr subst(const ExprPtr& e, const std::string& x, const ExprPtr& v);

bool expr_equal(const Expr& a, const Expr& b);

std::string expr_str(const Expr& e);

}  // namespace funstack
