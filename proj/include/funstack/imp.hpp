#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "funstack/ast.hpp"
#include "funstack/measure.hpp"
#include "funstack/type.hpp"

namespace funstack {

// Imp expressions: constants, locations, or an operator on two locations.
struct ImpExpr {
  enum class Kind { Const, Loc, Op };
  Kind kind = Kind::Const;
  Value c;
  std::string l1, l2;
  OpCode op = OpCode::And;

  static ImpExpr constant(Value v) {
    ImpExpr e;
    e.kind = Kind::Const;
    e.c = std::move(v);
    return e;
  }
  static ImpExpr loc(std::string l) {
    ImpExpr e;
    e.kind = Kind::Loc;
    e.l1 = std::move(l);
    return e;
  }
  static ImpExpr binop(OpCode op, std::string a, std::string b) {
    ImpExpr e;
    e.kind = Kind::Op;
    e.op = op;
    e.l1 = std::move(a);
    e.l2 = std::move(b);
    return e;
  }
  std::string str() const;
};

struct ImpStmt;
using ImpStmtPtr = std::shared_ptr<ImpStmt>;

// SSA-style statements. `For` is the §-array extension produced only by
// translate_for; it must be unrolled before typing or interpreting.
struct ImpStmt {
  enum class Kind { Nil, Assign, RandomAssign, Observe, If, Local, Seq, For };
  Kind kind = Kind::Nil;
  std::string loc;   // Assign/RandomAssign/Observe target, If condition,
                     // Local binder
  Type base;         // Local declared type; Observe observed type
  ImpExpr expr;      // Assign
  std::string dist;  // RandomAssign distribution
  std::vector<std::string> args;  // RandomAssign parameter locations
  std::vector<ImpStmtPtr> kids;   // If: {then, else}; Local/For: {body};
                                  // Seq: {first, second}
  std::string range;              // For: range identifier
  int range_size = 0;             // For: |r|
};

ImpStmtPtr imp_nil();
ImpStmtPtr imp_assign(std::string l, ImpExpr e);
ImpStmtPtr imp_random(std::string l, std::string dist,
                      std::vector<std::string> args);
ImpStmtPtr imp_observe(std::string l, Type base);
ImpStmtPtr imp_if(std::string cond, ImpStmtPtr then_c, ImpStmtPtr else_c);
ImpStmtPtr imp_local(std::string l, Type base, ImpStmtPtr body);
ImpStmtPtr imp_seq(ImpStmtPtr a, ImpStmtPtr b);

// Ordered location environment Sigma.
using ImpEnv = std::vector<std::pair<std::string, Type>>;

// Sigma |- C : Sigma'. Newly assigned locations in assignment order.
ImpEnv typecheck_imp(const ImpStmtPtr& c, const ImpEnv& sigma);

// impdt[[C]]: measure transformer over encoded states. Returns the
// transformer and the output environment names Sigma, Sigma'.
std::pair<MeasureTransformer, std::vector<std::string>> transform_imp(
    const ImpStmtPtr& c, const ImpEnv& sigma);

// Pull local declarations to the front; if-branch locals stay inside their
// branch (each branch itself in hoisted form).
ImpStmtPtr hoist_locals(const ImpStmtPtr& c);

// Locations assigned by C (SSA targets, including inside locals/branches).
void imp_locations(const ImpStmt& c, std::vector<std::string>& out);

std::string imp_print(const ImpStmt& c);

}  // namespace funstack
