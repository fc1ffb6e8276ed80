#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "funstack/ast.hpp"
#include "funstack/imp.hpp"

namespace funstack {

// Translation pattern: p ::= l | () | (p,p). A leaf with a nonempty range
// denotes the array-extension form l[r].
struct Pattern {
  enum class Kind { Unit, Loc, Pair };
  Kind kind = Kind::Unit;
  std::string loc;
  std::string range;
  std::shared_ptr<Pattern> a, b;

  static Pattern unit() { return {}; }
  static Pattern location(std::string l, std::string r = "") {
    Pattern p;
    p.kind = Kind::Loc;
    p.loc = std::move(l);
    p.range = std::move(r);
    return p;
  }
  static Pattern pair(Pattern x, Pattern y) {
    Pattern p;
    p.kind = Kind::Pair;
    p.a = std::make_shared<Pattern>(std::move(x));
    p.b = std::make_shared<Pattern>(std::move(y));
    return p;
  }
  std::string str() const;
};

// Leaf location names, left to right.
void pattern_locs(const Pattern& p, std::vector<std::string>& out);

// p ~ p' (same shape).
bool pattern_compat(const Pattern& p, const Pattern& q);

// p <- p' as componentwise assignments; ShapeError when not p ~ p'.
ImpStmtPtr pattern_assign(const Pattern& p, const Pattern& q);

// Sigma |- p : t.
Type pattern_type(const Pattern& p, const ImpEnv& sigma);

// V[[p]]s over an encoded Sigma-state.
Value pattern_value(const Pattern& p, const std::vector<std::string>& sigma,
                    const Value& s);

// Layout rho: Fun variable -> pattern.
using Layout = std::map<std::string, Pattern>;

// lift rho : S_Gamma -> S_Sigma (flatten pattern bindings to locations);
// restrict rho : S_Sigma -> S_Gamma. restrict . lift = id.
Value lift_state(const Layout& rho, const std::vector<std::string>& gamma,
                 const std::vector<std::string>& sigma, const Value& s);
Value restrict_state(const Layout& rho, const std::vector<std::string>& sigma,
                     const std::vector<std::string>& gamma, const Value& s);

struct TranslateResult {
  ImpStmtPtr stmt;
  Pattern pattern;
  ImpEnv sigma_prime;  // empty when stmt still contains for-loops
};

// rho |- M => C, p with fresh locations l0, l1, ... in rule-application
// order. Requires a typed AST. Core programs are statically checked after
// translation (Sigma |- C : Sigma' and Sigma,Sigma' |- p : t); programs with
// comprehensions keep their for-loops and are checked after unrolling.
TranslateResult translate(const Layout& rho, const ImpEnv& sigma,
                          const ExprPtr& m);

// Trans For on a single comprehension node.
TranslateResult translate_for(const Layout& rho, const ImpEnv& sigma,
                              const ExprPtr& comprehension);

// Expand every `for r C` into |r| copies with r-indexed locations
// instantiated 0..|r|-1 and body locals renamed fresh per copy.
ImpStmtPtr unroll_imp(const ImpStmtPtr& c);

// Value lemma check: C consists only of nil and constant assignments.
bool imp_only_const_assigns(const ImpStmt& c);

}  // namespace funstack
