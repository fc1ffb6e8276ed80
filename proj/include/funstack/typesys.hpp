#pragma once

#include <optional>
#include <string>
#include <vector>

#include "funstack/ast.hpp"
#include "funstack/type.hpp"

namespace funstack {

struct DistSig {
  std::string name;
  std::vector<Type> params;
  Type result;
  bool discrete;
};

// The seven distributions: Bernoulli, Binomial, Poisson, DiscreteUniform,
// Gaussian, Beta, Gamma. Null when unknown.
const DistSig* dist_sig(const std::string& name);
const std::vector<DistSig>& all_dist_sigs();

// Operator signature table; empty when the combination is untyped.
std::optional<Type> op_result(OpCode op, const Type& a, const Type& b);

// Typecheck and annotate (types on every node, observed base types on
// observes). Rewrites observe-sugared real equality to subtraction.
Type typecheck(const ExprPtr& e, const TypeEnv& env);

// Expand arrays into tuples: array literals become right-nested tuples,
// indexing becomes pi_n with the index wrapped to [0, n), comprehensions
// unroll to let-chains. Result is array-free A-normal form (re-typecheck to
// refresh annotations).
ExprPtr unroll_arrays(const ExprPtr& e);

// True when every random draws a discrete distribution and every observe is
// at discrete type (requires a typed AST).
bool program_all_discrete(const Expr& e);

// True when every random is Bernoulli with constant parameter.
bool program_bernoulli_fun(const Expr& e);

}  // namespace funstack
