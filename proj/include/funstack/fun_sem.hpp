#pragma once

#include <string>
#include <vector>

#include "funstack/ast.hpp"
#include "funstack/measure.hpp"

namespace funstack {

// States over an ordered environment x1..xn are encoded as the right-nested
// tuple unit * t1 * ... * tn; the empty state is ().
Value encode_state(const std::vector<Value>& vals);
std::vector<Value> decode_state(const Value& s, std::size_t n);

// Totalized state operations from the semantics: add is the identity when x
// is already bound, lookup yields () when absent.
Value state_add(const std::vector<std::string>& names, const Value& s,
                const std::string& x, const Value& c);
Value state_lookup(const std::vector<std::string>& names, const Value& s,
                   const std::string& x);
Value state_drop(const std::vector<std::string>& names, const Value& s,
                 const std::vector<std::string>& drop);

// Evaluate a value expression in an encoded state.
Value eval_value(const Expr& v, const std::vector<std::string>& names,
                 const Value& s);

// A[[M]] over state measures: maps measures over S_Gamma to measures over
// S_Gamma x t. Requires a typed AST with pairwise-distinct bound variables.
MeasureTransformer transform(const ExprPtr& e,
                             const std::vector<std::string>& gamma);

// Run the transformer of a closed program on delta_(), project the value
// component, normalize. Returns (posterior, evidence).
std::pair<FiniteMeasure, double> infer_mt(const ExprPtr& e);

// Unnormalized value marginal of A[[M]] delta_() for a closed program.
FiniteMeasure value_marginal_mt(const ExprPtr& e);

}  // namespace funstack
