#pragma once

#include <functional>

#include "funstack/ast.hpp"
#include "funstack/value.hpp"

namespace funstack {

// Total on well-typed operands; deterministic operator meaning. Int `%` is
// truncated division remainder (sign of the dividend).
Value apply_op(OpCode op, const Value& a, const Value& b);

// Evaluate a value expression, resolving variables through `lookup`.
Value eval_value_expr(const Expr& v,
                      const std::function<Value(const std::string&)>& lookup);

}  // namespace funstack
