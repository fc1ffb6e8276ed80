#include "funstack/eval.hpp"

#include "funstack/errors.hpp"

namespace funstack {

Value apply_op(OpCode op, const Value& a, const Value& b) {
  switch (op) {
    case OpCode::And: return Value::boolean(a.as_bool() && b.as_bool());
    case OpCode::Or: return Value::boolean(a.as_bool() || b.as_bool());
    case OpCode::Eq: return Value::boolean(a == b);
    case OpCode::Gt:
      if (a.is_int()) return Value::boolean(a.as_int() > b.as_int());
      return Value::boolean(a.as_real() > b.as_real());
    case OpCode::Add:
      if (a.is_int()) return Value::integer(a.as_int() + b.as_int());
      return Value::real(a.as_real() + b.as_real());
    case OpCode::Sub:
      if (a.is_int()) return Value::integer(a.as_int() - b.as_int());
      return Value::real(a.as_real() - b.as_real());
    case OpCode::Mul:
      if (a.is_int()) return Value::integer(a.as_int() * b.as_int());
      return Value::real(a.as_real() * b.as_real());
    case OpCode::Mod: {
      long long d = b.as_int();
      if (d == 0) throw InternalError("modulo by zero");
      return Value::integer(a.as_int() % d);
    }
  }
  throw InternalError("unhandled operator");
}

Value eval_value_expr(
    const Expr& v, const std::function<Value(const std::string&)>& lookup) {
  switch (v.kind) {
    case Expr::Kind::Var:
      return lookup(v.name);
    case Expr::Kind::Const:
      return v.lit;
    case Expr::Kind::Pair:
      return Value::pair(eval_value_expr(*v.kids[0], lookup),
                         eval_value_expr(*v.kids[1], lookup));
    default:
      throw InternalError("eval_value_expr on non-value node");
  }
}

}  // namespace funstack
