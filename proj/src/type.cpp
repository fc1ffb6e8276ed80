#include "funstack/type.hpp"

#include "funstack/errors.hpp"

namespace funstack {

std::string type_str(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::Unit: return "unit";
    case Type::Kind::Bool: return "bool";
    case Type::Kind::Int: return "int";
    case Type::Kind::Real: return "real";
    case Type::Kind::Pair:
      return "(" + type_str(t.first()) + " * " + type_str(t.second()) + ")";
    case Type::Kind::Array:
      return type_str(t.elem()) + "[" + std::to_string(t.size()) + "]";
  }
  return "?";
}

Value zero_element(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::Unit: return Value::unit();
    case Type::Kind::Bool: return Value::boolean(true);
    case Type::Kind::Int: return Value::integer(0);
    case Type::Kind::Real: return Value::real(0.0);
    case Type::Kind::Pair:
      return Value::pair(zero_element(t.first()), zero_element(t.second()));
    case Type::Kind::Array:
      throw InternalError("zero_element on array type " + t.str());
  }
  return Value::unit();
}

}  // namespace funstack
