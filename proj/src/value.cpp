#include "funstack/value.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace funstack {

// Shortest decimal form that parses back to the same binary64, with a
// decimal marker so real literals stay distinguishable from int literals.
static std::string real_str(double r) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, r);
    if (std::strtod(buf, nullptr) == r) break;
  }
  if (!std::strpbrk(buf, ".einN")) std::strcat(buf, ".0");
  return buf;
}

std::string value_str(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Unit: return "()";
    case Value::Kind::Bool: return v.as_bool() ? "true" : "false";
    case Value::Kind::Int: return std::to_string(v.as_int());
    case Value::Kind::Real: return real_str(v.as_real());
    case Value::Kind::Pair:
      return "(" + value_str(v.first()) + ", " + value_str(v.second()) + ")";
  }
  return "?";
}

}  // namespace funstack
