#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "funstack/value.hpp"

namespace funstack {

// Monomorphic Fun types: unit, bool, int, real, pairs, and statically sized
// arrays (no nesting of arrays inside array elements).
class Type {
 public:
  enum class Kind { Unit, Bool, Int, Real, Pair, Array };

  Type() : kind_(Kind::Unit) {}
  static Type unit() { return Type(); }
  static Type boolean() { return base(Kind::Bool); }
  static Type integer() { return base(Kind::Int); }
  static Type real() { return base(Kind::Real); }
  static Type pair(Type a, Type b) {
    Type t;
    t.kind_ = Kind::Pair;
    t.a_ = std::make_shared<Type>(std::move(a));
    t.b_ = std::make_shared<Type>(std::move(b));
    return t;
  }
  static Type array(Type elem, int size) {
    Type t;
    t.kind_ = Kind::Array;
    t.a_ = std::make_shared<Type>(std::move(elem));
    t.size_ = size;
    return t;
  }

  Kind kind() const { return kind_; }
  bool is_unit() const { return kind_ == Kind::Unit; }
  bool is_bool() const { return kind_ == Kind::Bool; }
  bool is_int() const { return kind_ == Kind::Int; }
  bool is_real() const { return kind_ == Kind::Real; }
  bool is_pair() const { return kind_ == Kind::Pair; }
  bool is_array() const { return kind_ == Kind::Array; }
  bool is_base() const { return is_bool() || is_int() || is_real(); }
  bool is_discrete_base() const { return is_bool() || is_int(); }

  const Type& first() const { return *a_; }
  const Type& second() const { return *b_; }
  const Type& elem() const { return *a_; }
  int size() const { return size_; }

  bool contains_array() const {
    if (is_array()) return true;
    if (is_pair()) return a_->contains_array() || b_->contains_array();
    return false;
  }

  // True when every random/observe-relevant leaf is discrete.
  bool all_discrete() const {
    if (is_real()) return false;
    if (is_pair()) return a_->all_discrete() && b_->all_discrete();
    if (is_array()) return a_->all_discrete();
    return true;
  }

  friend bool operator==(const Type& x, const Type& y) {
    if (x.kind_ != y.kind_) return false;
    switch (x.kind_) {
      case Kind::Pair:
        return *x.a_ == *y.a_ && *x.b_ == *y.b_;
      case Kind::Array:
        return x.size_ == y.size_ && *x.a_ == *y.a_;
      default:
        return true;
    }
  }
  friend bool operator!=(const Type& x, const Type& y) { return !(x == y); }

  std::string str() const;

 private:
  static Type base(Kind k) {
    Type t;
    t.kind_ = k;
    return t;
  }
  Kind kind_;
  std::shared_ptr<Type> a_, b_;
  int size_ = 0;
};

// Ordered typing environment Gamma; names pairwise distinct.
using TypeEnv = std::vector<std::pair<std::string, Type>>;

std::string type_str(const Type& t);
inline std::string Type::str() const { return type_str(*this); }

// Zero element 0_b: true / 0 / 0.0, pairs componentwise. Defined for
// array-free types.
Value zero_element(const Type& t);

}  // namespace funstack
