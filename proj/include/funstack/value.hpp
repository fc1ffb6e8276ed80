#pragma once

#include <cstdint>
#include <memory>
#include <string>

namespace funstack {

// Canonical runtime value: unit, bool, int, real, or pair. Totally ordered
// (unit < bool < int < real < pair, false < true, pairs lexicographic) so
// measures over values have a canonical iteration order.
class Value {
 public:
  enum class Kind { Unit, Bool, Int, Real, Pair };

  Value() : kind_(Kind::Unit) {}
  static Value unit() { return Value(); }
  static Value boolean(bool b) {
    Value v; v.kind_ = Kind::Bool; v.b_ = b; return v;
  }
  static Value integer(long long i) {
    Value v; v.kind_ = Kind::Int; v.i_ = i; return v;
  }
  static Value real(double r) {
    Value v; v.kind_ = Kind::Real; v.r_ = r; return v;
  }
  static Value pair(Value a, Value b) {
    Value v;
    v.kind_ = Kind::Pair;
    v.fst_ = std::make_shared<Value>(std::move(a));
    v.snd_ = std::make_shared<Value>(std::move(b));
    return v;
  }

  Kind kind() const { return kind_; }
  bool is_unit() const { return kind_ == Kind::Unit; }
  bool is_bool() const { return kind_ == Kind::Bool; }
  bool is_int() const { return kind_ == Kind::Int; }
  bool is_real() const { return kind_ == Kind::Real; }
  bool is_pair() const { return kind_ == Kind::Pair; }

  bool as_bool() const { return b_; }
  long long as_int() const { return i_; }
  double as_real() const { return r_; }
  const Value& first() const { return *fst_; }
  const Value& second() const { return *snd_; }

  int rank() const { return static_cast<int>(kind_); }

  friend bool operator<(const Value& a, const Value& b) {
    return a.compare(b) < 0;
  }
  friend bool operator==(const Value& a, const Value& b) {
    return a.compare(b) == 0;
  }
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }

  int compare(const Value& o) const {
    if (rank() != o.rank()) return rank() < o.rank() ? -1 : 1;
    switch (kind_) {
      case Kind::Unit: return 0;
      case Kind::Bool: return b_ == o.b_ ? 0 : (!b_ ? -1 : 1);
      case Kind::Int: return i_ == o.i_ ? 0 : (i_ < o.i_ ? -1 : 1);
      case Kind::Real: return r_ == o.r_ ? 0 : (r_ < o.r_ ? -1 : 1);
      case Kind::Pair: {
        int c = fst_->compare(*o.fst_);
        if (c != 0) return c;
        return snd_->compare(*o.snd_);
      }
    }
    return 0;
  }

  std::string str() const;

 private:
  Kind kind_;
  bool b_ = false;
  long long i_ = 0;
  double r_ = 0.0;
  std::shared_ptr<Value> fst_, snd_;
};

std::string value_str(const Value& v);
inline std::string Value::str() const { return value_str(*this); }

}  // namespace funstack
