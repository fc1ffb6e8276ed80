#include "funstack/measure.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>

#include "funstack/dists.hpp"
#include "funstack/errors.hpp"

namespace funstack {

namespace {
std::atomic<std::size_t> g_support_cap{1000000};
}

std::size_t measure_support_cap() { return g_support_cap.load(); }
void set_measure_support_cap(std::size_t cap) { g_support_cap.store(cap); }

FiniteMeasure FiniteMeasure::dirac(const Value& c) {
  FiniteMeasure m;
  m.add_weight(c, 1.0);
  return m;
}

void FiniteMeasure::add_weight(const Value& v, double w) {
  if (w == 0.0) return;
  if (w < 0.0 || !std::isfinite(w))
    throw InternalError("non-finite or negative measure weight");
  auto [it, inserted] = w_.try_emplace(v, w);
  if (!inserted) it->second += w;
  if (inserted && w_.size() > measure_support_cap())
    throw SupportOverflow("measure support exceeds cap of " +
                          std::to_string(measure_support_cap()));
}

double FiniteMeasure::at(const Value& v) const {
  auto it = w_.find(v);
  return it == w_.end() ? 0.0 : it->second;
}

double FiniteMeasure::total() const {
  double t = 0.0;
  for (const auto& [v, w] : w_) t += w;
  return t;
}

MeasureTransformer mt_pure(std::function<Value(const Value&)> f) {
  return [f = std::move(f)](const FiniteMeasure& mu) {
    FiniteMeasure out;
    for (const auto& [v, w] : mu.entries()) out.add_weight(f(v), w);
    return out;
  };
}

MeasureTransformer mt_compose(MeasureTransformer t, MeasureTransformer u) {
  return [t = std::move(t), u = std::move(u)](const FiniteMeasure& mu) {
    return u(t(mu));
  };
}

MeasureTransformer mt_choose(std::function<bool(const Value&)> pred,
                             MeasureTransformer t_true,
                             MeasureTransformer t_false) {
  return [pred = std::move(pred), t_true = std::move(t_true),
          t_false = std::move(t_false)](const FiniteMeasure& mu) {
    FiniteMeasure mb, mnb;
    for (const auto& [v, w] : mu.entries())
      (pred(v) ? mb : mnb).add_weight(v, w);
    return add_measures(t_true(mb), t_false(mnb));
  };
}

MeasureTransformer mt_extend(
    std::function<FiniteMeasure(const Value&)> kernel) {
  return [kernel = std::move(kernel)](const FiniteMeasure& mu) {
    FiniteMeasure out;
    for (const auto& [x, w] : mu.entries()) {
      FiniteMeasure k = kernel(x);
      if (k.total() > 1.0 + 1e-9)
        throw KernelMassError("kernel mass " + std::to_string(k.total()) +
                              " exceeds 1 at " + x.str());
      for (const auto& [y, wy] : k.entries())
        out.add_weight(Value::pair(x, y), w * wy);
    }
    return out;
  };
}

MeasureTransformer mt_constrain(std::function<Value(const Value&)> p,
                                const Type& b) {
  if (b.is_real())
    throw ContinuousObserveError(
        "constrain at real type has no discrete-exact semantics");
  if (!b.is_discrete_base())
    throw InternalError("constrain at non-base type " + b.str());
  Value zero = zero_element(b);
  return [p = std::move(p), zero](const FiniteMeasure& mu) {
    FiniteMeasure out;
    for (const auto& [v, w] : mu.entries())
      if (p(v) == zero) out.add_weight(v, w);
    return out;
  };
}

FiniteMeasure restrict_measure(const FiniteMeasure& mu,
                               const std::function<bool(const Value&)>& pred) {
  FiniteMeasure out;
  for (const auto& [v, w] : mu.entries())
    if (pred(v)) out.add_weight(v, w);
  return out;
}

FiniteMeasure add_measures(const FiniteMeasure& a, const FiniteMeasure& b) {
  FiniteMeasure out = a;
  for (const auto& [v, w] : b.entries()) out.add_weight(v, w);
  return out;
}

FiniteMeasure scale_measure(double r, const FiniteMeasure& mu) {
  FiniteMeasure out;
  for (const auto& [v, w] : mu.entries()) out.add_weight(v, r * w);
  return out;
}

std::pair<FiniteMeasure, double> normalize(const FiniteMeasure& mu) {
  double evidence = mu.total();
  if (evidence <= 0.0)
    throw ZeroEvidence("measure has zero total mass");
  return {scale_measure(1.0 / evidence, mu), evidence};
}

FiniteMeasure dist_measure(const std::string& name,
                           const std::vector<Value>& params) {
  FiniteMeasure out;
  if (name == "Bernoulli") {
    out.add_weight(Value::boolean(true),
                   dist_mass(name, params, Value::boolean(true)));
    out.add_weight(Value::boolean(false),
                   dist_mass(name, params, Value::boolean(false)));
    return out;
  }
  if (name == "Binomial") {
    long long n = params.at(0).as_int();
    dist_mass(name, params, Value::integer(0));
    for (long long i = 0; i <= n; ++i)
      out.add_weight(Value::integer(i),
                     dist_mass(name, params, Value::integer(i)));
    return out;
  }
  if (name == "DiscreteUniform") {
    long long m = params.at(0).as_int();
    dist_mass(name, params, Value::integer(0));
    for (long long i = 0; i < m; ++i)
      out.add_weight(Value::integer(i),
                     dist_mass(name, params, Value::integer(i)));
    return out;
  }
  if (name == "Poisson") {
    double cum = 0.0;
    for (long long i = 0;; ++i) {
      double m = dist_mass(name, params, Value::integer(i));
      out.add_weight(Value::integer(i), m);
      cum += m;
      if (1.0 - cum < 1e-12) break;
      if ((std::size_t)i > measure_support_cap())
        throw SupportOverflow("Poisson truncation exceeds support cap");
    }
    return out;
  }
  throw UnsupportedDistError("distribution " + name +
                             " has no finite discrete measure");
}

double measure_distance(const FiniteMeasure& a, const FiniteMeasure& b) {
  double d = 0.0;
  for (const auto& [v, w] : a.entries())
    d = std::max(d, std::fabs(w - b.at(v)));
  for (const auto& [v, w] : b.entries())
    d = std::max(d, std::fabs(w - a.at(v)));
  return d;
}

static std::string num_json(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string value_json(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Unit: return "null";
    case Value::Kind::Bool: return v.as_bool() ? "true" : "false";
    case Value::Kind::Int: return std::to_string(v.as_int());
    case Value::Kind::Real: return num_json(v.as_real());
    case Value::Kind::Pair:
      return "[" + value_json(v.first()) + "," + value_json(v.second()) + "]";
  }
  return "null";
}

std::string measure_json(const FiniteMeasure& mu) {
  std::string s = "[";
  bool first = true;
  for (const auto& [v, w] : mu.entries()) {
    if (!first) s += ",";
    first = false;
    s += "{\"value\":" + value_json(v) + ",\"weight\":" + num_json(w) + "}";
  }
  return s + "]";
}

}  // namespace funstack
