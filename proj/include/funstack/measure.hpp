#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "funstack/type.hpp"
#include "funstack/value.hpp"

namespace funstack {

// Support-size cap shared by all enumeration-style backends (SupportOverflow
// beyond it).
std::size_t measure_support_cap();
void set_measure_support_cap(std::size_t cap);

// Finite discrete measure: canonical values to positive binary64 weights.
// Zero-weight entries are pruned exactly (no epsilon pruning).
class FiniteMeasure {
 public:
  FiniteMeasure() = default;
  static FiniteMeasure dirac(const Value& c);

  void add_weight(const Value& v, double w);
  double at(const Value& v) const;
  double total() const;
  bool empty() const { return w_.empty(); }
  std::size_t size() const { return w_.size(); }
  const std::map<Value, double>& entries() const { return w_; }

 private:
  std::map<Value, double> w_;
};

using MeasureTransformer =
    std::function<FiniteMeasure(const FiniteMeasure&)>;

MeasureTransformer mt_pure(std::function<Value(const Value&)> f);
// T >>> U (run T first).
MeasureTransformer mt_compose(MeasureTransformer t, MeasureTransformer u);
MeasureTransformer mt_choose(std::function<bool(const Value&)> pred,
                             MeasureTransformer t_true,
                             MeasureTransformer t_false);
// Kernel must be a (sub-)probability measure per point.
MeasureTransformer mt_extend(
    std::function<FiniteMeasure(const Value&)> kernel);
// Unnormalized filtering at the zero element of discrete base type b.
MeasureTransformer mt_constrain(std::function<Value(const Value&)> p,
                                const Type& b);

FiniteMeasure restrict_measure(const FiniteMeasure& mu,
                               const std::function<bool(const Value&)>& pred);
FiniteMeasure add_measures(const FiniteMeasure& a, const FiniteMeasure& b);
FiniteMeasure scale_measure(double r, const FiniteMeasure& mu);
// (probability measure, evidence); ZeroEvidence when the total is 0.
std::pair<FiniteMeasure, double> normalize(const FiniteMeasure& mu);

// Distribution of a discrete distribution as a finite measure (Poisson
// truncated at tail mass < 1e-12).
FiniteMeasure dist_measure(const std::string& name,
                           const std::vector<Value>& params);

// Largest absolute pointwise difference, over the union of supports.
double measure_distance(const FiniteMeasure& a, const FiniteMeasure& b);

std::string value_json(const Value& v);
std::string measure_json(const FiniteMeasure& mu);

}  // namespace funstack
