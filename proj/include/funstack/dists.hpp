#pragma once

#include <string>
#include <vector>

#include "funstack/rng.hpp"
#include "funstack/value.hpp"

namespace funstack {

// Probability mass of a discrete distribution at value x. Structurally
// invalid parameters raise ParamError; out-of-support x yields 0.
double dist_mass(const std::string& name, const std::vector<Value>& params,
                 const Value& x);

// Density of a continuous distribution at point x; same error contract.
// Gamma's second parameter is a rate, not a scale.
double dist_density(const std::string& name, const std::vector<Value>& params,
                    double x);

// Mass or density, dispatching on the distribution's kind.
double dist_weight(const std::string& name, const std::vector<Value>& params,
                   const Value& x);

Value dist_sample(const std::string& name, const std::vector<Value>& params,
                  CounterRng& rng);

}  // namespace funstack
