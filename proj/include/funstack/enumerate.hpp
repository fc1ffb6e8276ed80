#pragma once

#include <utility>
#include <vector>

#include "funstack/ast.hpp"
#include "funstack/measure.hpp"

namespace funstack {

// One reduction step M ->^p M'. `invalid_observe` marks a step that fired
// `observe V` with V != 0_b.
struct Step {
  double p;
  ExprPtr next;
  bool invalid_observe = false;
};

// Successors of a closed expression; empty exactly when e is a value.
std::vector<Step> reduce(const ExprPtr& e);

struct Run {
  Value value;
  double prob;
  bool valid;
  int steps;
};

struct EnumOptions {
  int max_choices = 24;
  bool parallel = true;
  // Re-typecheck every intermediate expression against the program type
  // (preservation check; corpus tests only).
  bool check_types = false;
  bool trace = false;
};

struct EnumResult {
  FiniteMeasure valid_mass;   // unnormalized, by final value
  double invalid_mass = 0.0;  // total probability of invalid runs
  long long runs = 0;
  std::vector<Run> trace;     // populated only with opts.trace
};

EnumResult enumerate_runs(const ExprPtr& e, const EnumOptions& opts = {});

// (posterior, evidence); ZeroEvidence when no run is valid.
std::pair<FiniteMeasure, double> enum_posterior(const ExprPtr& e,
                                                const EnumOptions& opts = {});

}  // namespace funstack
