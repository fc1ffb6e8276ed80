#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "funstack/ast.hpp"
#include "funstack/measure.hpp"
#include "funstack/rng.hpp"

namespace funstack {

// Classify every real-typed observe (annotations on the AST; no errors).
// Supported forms after inlining the defining let-chain: `x`, `x - E`,
// `E - x`, with x a single continuous draw. Two modes:
//   - lone pivot: x has no use outside the observation chain; the draw is
//     deferred and the density weight applied at the observe.
//   - shared pivot: every outside use of x happens strictly before each
//     observation of x in evaluation order and E resolves to one constant;
//     the draw is forced to the constant and weighted at the draw site, and
//     each run must reach one of the observations.
// Everything else is marked unsupported and fails at run time.
void observe_rewrite(const ExprPtr& m);

struct WeightedSample {
  Value value;
  double weight = 1.0;
};

// One likelihood-weighting run; observe_rewrite must have run.
WeightedSample run_weighted(const ExprPtr& m, CounterRng& rng);

struct McComponent {
  Type type;
  bool discrete = true;
  FiniteMeasure posterior;         // normalized, discrete components
  std::map<Value, double> se;      // per-atom standard error
  double mean = 0.0, variance = 0.0;
  double mean_se = 0.0, variance_se = 0.0;
};

struct McOptions {
  long long samples = 100000;
  std::uint64_t seed = 1;
  long long chunk = 4096;
  bool parallel = true;
};

struct McResult {
  double evidence = 0.0, evidence_se = 0.0, ess = 0.0;
  long long samples = 0;
  std::uint64_t seed = 0;
  std::vector<McComponent> components;
};

// Deterministic for fixed (seed, samples, chunk) regardless of thread count.
McResult infer_mc(const ExprPtr& m, const McOptions& opts);

}  // namespace funstack
