#pragma once

#include <memory>
#include <string>
#include <vector>

#include "funstack/imp.hpp"

namespace funstack {

struct FactorGraph;

// e ::= Equal(x,y) | Const(x,c) | Op(x,op,y,z) | Sample(x,D,args) |
//       Gate(x, G_then, G_else)
struct FgEdge {
  enum class Kind { Equal, Const, Op, Sample, Gate };
  Kind kind = Kind::Equal;
  std::string x;
  std::string y, z;
  Value c;
  OpCode op = OpCode::And;
  std::string dist;
  std::vector<std::string> args;
  std::shared_ptr<FactorGraph> g1, g2;
};

// new(bound){edges}. The top-level graph also records the ambient
// environment Sigma, the assigned output environment Sigma', and the source
// statement count (for the size-linearity assertion).
struct FactorGraph {
  ImpEnv bound;
  std::vector<FgEdge> edges;
  ImpEnv sigma, sigma_prime;
  std::size_t stmt_count = 0;

  std::size_t edge_count() const;  // including gate subgraph edges
};

// impfg on a hoisted, well-typed statement.
FactorGraph build_graph(const ImpStmtPtr& hoisted, const ImpEnv& sigma);

// Pqq[[G]] mu: discrete graph semantics by enumeration over bound variables;
// output measure over encoded Sigma,Sigma' states. Real-typed variables are
// admitted only when deterministic (Const/Equal/Op chains); a real Sample
// raises ContinuousGraphError.
FiniteMeasure graph_measure(const FactorGraph& g, const FiniteMeasure& mu);

// Posterior of one variable: (normalized marginal, evidence).
std::pair<FiniteMeasure, double> fg_marginal(const FactorGraph& g,
                                             const FiniteMeasure& mu,
                                             const std::string& var);

std::string fg_dot(const FactorGraph& g);
std::string fg_json(const FactorGraph& g);

}  // namespace funstack
