#pragma once

#include <string>

#include "funstack/ast.hpp"
#include "funstack/compiler.hpp"
#include "funstack/mc.hpp"
#include "funstack/measure.hpp"

namespace funstack {

struct PreparedProgram {
  ExprPtr core;  // typed, arrays unrolled
  Type type;
  bool all_discrete = false;
};

PreparedProgram prepare_source(const std::string& source);
PreparedProgram prepare_file(const std::string& path);

struct InferOptions {
  long long samples = 100000;
  std::uint64_t seed = 1;
  int max_choices = 24;
  std::size_t max_support = 0;  // 0: keep the global cap
};

struct InferenceReport {
  std::string backend;
  bool is_mc = false;
  FiniteMeasure posterior;  // exact backends, normalized
  double evidence = 0.0;
  McResult mc;              // mc backend
  long long runs_explored = 0;
  double wall_seconds = 0.0;
};

// backend in {enum, mt, imp, fg, mc}; empty selects enum for all-discrete
// programs and mc otherwise.
InferenceReport run_backend(const PreparedProgram& p, std::string backend,
                            const InferOptions& opts = {});

std::string default_backend(const PreparedProgram& p);

}  // namespace funstack
