#include "doctest.h"

#include <filesystem>

#include "helpers.hpp"

#include "funstack/errors.hpp"
#include "funstack/pipeline.hpp"

using namespace funstack;
using namespace funstack::testing;

namespace {

const char* kExamples = FUNSTACK_EXAMPLES_DIR;

}  // namespace

TEST_CASE("backend defaulting") {
  auto d = prepare_source("let x = random (Bernoulli(0.5)) in x");
  CHECK(default_backend(d) == "enum");
  auto c = prepare_source("random (Gaussian(0.0, 1.0)) > 0.0");
  CHECK(default_backend(c) == "mc");
  CHECK_THROWS_AS(run_backend(d, "magic"), ParamError);
}

TEST_CASE("missing files raise a parse error") {
  CHECK_THROWS_AS(prepare_file("/nonexistent/path.fun"), ParseError);
}

TEST_CASE("exact backends agree on the discrete corpus files") {
  namespace fs = std::filesystem;
  int seen = 0;
  for (const auto& ent : fs::directory_iterator(kExamples)) {
    if (ent.path().extension() != ".fun") continue;
    PreparedProgram p;
    try {
      p = prepare_file(ent.path().string());
    } catch (const FunError&) {
      continue;
    }
    if (!p.all_discrete) continue;
    ++seen;
    auto base = run_backend(p, "enum");
    for (const char* b : {"mt", "imp", "fg"}) {
      auto r = run_backend(p, b);
      CAPTURE(ent.path().filename().string());
      CAPTURE(b);
      CHECK(measure_distance(base.posterior, r.posterior) <= 1e-9);
      CHECK(std::abs(base.evidence - r.evidence) <= 1e-9);
    }
  }
  CHECK(seen >= 4);  // the corpus ships several discrete programs
}

TEST_CASE("continuous corpus files run under the sampler") {
  namespace fs = std::filesystem;
  InferOptions opts;
  opts.samples = 2000;
  int seen = 0;
  for (const auto& ent : fs::directory_iterator(kExamples)) {
    if (ent.path().extension() != ".fun") continue;
    PreparedProgram p = prepare_file(ent.path().string());
    if (p.all_discrete) continue;
    CAPTURE(ent.path().filename().string());
    try {
      auto r = run_backend(p, "mc", opts);
      CHECK(r.evidence > 0.0);
      ++seen;
    } catch (const UnsupportedObserveError&) {
      // One corpus file demonstrates the rejected observation shape.
    }
  }
  CHECK(seen >= 5);
}

TEST_CASE("exact backends reject continuous programs cleanly") {
  auto p = prepare_source("random (Gaussian(0.0, 1.0)) > 0.0");
  CHECK_THROWS_AS(run_backend(p, "enum"), UnsupportedDistError);
  CHECK_THROWS_AS(run_backend(p, "mt"), UnsupportedDistError);
  CHECK_THROWS_AS(run_backend(p, "fg"), ContinuousGraphError);
}

TEST_CASE("random closed programs agree across all four exact backends") {
  for (std::uint32_t seed = 200; seed < 260; ++seed) {
    ExprPtr m = gen_bernoulli_program(seed);
    PreparedProgram p;
    p.core = m;
    p.type = m->type;
    p.all_discrete = true;
    InferenceReport base;
    try {
      base = run_backend(p, "enum");
    } catch (const ZeroEvidence&) {
      // All backends must agree on the zero-evidence verdict.
      CHECK_THROWS_AS(run_backend(p, "mt"), ZeroEvidence);
      CHECK_THROWS_AS(run_backend(p, "imp"), ZeroEvidence);
      CHECK_THROWS_AS(run_backend(p, "fg"), ZeroEvidence);
      continue;
    }
    for (const char* b : {"mt", "imp", "fg"}) {
      auto r = run_backend(p, b);
      CAPTURE(seed);
      CAPTURE(b);
      CHECK(measure_distance(base.posterior, r.posterior) <= 1e-9);
      CHECK(std::abs(base.evidence - r.evidence) <= 1e-9);
    }
  }
}
