#include "doctest.h"

#include "helpers.hpp"

#include "funstack/errors.hpp"
#include "funstack/factorgraph.hpp"
#include "funstack/fun_sem.hpp"
#include "funstack/imp.hpp"

using namespace funstack;
using namespace funstack::testing;

namespace {

FactorGraph graph_of(const std::string& src, const Layout& rho = {},
                     const ImpEnv& sigma = {}) {
  auto p = prepare_source(src);
  auto tr = translate(rho, sigma, p.core);
  return build_graph(hoist_locals(unroll_imp(tr.stmt)), sigma);
}

}  // namespace

TEST_CASE("edge kinds mirror the statement kinds") {
  FactorGraph g = graph_of(
      "let x = random (Bernoulli(0.5)) in observe x; x");
  // l0 <- 0.5 gives Const, the draw gives Sample, observe gives Const at
  // the zero element.
  int consts = 0, samples = 0;
  for (const auto& e : g.edges) {
    if (e.kind == FgEdge::Kind::Const) ++consts;
    if (e.kind == FgEdge::Kind::Sample) ++samples;
  }
  CHECK(consts == 2);
  CHECK(samples == 1);
  CHECK(g.edges.back().c == Value::boolean(true));  // observe at 0_bool
}

TEST_CASE("graph size is linear in the statement count") {
  for (std::uint32_t seed = 0; seed < 100; ++seed) {
    OpenProgram p = gen_open_program(seed);
    auto tr = translate(p.rho, p.sigma, p.expr);
    FactorGraph g = build_graph(hoist_locals(tr.stmt), p.sigma);
    CAPTURE(seed);
    CHECK(g.edge_count() <= g.stmt_count);
  }
}

TEST_CASE("empty graph is the identity transformer") {
  FactorGraph g = build_graph(imp_nil(), {{"x", Type::boolean()}});
  FiniteMeasure mu;
  mu.add_weight(encode_state({Value::boolean(true)}), 0.4);
  CHECK(measure_distance(graph_measure(g, mu), mu) == 0.0);
}

TEST_CASE("epidemiology marginal through the graph") {
  FactorGraph g = graph_of(
      "let has = random (Bernoulli(0.01)) in "
      "let pos = if has then random (Bernoulli(0.8)) "
      "else random (Bernoulli(0.096)) in observe pos; has");
  FiniteMeasure mu = FiniteMeasure::dirac(Value::unit());
  FiniteMeasure out = graph_measure(g, mu);
  CHECK(out.total() == doctest::Approx(0.10304));
}

TEST_CASE("two-coin graph keeps the valid mass") {
  FactorGraph g = graph_of(
      "let h1 = random (Bernoulli(0.5)) in "
      "let h2 = random (Bernoulli(0.5)) in "
      "observe (h1 || h2); (h1, h2)");
  FiniteMeasure out = graph_measure(g, FiniteMeasure::dirac(Value::unit()));
  CHECK(out.total() == doctest::Approx(0.75));
}

TEST_CASE("gates only weigh the taken branch") {
  // The else branch observes false (impossible), yet runs through the then
  // branch must be unaffected.
  FactorGraph g = graph_of(
      "let c = random (Bernoulli(0.9)) in "
      "(if c then observe true else observe false); c");
  FiniteMeasure out = graph_measure(g, FiniteMeasure::dirac(Value::unit()));
  CHECK(out.total() == doctest::Approx(0.9));
}

TEST_CASE("graph semantics agrees with impdt on random programs") {
  for (std::uint32_t seed = 0; seed < 100; ++seed) {
    OpenProgram p = gen_open_program(seed);
    std::vector<std::string> gnames, snames;
    for (const auto& [x, t] : p.gamma) gnames.push_back(x);
    for (const auto& [l, t] : p.sigma) snames.push_back(l);
    FiniteMeasure mu_g = gen_state_measure(p.gamma, seed + 3000);
    FiniteMeasure mu;
    for (const auto& [s, w] : mu_g.entries())
      mu.add_weight(lift_state(p.rho, gnames, snames, s), w);

    auto tr = translate(p.rho, p.sigma, p.expr);
    auto [t, names] = transform_imp(tr.stmt, p.sigma);
    FiniteMeasure direct = t(mu);
    FactorGraph g = build_graph(hoist_locals(tr.stmt), p.sigma);
    FiniteMeasure through_graph = graph_measure(g, mu);
    CAPTURE(seed);
    CHECK(measure_distance(direct, through_graph) <= 1e-9);
  }
}

TEST_CASE("continuous samples are rejected, deterministic reals pass") {
  auto p = prepare_source("random (Gaussian(0.0, 1.0)) > 0.0");
  auto tr = translate({}, {}, p.core);
  FactorGraph g = build_graph(hoist_locals(tr.stmt), {});
  CHECK_THROWS_AS(graph_measure(g, FiniteMeasure::dirac(Value::unit())),
                  ContinuousGraphError);
  // Real constants threaded through assignments are fine (the Bernoulli
  // parameter is a real).
  FactorGraph ok = graph_of("random (Bernoulli(0.25))");
  FiniteMeasure out = graph_measure(ok, FiniteMeasure::dirac(Value::unit()));
  CHECK(out.total() == doctest::Approx(1.0));
}

TEST_CASE("walk budget raises SupportOverflow") {
  std::size_t saved = measure_support_cap();
  set_measure_support_cap(2);
  std::string src = "0";
  for (int i = 0; i < 6; ++i)
    src = "random (DiscreteUniform(4)) + " + src;
  FactorGraph g = graph_of(src);
  CHECK_THROWS_AS(graph_measure(g, FiniteMeasure::dirac(Value::unit())),
                  SupportOverflow);
  set_measure_support_cap(saved);
}

TEST_CASE("marginal extraction") {
  FactorGraph g = graph_of(
      "let h1 = random (Bernoulli(0.5)) in "
      "let h2 = random (Bernoulli(0.5)) in "
      "observe (h1 || h2); (h1, h2)");
  // The first draw's location is l1 (after the parameter constant l0).
  auto [post, ev] = fg_marginal(g, FiniteMeasure::dirac(Value::unit()), "l1");
  CHECK(ev == doctest::Approx(0.75));
  CHECK(post.at(Value::boolean(true)) == doctest::Approx(2.0 / 3));
  CHECK_THROWS_AS(
      fg_marginal(g, FiniteMeasure::dirac(Value::unit()), "nope"),
      ImpTypeError);
}

TEST_CASE("exports mention every edge") {
  FactorGraph g = graph_of("let x = random (Bernoulli(0.5)) in observe x; x");
  std::string dot = fg_dot(g);
  CHECK(dot.find("graph factors") != std::string::npos);
  CHECK(dot.find("Bernoulli") != std::string::npos);
  std::string js = fg_json(g);
  CHECK(js.find("Sample") != std::string::npos);
}
