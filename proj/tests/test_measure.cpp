#include "doctest.h"

#include <cmath>

#include "helpers.hpp"

#include "funstack/dists.hpp"
#include "funstack/errors.hpp"
#include "funstack/measure.hpp"

using namespace funstack;
using namespace funstack::testing;

TEST_CASE("finite measures prune zero weights exactly") {
  FiniteMeasure m;
  m.add_weight(Value::integer(1), 0.0);
  CHECK(m.empty());
  m.add_weight(Value::integer(2), 1e-300);
  CHECK(m.size() == 1);  // tiny but nonzero stays
  CHECK_THROWS_AS(m.add_weight(Value::integer(3), -0.5), InternalError);
}

TEST_CASE("mt_pure maps points, mt_compose runs left first") {
  auto inc = mt_pure([](const Value& v) {
    return Value::integer(v.as_int() + 1);
  });
  auto dbl = mt_pure([](const Value& v) {
    return Value::integer(v.as_int() * 2);
  });
  auto t = mt_compose(inc, dbl);  // (x + 1) * 2
  FiniteMeasure out = t(FiniteMeasure::dirac(Value::integer(3)));
  CHECK(out.at(Value::integer(8)) == doctest::Approx(1.0));
}

TEST_CASE("mt_choose splits on the predicate") {
  FiniteMeasure mu;
  mu.add_weight(Value::integer(1), 0.25);
  mu.add_weight(Value::integer(2), 0.75);
  auto t = mt_choose(
      [](const Value& v) { return v.as_int() == 1; },
      mt_pure([](const Value&) { return Value::boolean(true); }),
      mt_pure([](const Value&) { return Value::boolean(false); }));
  FiniteMeasure out = t(mu);
  CHECK(out.at(Value::boolean(true)) == doctest::Approx(0.25));
  CHECK(out.at(Value::boolean(false)) == doctest::Approx(0.75));
}

TEST_CASE("mt_extend rejects kernels with mass above one") {
  auto bad = mt_extend([](const Value&) {
    FiniteMeasure k;
    k.add_weight(Value::integer(0), 0.7);
    k.add_weight(Value::integer(1), 0.7);
    return k;
  });
  CHECK_THROWS_AS(bad(FiniteMeasure::dirac(Value::unit())), KernelMassError);
}

TEST_CASE("mt_constrain filters at the zero element") {
  FiniteMeasure mu;
  mu.add_weight(Value::boolean(true), 0.3);
  mu.add_weight(Value::boolean(false), 0.7);
  auto keep = mt_constrain([](const Value& v) { return v; }, Type::boolean());
  FiniteMeasure out = keep(mu);
  CHECK(out.total() == doctest::Approx(0.3));
  CHECK_THROWS_AS(
      mt_constrain([](const Value&) { return Value::real(0.0); },
                   Type::real()),
      ContinuousObserveError);
}

TEST_CASE("normalize yields a probability measure and the evidence") {
  FiniteMeasure mu;
  mu.add_weight(Value::integer(0), 0.2);
  mu.add_weight(Value::integer(1), 0.6);
  auto [p, ev] = normalize(mu);
  CHECK(ev == doctest::Approx(0.8));
  CHECK(p.total() == doctest::Approx(1.0));
  CHECK(p.at(Value::integer(1)) == doctest::Approx(0.75));
  CHECK_THROWS_AS(normalize(FiniteMeasure{}), ZeroEvidence);
}

TEST_CASE("discrete distribution measures sum to one") {
  struct Case {
    const char* name;
    std::vector<Value> params;
  } cases[] = {
      {"Bernoulli", {Value::real(0.3)}},
      {"Binomial", {Value::integer(7), Value::real(0.4)}},
      {"Poisson", {Value::real(2.5)}},
      {"DiscreteUniform", {Value::integer(6)}},
  };
  for (const auto& c : cases) {
    FiniteMeasure m = dist_measure(c.name, c.params);
    CAPTURE(c.name);
    CHECK(m.total() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("binomial mass uses the corrected coefficient") {
  // Binomial(2, 0.5) at 1 is 0.5, not 0.25.
  CHECK(dist_mass("Binomial", {Value::integer(2), Value::real(0.5)},
                  Value::integer(1)) == doctest::Approx(0.5));
}

TEST_CASE("parameter validation raises ParamError") {
  CHECK_THROWS_AS(dist_mass("Bernoulli", {Value::real(1.5)},
                            Value::boolean(true)),
                  ParamError);
  CHECK_THROWS_AS(dist_mass("DiscreteUniform", {Value::integer(0)},
                            Value::integer(0)),
                  ParamError);
  CHECK_THROWS_AS(dist_density("Gaussian",
                               {Value::real(0.0), Value::real(-1.0)}, 0.0),
                  ParamError);
  CHECK_THROWS_AS(dist_density("Gamma",
                               {Value::real(0.0), Value::real(1.0)}, 1.0),
                  ParamError);
}

TEST_CASE("support cap raises SupportOverflow") {
  std::size_t saved = measure_support_cap();
  set_measure_support_cap(4);
  auto spread = mt_extend([](const Value&) {
    FiniteMeasure k;
    for (int i = 0; i < 8; ++i) k.add_weight(Value::integer(i), 0.125);
    return k;
  });
  CHECK_THROWS_AS(spread(FiniteMeasure::dirac(Value::unit())),
                  SupportOverflow);
  set_measure_support_cap(saved);
}

TEST_CASE("measure distance is the sup over the union support") {
  FiniteMeasure a, b;
  a.add_weight(Value::integer(0), 0.5);
  b.add_weight(Value::integer(0), 0.25);
  b.add_weight(Value::integer(1), 0.1);
  CHECK(measure_distance(a, b) == doctest::Approx(0.25));
  CHECK(measure_distance(a, a) == 0.0);
}

// Transformer laws on random Bernoulli programs (small version; the full
// thousand-case suites run in the acceptance binary).
TEST_CASE("mass conservation, linearity, filtering on random programs") {
  for (std::uint32_t seed = 0; seed < 100; ++seed) {
    ExprPtr m = gen_bernoulli_program(seed);
    auto t = transform(m, {});
    FiniteMeasure one = t(FiniteMeasure::dirac(Value::unit()));
    CHECK(one.total() <= 1.0 + 1e-9);

    // Linearity: T(a mu) = a T(mu).
    FiniteMeasure half = t(scale_measure(0.5, FiniteMeasure::dirac(Value::unit())));
    CHECK(measure_distance(half, scale_measure(0.5, one)) <= 1e-12);
  }
}
