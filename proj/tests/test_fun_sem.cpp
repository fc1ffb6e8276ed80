#include "doctest.h"

#include "helpers.hpp"

#include "funstack/enumerate.hpp"
#include "funstack/errors.hpp"
#include "funstack/frontend.hpp"
#include "funstack/fun_sem.hpp"

using namespace funstack;
using namespace funstack::testing;

TEST_CASE("state encoding round-trips") {
  std::vector<Value> vals = {Value::boolean(true), Value::integer(3),
                             Value::pair(Value::integer(1), Value::unit())};
  Value s = encode_state(vals);
  auto back = decode_state(s, vals.size());
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(back[i] == vals[i]);
  CHECK(encode_state({}) == Value::unit());
}

TEST_CASE("state operations are totalized") {
  std::vector<std::string> names = {"x", "y"};
  Value s = encode_state({Value::integer(1), Value::integer(2)});
  // Adding a bound variable is the identity.
  CHECK(state_add(names, s, "x", Value::integer(9)) == s);
  // Lookup of an absent variable yields unit.
  CHECK(state_lookup(names, s, "z") == Value::unit());
  CHECK(state_lookup(names, s, "y") == Value::integer(2));
  // Dropping twice is fine.
  Value dropped = state_drop(names, s, {"y"});
  CHECK(state_drop({"x"}, dropped, {"y"}) == dropped);
}

TEST_CASE("value marginal of the branching example") {
  auto m = prep("let x = random (Bernoulli(0.5)) in "
                "let y = random (Bernoulli(0.1)) in "
                "(if x then observe (y = true) else observe (y = false)); y");
  FiniteMeasure v = value_marginal_mt(m);
  CHECK(v.at(Value::boolean(true)) == doctest::Approx(0.05));
  CHECK(v.at(Value::boolean(false)) == doctest::Approx(0.45));
  auto [post, ev] = infer_mt(m);
  CHECK(ev == doctest::Approx(0.5));
  CHECK(post.at(Value::boolean(true)) == doctest::Approx(0.1));
  CHECK(post.at(Value::boolean(false)) == doctest::Approx(0.9));
}

TEST_CASE("flat variant keeps the one-to-nine posterior ratio") {
  auto m = prep("let x = random (Bernoulli(0.5)) in "
                "let y = random (Bernoulli(0.1)) in observe (x = y); y");
  auto [post, ev] = infer_mt(m);
  CHECK(post.at(Value::boolean(true)) / post.at(Value::boolean(false)) ==
        doctest::Approx(1.0 / 9.0));
}

TEST_CASE("transformer semantics matches enumeration on random programs") {
  for (std::uint32_t seed = 0; seed < 100; ++seed) {
    ExprPtr m = gen_bernoulli_program(seed);
    FiniteMeasure mt_mass = value_marginal_mt(m);
    EnumResult er = enumerate_runs(m);
    CAPTURE(seed);
    CHECK(measure_distance(mt_mass, er.valid_mass) <= 1e-9);
  }
}

TEST_CASE("open programs thread the environment through the state") {
  auto m = load_program_text("let y = x + 1 in y * y");
  typecheck(m, {{"x", Type::integer()}});
  auto t = transform(m, {"x"});
  FiniteMeasure mu;
  mu.add_weight(encode_state({Value::integer(2)}), 0.5);
  mu.add_weight(encode_state({Value::integer(3)}), 0.5);
  FiniteMeasure out = t(mu);
  Value s2 = encode_state({Value::integer(2)});
  Value s3 = encode_state({Value::integer(3)});
  CHECK(out.at(Value::pair(s2, Value::integer(9))) == doctest::Approx(0.5));
  CHECK(out.at(Value::pair(s3, Value::integer(16))) == doctest::Approx(0.5));
}

TEST_CASE("observation filters the state measure unnormalized") {
  auto m = load_program_text("observe b; 1");
  typecheck(m, {{"b", Type::boolean()}});
  auto t = transform(m, {"b"});
  FiniteMeasure mu;
  mu.add_weight(encode_state({Value::boolean(true)}), 0.3);
  mu.add_weight(encode_state({Value::boolean(false)}), 0.7);
  FiniteMeasure out = t(mu);
  CHECK(out.total() == doctest::Approx(0.3));
}

TEST_CASE("filtering equivalence: observe then M equals restrict") {
  // A[[observe b; M]] mu == A[[M]] (mu restricted to b = true), for closed
  // M over the singleton environment {b}.
  for (std::uint32_t seed = 0; seed < 50; ++seed) {
    FiniteMeasure mu = gen_state_measure({{"b", Type::boolean()}}, seed);
    auto m1 = load_program_text("observe b; b");
    auto m2 = load_program_text("b");
    typecheck(m1, {{"b", Type::boolean()}});
    typecheck(m2, {{"b", Type::boolean()}});
    FiniteMeasure left = transform(m1, {"b"})(mu);
    FiniteMeasure restricted = restrict_measure(mu, [](const Value& s) {
      return s.second().as_bool();
    });
    FiniteMeasure right = transform(m2, {"b"})(restricted);
    CAPTURE(seed);
    CHECK(measure_distance(left, right) <= 1e-12);
  }
}
