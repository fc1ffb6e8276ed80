#include "doctest.h"

#include "helpers.hpp"

#include "funstack/enumerate.hpp"
#include "funstack/errors.hpp"
#include "funstack/frontend.hpp"

using namespace funstack;
using namespace funstack::testing;

TEST_CASE("two coins posterior") {
  auto e = prep("let h1 = random (Bernoulli(0.5)) in "
                "let h2 = random (Bernoulli(0.5)) in "
                "observe (h1 || h2); (h1, h2)");
  EnumResult r = enumerate_runs(e);
  CHECK(r.valid_mass.total() == doctest::Approx(0.75));
  CHECK(r.invalid_mass == doctest::Approx(0.25));
  auto [post, ev] = normalize(r.valid_mass);
  CHECK(ev == doctest::Approx(0.75));
  Value tt = Value::pair(Value::boolean(true), Value::boolean(true));
  Value ff = Value::pair(Value::boolean(false), Value::boolean(false));
  CHECK(post.at(tt) == doctest::Approx(1.0 / 3));
  CHECK(post.at(ff) == 0.0);
  CHECK(post.size() == 3);
}

TEST_CASE("observing false yields zero evidence") {
  auto e = prep("observe false; 1");
  EnumResult r = enumerate_runs(e);
  CHECK(r.valid_mass.empty());
  CHECK(r.invalid_mass == doctest::Approx(1.0));
  CHECK_THROWS_AS(enum_posterior(e), ZeroEvidence);
}

TEST_CASE("deterministic programs reduce to a point mass") {
  auto e = prep("fun f x = x + 1 in let x = 2 in f (x * 3)");
  auto [post, ev] = enum_posterior(e);
  CHECK(ev == doctest::Approx(1.0));
  CHECK(post.at(Value::integer(7)) == doctest::Approx(1.0));
}

TEST_CASE("non-Bernoulli discrete draws enumerate their support") {
  auto e = prep("let n = random (Binomial(3, 0.5)) in "
                "let u = random (DiscreteUniform(2)) in n + u");
  auto [post, ev] = enum_posterior(e);
  CHECK(ev == doctest::Approx(1.0));
  CHECK(post.at(Value::integer(0)) == doctest::Approx(0.0625));
  CHECK(post.at(Value::integer(4)) == doctest::Approx(0.0625));
}

TEST_CASE("choice budget raises BudgetError") {
  std::string src = "0";
  for (int i = 0; i < 30; ++i)
    src = "(if random (Bernoulli(0.5)) then 1 else 0) + " + src;
  auto e = prep(src);
  EnumOptions opts;
  opts.max_choices = 8;
  CHECK_THROWS_AS(enumerate_runs(e, opts), BudgetError);
}

TEST_CASE("continuous draws are rejected by the enumerator") {
  auto e = prep("random (Gaussian(0.0, 1.0)) > 0.0");
  CHECK_THROWS_AS(enumerate_runs(e), UnsupportedDistError);
}

TEST_CASE("parallel and serial enumeration agree bitwise") {
  for (std::uint32_t seed = 0; seed < 50; ++seed) {
    ExprPtr m = gen_bernoulli_program(seed);
    EnumOptions ser, par;
    ser.parallel = false;
    par.parallel = true;
    EnumResult a = enumerate_runs(m, ser);
    EnumResult b = enumerate_runs(m, par);
    CAPTURE(seed);
    CHECK(a.runs == b.runs);
    CHECK(a.invalid_mass == b.invalid_mass);  // exact equality
    REQUIRE(a.valid_mass.size() == b.valid_mass.size());
    auto ita = a.valid_mass.entries().begin();
    for (const auto& [v, w] : b.valid_mass.entries()) {
      CHECK(ita->first == v);
      CHECK(ita->second == w);  // bit-identical merge order
      ++ita;
    }
  }
}

TEST_CASE("preservation holds along every reduction step") {
  for (std::uint32_t seed = 0; seed < 20; ++seed) {
    ExprPtr m = gen_bernoulli_program(seed);
    EnumOptions opts;
    opts.check_types = true;
    CHECK_NOTHROW(enumerate_runs(m, opts));
  }
}

TEST_CASE("single reduction steps carry probabilities") {
  auto e = prep("random (Bernoulli(0.25))");
  auto steps = reduce(e);
  REQUIRE(steps.size() == 2);
  double total = 0.0;
  for (const auto& s : steps) total += s.p;
  CHECK(total == doctest::Approx(1.0));
  auto none = reduce(prep("true"));
  CHECK(none.empty());
}
