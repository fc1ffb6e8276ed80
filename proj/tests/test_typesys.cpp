#include "doctest.h"

#include "helpers.hpp"

#include "funstack/enumerate.hpp"
#include "funstack/errors.hpp"
#include "funstack/frontend.hpp"
#include "funstack/typesys.hpp"

using namespace funstack;
using namespace funstack::testing;

TEST_CASE("zero elements") {
  CHECK(zero_element(Type::boolean()) == Value::boolean(true));
  CHECK(zero_element(Type::integer()) == Value::integer(0));
  CHECK(zero_element(Type::real()) == Value::real(0.0));
  CHECK(zero_element(Type::pair(Type::boolean(), Type::integer())) ==
        Value::pair(Value::boolean(true), Value::integer(0)));
  CHECK(zero_element(Type::unit()) == Value::unit());
}

TEST_CASE("operator signatures") {
  CHECK(op_result(OpCode::And, Type::boolean(), Type::boolean()) ==
        Type::boolean());
  CHECK(op_result(OpCode::Gt, Type::integer(), Type::integer()) ==
        Type::boolean());
  CHECK(op_result(OpCode::Gt, Type::real(), Type::real()) == Type::boolean());
  CHECK(op_result(OpCode::Mod, Type::integer(), Type::integer()) ==
        Type::integer());
  // No real equality, no real modulo, no mixed arithmetic.
  CHECK(!op_result(OpCode::Eq, Type::real(), Type::real()));
  CHECK(!op_result(OpCode::Mod, Type::real(), Type::real()));
  CHECK(!op_result(OpCode::Add, Type::integer(), Type::real()));
  CHECK(!op_result(OpCode::And, Type::integer(), Type::integer()));
}

TEST_CASE("typechecker rejects ill-typed programs") {
  CHECK_THROWS_AS(typecheck(load_program_text("1 + true"), {}), TypeError);
  CHECK_THROWS_AS(typecheck(load_program_text("if 1 then 2 else 3"), {}),
                  TypeError);
  CHECK_THROWS_AS(typecheck(load_program_text("if true then 1 else 0.5"), {}),
                  TypeError);
  CHECK_THROWS_AS(
      typecheck(load_program_text("random (Bernoulli(1))"), {}), TypeError);
  CHECK_THROWS_AS(
      typecheck(load_program_text("random (Gauss(0.0, 1.0))"), {}), TypeError);
  CHECK_THROWS_AS(typecheck(load_program_text("x + 1"), {}), TypeError);
  CHECK_THROWS_AS(typecheck(load_program_text("1 % 0.5"), {}), TypeError);
}

TEST_CASE("observing a pair is rejected, bases are fine") {
  CHECK_THROWS_AS(typecheck(load_program_text("observe (1, 2)"), {}),
                  TypeError);
  auto e = load_program_text("observe (1 = 2)");
  CHECK(typecheck(e, {}).is_unit());
}

TEST_CASE("real equality under observe rewrites to subtraction") {
  auto e = load_program_text(
      "let x = random (Gaussian(0.0, 1.0)) in observe (x = 1.0); x");
  typecheck(e, {});
  // Find the observe node and check its observed type is real.
  std::function<const Expr*(const Expr&)> find = [&](const Expr& n) ->
      const Expr* {
    if (n.kind == Expr::Kind::Observe) return &n;
    for (const auto& k : n.kids)
      if (const Expr* r = find(*k)) return r;
    return nullptr;
  };
  const Expr* obs = find(*e);
  REQUIRE(obs);
  CHECK(obs->observed_type.is_real());
  // Bare real equality stays rejected.
  CHECK_THROWS_AS(
      typecheck(load_program_text(
                    "let x = random (Gaussian(0.0, 1.0)) in x = 1.0"),
                {}),
      TypeError);
}

TEST_CASE("distribution signatures") {
  CHECK(dist_sig("Bernoulli")->result.is_bool());
  CHECK(dist_sig("Binomial")->result.is_int());
  CHECK(dist_sig("Poisson")->result.is_int());
  CHECK(dist_sig("DiscreteUniform")->result.is_int());
  CHECK(dist_sig("Gaussian")->result.is_real());
  CHECK(dist_sig("Beta")->result.is_real());
  CHECK(dist_sig("Gamma")->result.is_real());
  CHECK(dist_sig("Dirichlet") == nullptr);
  CHECK(all_dist_sigs().size() == 7);
}

TEST_CASE("array unrolling: literals, indexing, comprehensions") {
  auto e = load_program_text("[1; 2; 3].[1]");
  typecheck(e, {});
  auto u = unroll_arrays(e);
  Type t = typecheck(u, {});
  CHECK(t.is_int());
  auto [post, ev] = enum_posterior(u);
  CHECK(post.at(Value::integer(2)) == doctest::Approx(1.0));
}

TEST_CASE("index arithmetic wraps modulo the array size") {
  // Out-of-range and negative constant indices reduce modulo n.
  // No unary minus in the grammar; negative indices spelled as 0 - 1.
  for (auto [idx, expect] : {std::pair{"4", 2}, {"0 - 1", 3}, {"0", 1}}) {
    auto src = std::string("[1; 2; 3].[") + idx + "]";
    auto [post, ev] = enum_posterior(prep(src));
    CAPTURE(idx);
    CHECK(post.at(Value::integer(expect)) == doctest::Approx(1.0));
  }
}

TEST_CASE("comprehension unrolling matches the brute-force meaning") {
  auto [post, ev] = enum_posterior(prep(
      "let xs = [1; 2; 3] in let ys = [for x in xs -> x * x] in "
      "ys.[0] + ys.[1] + ys.[2]"));
  CHECK(post.at(Value::integer(14)) == doctest::Approx(1.0));
}

TEST_CASE("comprehension copies draw independently") {
  auto [post, ev] = enum_posterior(prep(
      "let xs = [1; 1] in let ys = [for x in xs -> "
      "if random (Bernoulli(0.5)) then 1 else 0] in ys.[0] + ys.[1]"));
  CHECK(post.at(Value::integer(1)) == doctest::Approx(0.5));
  CHECK(post.at(Value::integer(0)) == doctest::Approx(0.25));
}

TEST_CASE("discreteness classification") {
  CHECK(program_all_discrete(
      *prep("let x = random (Bernoulli(0.5)) in observe x; x")));
  CHECK(!program_all_discrete(
      *prep("let x = random (Gaussian(0.0, 1.0)) in x > 0.0")));
  CHECK(program_bernoulli_fun(
      *prep("let x = random (Bernoulli(0.5)) in x")));
  CHECK(!program_bernoulli_fun(
      *prep("let x = random (DiscreteUniform(3)) in x")));
}
