#pragma once

// Shared helpers for the unit and acceptance suites: program preparation
// shortcuts and random-program generators for the differential corpora.

#include <random>
#include <string>
#include <vector>

#include "funstack/ast.hpp"
#include "funstack/compiler.hpp"
#include "funstack/fun_sem.hpp"
#include "funstack/measure.hpp"
#include "funstack/pipeline.hpp"
#include "funstack/typesys.hpp"

namespace funstack::testing {

inline ExprPtr prep(const std::string& source) {
  return prepare_source(source).core;
}

// ---- random Bernoulli programs (closed, bool-only) ----------------------

// A closed let-chain over bool variables: up to `max_draws` Bernoulli draws,
// boolean operators, occasional value-branch ifs, up to `max_observes`
// observations. Returns a typed core program.
inline ExprPtr gen_bernoulli_program(std::uint32_t seed, int max_draws = 8,
                                     int max_observes = 3) {
  std::mt19937 rng(seed);
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };
  std::vector<std::pair<std::string, ExprPtr>> binds;
  std::vector<std::string> bools;
  int id = 0;
  auto bind = [&](ExprPtr e) {
    std::string x = "b" + std::to_string(id++);
    binds.emplace_back(x, std::move(e));
    bools.push_back(x);
    return x;
  };
  auto atom = [&]() -> ExprPtr {
    if (bools.empty() || pick(6) == 0)
      return mk_const(Value::boolean(pick(2) == 0));
    return mk_var(bools[pick(static_cast<int>(bools.size()))]);
  };

  int draws = 1 + pick(max_draws);
  for (int i = 0; i < draws; ++i)
    bind(mk_random("Bernoulli",
                   {mk_const(Value::real(0.1 * (1 + pick(9))))}));
  int extra = pick(4);
  for (int i = 0; i < extra; ++i) {
    switch (pick(4)) {
      case 0: bind(mk_op(OpCode::And, atom(), atom())); break;
      case 1: bind(mk_op(OpCode::Or, atom(), atom())); break;
      case 2: bind(mk_op(OpCode::Eq, atom(), atom())); break;
      default: bind(mk_if(atom(), atom(), atom())); break;
    }
  }
  int observes = pick(max_observes + 1);
  std::vector<std::pair<std::string, ExprPtr>> obs_binds;
  for (int i = 0; i < observes; ++i)
    obs_binds.emplace_back("u" + std::to_string(id++), mk_observe(atom()));

  ExprPtr body = pick(2) == 0 ? atom() : mk_pair(atom(), atom());
  for (auto it = obs_binds.rbegin(); it != obs_binds.rend(); ++it)
    body = mk_let(it->first, it->second, std::move(body));
  for (auto it = binds.rbegin(); it != binds.rend(); ++it)
    body = mk_let(it->first, it->second, std::move(body));
  typecheck(body, {});
  return body;
}

// ---- random open discrete programs over int/bool/tuple states -----------

struct OpenProgram {
  ExprPtr expr;          // typed against gamma
  TypeEnv gamma;
  Layout rho;            // one location per base leaf
  ImpEnv sigma;
};

// Open program with free variables of bool, int, and pair types, discrete
// draws with constant parameters, int/bool operators, pairs, projections,
// and up to two observations.
inline OpenProgram gen_open_program(std::uint32_t seed) {
  std::mt19937 rng(seed);
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };

  OpenProgram p;
  int nfree = 1 + pick(3);
  for (int i = 0; i < nfree; ++i) {
    std::string x = "g" + std::to_string(i);
    switch (pick(3)) {
      case 0: p.gamma.emplace_back(x, Type::boolean()); break;
      case 1: p.gamma.emplace_back(x, Type::integer()); break;
      default:
        p.gamma.emplace_back(x, Type::pair(Type::integer(), Type::boolean()));
    }
  }
  int loc = 0;
  for (const auto& [x, t] : p.gamma) {
    if (t.is_pair()) {
      std::string a = "g" + std::to_string(loc++) + "a";
      std::string b = "g" + std::to_string(loc - 1) + "b";
      p.rho[x] = Pattern::pair(Pattern::location(a), Pattern::location(b));
      p.sigma.emplace_back(a, t.first());
      p.sigma.emplace_back(b, t.second());
    } else {
      std::string l = "g" + std::to_string(loc++) + "v";
      p.rho[x] = Pattern::location(l);
      p.sigma.emplace_back(l, t);
    }
  }

  std::vector<std::pair<std::string, ExprPtr>> binds;
  std::vector<std::string> bools, ints;
  std::vector<std::pair<std::string, Type>> pairs;
  for (const auto& [x, t] : p.gamma) {
    if (t.is_bool()) bools.push_back(x);
    else if (t.is_int()) ints.push_back(x);
    else pairs.emplace_back(x, t);
  }
  int id = 0;
  auto bind = [&](ExprPtr e, const Type& t) {
    std::string x = "x" + std::to_string(id++);
    binds.emplace_back(x, std::move(e));
    if (t.is_bool()) bools.push_back(x);
    else if (t.is_int()) ints.push_back(x);
    else if (t.is_pair()) pairs.emplace_back(x, t);
    return x;
  };
  auto batom = [&]() -> ExprPtr {
    if (bools.empty() || pick(5) == 0)
      return mk_const(Value::boolean(pick(2) == 0));
    return mk_var(bools[pick(static_cast<int>(bools.size()))]);
  };
  auto iatom = [&]() -> ExprPtr {
    if (ints.empty() || pick(4) == 0)
      return mk_const(Value::integer(pick(4)));
    return mk_var(ints[pick(static_cast<int>(ints.size()))]);
  };

  int steps = 2 + pick(6);
  for (int i = 0; i < steps; ++i) {
    switch (pick(10)) {
      case 0:
        bind(mk_random("Bernoulli",
                       {mk_const(Value::real(0.1 * (1 + pick(9))))}),
             Type::boolean());
        break;
      case 1:
        bind(mk_random("DiscreteUniform",
                       {mk_const(Value::integer(1 + pick(4)))}),
             Type::integer());
        break;
      case 2:
        bind(mk_random("Binomial",
                       {mk_const(Value::integer(1 + pick(3))),
                        mk_const(Value::real(0.1 * (1 + pick(9))))}),
             Type::integer());
        break;
      case 3: {
        OpCode ops[] = {OpCode::Add, OpCode::Sub, OpCode::Mul};
        bind(mk_op(ops[pick(3)], iatom(), iatom()), Type::integer());
        break;
      }
      case 4:
        // Constant divisor keeps `%` total.
        bind(mk_op(OpCode::Mod, iatom(),
                   mk_const(Value::integer(2 + pick(3)))),
             Type::integer());
        break;
      case 5: {
        OpCode ops[] = {OpCode::Gt, OpCode::Eq};
        bind(mk_op(ops[pick(2)], iatom(), iatom()), Type::boolean());
        break;
      }
      case 6: {
        OpCode ops[] = {OpCode::And, OpCode::Or, OpCode::Eq};
        bind(mk_op(ops[pick(3)], batom(), batom()), Type::boolean());
        break;
      }
      case 7:
        bind(mk_pair(iatom(), batom()),
             Type::pair(Type::integer(), Type::boolean()));
        break;
      case 8:
        if (!pairs.empty()) {
          auto& [x, t] = pairs[pick(static_cast<int>(pairs.size()))];
          int which = 1 + pick(2);
          bind(mk_proj(which, mk_var(x)),
               which == 1 ? t.first() : t.second());
        }
        break;
      default:
        bind(mk_if(batom(), iatom(), iatom()), Type::integer());
        break;
    }
  }
  int observes = pick(3);
  std::vector<std::pair<std::string, ExprPtr>> obs_binds;
  for (int i = 0; i < observes && !bools.empty(); ++i)
    obs_binds.emplace_back("x" + std::to_string(id++), mk_observe(batom()));

  ExprPtr body;
  switch (pick(3)) {
    case 0: body = iatom(); break;
    case 1: body = batom(); break;
    default: body = mk_pair(iatom(), iatom()); break;
  }
  for (auto it = obs_binds.rbegin(); it != obs_binds.rend(); ++it)
    body = mk_let(it->first, it->second, std::move(body));
  for (auto it = binds.rbegin(); it != binds.rend(); ++it)
    body = mk_let(it->first, it->second, std::move(body));
  p.expr = body;
  typecheck(p.expr, p.gamma);
  return p;
}

// Random strictly positive measure over the encoded states of gamma, with a
// small canonical support per type.
inline FiniteMeasure gen_state_measure(const TypeEnv& gamma,
                                       std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::function<std::vector<Value>(const Type&)> values =
      [&](const Type& t) -> std::vector<Value> {
    if (t.is_bool()) return {Value::boolean(false), Value::boolean(true)};
    if (t.is_int())
      return {Value::integer(0), Value::integer(1), Value::integer(2)};
    if (t.is_pair()) {
      std::vector<Value> out;
      for (const auto& a : values(t.first()))
        for (const auto& b : values(t.second()))
          out.push_back(Value::pair(a, b));
      return out;
    }
    return {Value::unit()};
  };
  std::vector<std::vector<Value>> per_var;
  for (const auto& [x, t] : gamma) per_var.push_back(values(t));

  FiniteMeasure mu;
  std::vector<std::size_t> idx(per_var.size(), 0);
  std::uniform_real_distribution<double> w(0.05, 1.0);
  while (true) {
    std::vector<Value> vals;
    for (std::size_t i = 0; i < per_var.size(); ++i)
      vals.push_back(per_var[i][idx[i]]);
    mu.add_weight(encode_state(vals), w(rng));
    std::size_t i = 0;
    for (; i < idx.size(); ++i) {
      if (++idx[i] < per_var[i].size()) break;
      idx[i] = 0;
    }
    if (i == idx.size()) break;
  }
  return mu;
}

}  // namespace funstack::testing
