#include "funstack/fun_sem.hpp"

#include <algorithm>
#include <memory>
#include <set>

#include "funstack/errors.hpp"
#include "funstack/eval.hpp"
#include "funstack/typesys.hpp"

namespace funstack {

Value encode_state(const std::vector<Value>& vals) {
  if (vals.empty()) return Value::unit();
  Value tail = vals.back();
  for (std::size_t i = vals.size() - 1; i-- > 0;)
    tail = Value::pair(vals[i], tail);
  return Value::pair(Value::unit(), tail);
}

std::vector<Value> decode_state(const Value& s, std::size_t n) {
  std::vector<Value> out;
  out.reserve(n);
  if (n == 0) return out;
  const Value* cur = &s.second();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    out.push_back(cur->first());
    cur = &cur->second();
  }
  out.push_back(*cur);
  return out;
}

namespace {

std::size_t index_of(const std::vector<std::string>& names,
                     const std::string& x) {
  return std::find(names.begin(), names.end(), x) - names.begin();
}

}  // namespace

Value state_add(const std::vector<std::string>& names, const Value& s,
                const std::string& x, const Value& c) {
  if (index_of(names, x) != names.size()) return s;
  auto vals = decode_state(s, names.size());
  vals.push_back(c);
  return encode_state(vals);
}

Value state_lookup(const std::vector<std::string>& names, const Value& s,
                   const std::string& x) {
  auto i = index_of(names, x);
  if (i == names.size()) return Value::unit();
  return decode_state(s, names.size())[i];
}

Value state_drop(const std::vector<std::string>& names, const Value& s,
                 const std::vector<std::string>& drop) {
  auto vals = decode_state(s, names.size());
  std::vector<Value> kept;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (std::find(drop.begin(), drop.end(), names[i]) == drop.end())
      kept.push_back(vals[i]);
  return encode_state(kept);
}

Value eval_value(const Expr& v, const std::vector<std::string>& names,
                 const Value& s) {
  auto vals = decode_state(s, names.size());
  return eval_value_expr(v, [&](const std::string& x) {
    auto i = index_of(names, x);
    return i == names.size() ? Value::unit() : vals[i];
  });
}

namespace {

using Names = std::shared_ptr<const std::vector<std::string>>;

MeasureTransformer go(const ExprPtr& e, const Names& gamma) {
  if (!e->typed)
    throw InternalError("transform requires a typed expression");
  switch (e->kind) {
    case Expr::Kind::Var:
    case Expr::Kind::Const:
    case Expr::Kind::Pair: {
      ExprPtr v = e;
      return mt_pure([gamma, v](const Value& s) {
        return Value::pair(s, eval_value(*v, *gamma, s));
      });
    }
    case Expr::Kind::Op: {
      ExprPtr v = e;
      return mt_pure([gamma, v](const Value& s) {
        return Value::pair(s, apply_op(v->op, eval_value(*v->kids[0], *gamma, s),
                                       eval_value(*v->kids[1], *gamma, s)));
      });
    }
    case Expr::Kind::Proj: {
      ExprPtr v = e;
      return mt_pure([gamma, v](const Value& s) {
        Value p = eval_value(*v->kids[0], *gamma, s);
        return Value::pair(s, v->proj == 1 ? p.first() : p.second());
      });
    }
    case Expr::Kind::If: {
      ExprPtr cond = e->kids[0];
      auto pred = [gamma, cond](const Value& s) {
        return eval_value(*cond, *gamma, s).as_bool();
      };
      return mt_choose(pred, go(e->kids[1], gamma), go(e->kids[2], gamma));
    }
    case Expr::Kind::Random: {
      ExprPtr v = e;
      const DistSig* sig = dist_sig(v->name);
      if (!sig)
        throw InternalError("unknown distribution in typed AST: " + v->name);
      if (!sig->discrete)
        throw UnsupportedDistError(
            "continuous distribution " + v->name + " in exact backend",
            v->span);
      return mt_extend([gamma, v](const Value& s) {
        std::vector<Value> params;
        params.reserve(v->kids.size());
        for (const auto& k : v->kids)
          params.push_back(eval_value(*k, *gamma, s));
        return dist_measure(v->name, params);
      });
    }
    case Expr::Kind::Observe: {
      ExprPtr v = e->kids[0];
      auto pick = [gamma, v](const Value& s) {
        return eval_value(*v, *gamma, s);
      };
      auto unitize = mt_pure(
          [](const Value& s) { return Value::pair(s, Value::unit()); });
      return mt_compose(mt_constrain(pick, e->observed_type),
                        std::move(unitize));
    }
    case Expr::Kind::Let: {
      std::string x = e->name;
      if (std::find(gamma->begin(), gamma->end(), x) != gamma->end())
        throw InternalError("bound variable '" + x +
                            "' shadows the environment");
      auto extended = std::make_shared<std::vector<std::string>>(*gamma);
      extended->push_back(x);
      Names gamma_x = extended;

      auto t1 = go(e->kids[0], gamma);
      auto addx = mt_pure([gamma, x](const Value& sy) {
        return state_add(*gamma, sy.first(), x, sy.second());
      });
      auto t2 = go(e->kids[1], gamma_x);
      auto dropx = mt_pure([gamma_x, x](const Value& sy) {
        return Value::pair(state_drop(*gamma_x, sy.first(), {x}),
                           sy.second());
      });
      return mt_compose(
          mt_compose(std::move(t1), std::move(addx)),
          mt_compose(std::move(t2), std::move(dropx)));
    }
    default:
      throw InternalError("transform on array node (unroll first)");
  }
}

void assert_distinct_binders(const Expr& e) {
  std::vector<std::string> bs;
  bound_vars(e, bs);
  std::set<std::string> seen(bs.begin(), bs.end());
  if (seen.size() != bs.size())
    throw InternalError("bound variables are not pairwise distinct");
  for (const auto& fv : free_vars(e))
    if (seen.count(fv))
      throw InternalError("bound variable '" + fv + "' collides with a free variable");
}

}  // namespace

MeasureTransformer transform(const ExprPtr& e,
                             const std::vector<std::string>& gamma) {
  assert_distinct_binders(*e);
  return go(e, std::make_shared<const std::vector<std::string>>(gamma));
}

FiniteMeasure value_marginal_mt(const ExprPtr& e) {
  if (!e->typed) typecheck(e, {});
  auto t = transform(e, {});
  FiniteMeasure out = t(FiniteMeasure::dirac(Value::unit()));
  auto snd = mt_pure([](const Value& sv) { return sv.second(); });
  return snd(out);
}

std::pair<FiniteMeasure, double> infer_mt(const ExprPtr& e) {
  return normalize(value_marginal_mt(e));
}

}  // namespace funstack
