#include "funstack/typesys.hpp"

#include <algorithm>
#include <map>

#include "funstack/errors.hpp"

namespace funstack {

const std::vector<DistSig>& all_dist_sigs() {
  static const std::vector<DistSig> sigs = {
      {"Bernoulli", {Type::real()}, Type::boolean(), true},
      {"Binomial", {Type::integer(), Type::real()}, Type::integer(), true},
      {"Poisson", {Type::real()}, Type::integer(), true},
      {"DiscreteUniform", {Type::integer()}, Type::integer(), true},
      {"Gaussian", {Type::real(), Type::real()}, Type::real(), false},
      {"Beta", {Type::real(), Type::real()}, Type::real(), false},
      {"Gamma", {Type::real(), Type::real()}, Type::real(), false},
  };
  return sigs;
}

const DistSig* dist_sig(const std::string& name) {
  for (const auto& s : all_dist_sigs())
    if (s.name == name) return &s;
  return nullptr;
}

std::optional<Type> op_result(OpCode op, const Type& a, const Type& b) {
  if (a != b) return std::nullopt;
  switch (op) {
    case OpCode::And:
    case OpCode::Or:
      if (a.is_bool()) return Type::boolean();
      return std::nullopt;
    case OpCode::Eq:
      if (a.is_bool() || a.is_int()) return Type::boolean();
      return std::nullopt;
    case OpCode::Gt:
      if (a.is_int() || a.is_real()) return Type::boolean();
      return std::nullopt;
    case OpCode::Add:
    case OpCode::Sub:
    case OpCode::Mul:
      if (a.is_int()) return Type::integer();
      if (a.is_real()) return Type::real();
      return std::nullopt;
    case OpCode::Mod:
      if (a.is_int()) return Type::integer();
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

Type const_type(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Unit: return Type::unit();
    case Value::Kind::Bool: return Type::boolean();
    case Value::Kind::Int: return Type::integer();
    case Value::Kind::Real: return Type::real();
    case Value::Kind::Pair:
      return Type::pair(const_type(v.first()), const_type(v.second()));
  }
  return Type::unit();
}

Type check(const ExprPtr& e, TypeEnv& env);

Type annotate(const ExprPtr& e, Type t) {
  e->type = t;
  e->typed = true;
  return t;
}

Type check(const ExprPtr& e, TypeEnv& env) {
  switch (e->kind) {
    case Expr::Kind::Var: {
      for (auto it = env.rbegin(); it != env.rend(); ++it)
        if (it->first == e->name) return annotate(e, it->second);
      throw TypeError("unbound variable '" + e->name + "' (Fun Var)", e->span);
    }
    case Expr::Kind::Const:
      return annotate(e, const_type(e->lit));
    case Expr::Kind::Pair: {
      auto t1 = check(e->kids[0], env);
      auto t2 = check(e->kids[1], env);
      return annotate(e, Type::pair(t1, t2));
    }
    case Expr::Kind::Op: {
      auto t1 = check(e->kids[0], env);
      auto t2 = check(e->kids[1], env);
      if (e->obs_eq_sugar && e->op == OpCode::Eq && t1.is_real() &&
          t2.is_real()) {
        // observe (x = y) at real is sugar for observe (x - y).
        e->op = OpCode::Sub;
        e->obs_eq_sugar = false;
        return annotate(e, Type::real());
      }
      auto r = op_result(e->op, t1, t2);
      if (!r)
        throw TypeError("operator '" + op_str(e->op) + "' undefined at " +
                            t1.str() + ", " + t2.str() + " (Fun Operator)",
                        e->span);
      return annotate(e, *r);
    }
    case Expr::Kind::Proj: {
      auto t = check(e->kids[0], env);
      if (!t.is_pair())
        throw TypeError("projection ." + std::to_string(e->proj) +
                            " of non-pair " + t.str() + " (Fun Proj)",
                        e->span);
      return annotate(e, e->proj == 1 ? t.first() : t.second());
    }
    case Expr::Kind::If: {
      auto tc = check(e->kids[0], env);
      if (!tc.is_bool())
        throw TypeError("if condition has type " + tc.str() + " (Fun If)",
                        e->span);
      auto t1 = check(e->kids[1], env);
      auto t2 = check(e->kids[2], env);
      if (t1 != t2)
        throw TypeError("branch types disagree: " + t1.str() + " vs " +
                            t2.str() + " (Fun If)",
                        e->span);
      return annotate(e, t1);
    }
    case Expr::Kind::Let: {
      auto t1 = check(e->kids[0], env);
      env.emplace_back(e->name, t1);
      auto t2 = check(e->kids[1], env);
      env.pop_back();
      return annotate(e, t2);
    }
    case Expr::Kind::Random: {
      const DistSig* sig = dist_sig(e->name);
      if (!sig)
        throw TypeError("unknown distribution '" + e->name + "' (Fun Random)",
                        e->span);
      if (sig->params.size() != e->kids.size())
        throw TypeError("distribution " + e->name + " expects " +
                            std::to_string(sig->params.size()) +
                            " parameters (Fun Random)",
                        e->span);
      for (size_t i = 0; i < e->kids.size(); ++i) {
        auto t = check(e->kids[i], env);
        if (t != sig->params[i])
          throw TypeError("parameter " + std::to_string(i + 1) + " of " +
                              e->name + " has type " + t.str() +
                              ", expected " + sig->params[i].str() +
                              " (Fun Random)",
                          e->span);
      }
      return annotate(e, sig->result);
    }
    case Expr::Kind::Observe: {
      auto t = check(e->kids[0], env);
      if (!t.is_base())
        throw TypeError("observe at non-base type " + t.str() +
                            " (Fun Observe)",
                        e->span);
      e->observed_type = t;
      return annotate(e, Type::unit());
    }
    case Expr::Kind::ArrayLit: {
      auto t0 = check(e->kids[0], env);
      if (t0.contains_array())
        throw TypeError("nested arrays are not supported (Fun Array)",
                        e->span);
      for (size_t i = 1; i < e->kids.size(); ++i) {
        auto ti = check(e->kids[i], env);
        if (ti != t0)
          throw TypeError("array elements disagree: " + t0.str() + " vs " +
                              ti.str() + " (Fun Array)",
                          e->span);
      }
      return annotate(e, Type::array(t0, static_cast<int>(e->kids.size())));
    }
    case Expr::Kind::Index: {
      auto ta = check(e->kids[0], env);
      if (!ta.is_array())
        throw TypeError("indexing non-array " + ta.str() + " (Fun Index)",
                        e->span);
      auto ti = check(e->kids[1], env);
      if (!ti.is_int())
        throw TypeError("index has type " + ti.str() + " (Fun Index)",
                        e->span);
      return annotate(e, ta.elem());
    }
    case Expr::Kind::For: {
      auto ta = check(e->kids[0], env);
      if (!ta.is_array())
        throw TypeError("comprehension source has type " + ta.str() +
                            " (Fun For)",
                        e->span);
      env.emplace_back(e->name, ta.elem());
      auto tb = check(e->kids[1], env);
      env.pop_back();
      if (tb.contains_array())
        throw TypeError("comprehension body has array type (Fun For)",
                        e->span);
      return annotate(e, Type::array(tb, ta.size()));
    }
  }
  throw InternalError("unhandled node in typecheck");
}

}  // namespace

Type typecheck(const ExprPtr& e, const TypeEnv& env) {
  TypeEnv scratch = env;
  return check(e, scratch);
}

namespace {

class Unroller {
 public:
  ExprPtr run(const ExprPtr& e) { return go(e, false); }

 private:
  int counter_ = 0;
  std::string fresh() { return "%a" + std::to_string(counter_++); }

  // pi_n(M, N): select element N of the tuple-encoded array M of length n.
  // Index must already be normalized into [0, n).
  ExprPtr pi(const ExprPtr& arr, const ExprPtr& idx, int n) {
    if (n == 1) return arr;
    auto t0 = fresh(), t1 = fresh();
    auto m2 = fresh(), n2 = fresh();
    auto rest = mk_let(
        m2, mk_proj(2, arr),
        mk_let(n2, mk_op(OpCode::Sub, idx, mk_const(Value::integer(1))),
               pi(mk_var(m2), mk_var(n2), n - 1)));
    return mk_let(
        t0, mk_op(OpCode::Mod, idx, mk_const(Value::integer(n))),
        mk_let(t1, mk_op(OpCode::Eq, mk_var(t0), mk_const(Value::integer(0))),
               mk_if(mk_var(t1), mk_proj(1, arr), rest)));
  }

  // ((N % n) + n) % n, then pi.
  ExprPtr indexed(const ExprPtr& arr, const ExprPtr& idx, int n) {
    auto j0 = fresh(), j1 = fresh(), j2 = fresh();
    return mk_let(
        j0, mk_op(OpCode::Mod, idx, mk_const(Value::integer(n))),
        mk_let(j1, mk_op(OpCode::Add, mk_var(j0), mk_const(Value::integer(n))),
               mk_let(j2,
                      mk_op(OpCode::Mod, mk_var(j1),
                            mk_const(Value::integer(n))),
                      pi(arr, mk_var(j2), n))));
  }

  // Copy with every binder renamed fresh, applying `ren` to free variables,
  // so unrolled comprehension bodies keep bound names globally unique.
  ExprPtr alpha(const ExprPtr& e, std::map<std::string, std::string>& ren) {
    switch (e->kind) {
      case Expr::Kind::Var: {
        auto it = ren.find(e->name);
        if (it == ren.end()) return e;
        auto c = std::make_shared<Expr>(*e);
        c->name = it->second;
        return c;
      }
      case Expr::Kind::Const:
        return e;
      case Expr::Kind::Let:
      case Expr::Kind::For: {
        auto c = std::make_shared<Expr>(*e);
        c->kids[0] = alpha(e->kids[0], ren);
        auto nb = fresh();
        bool had = ren.count(e->name) > 0;
        std::string old = had ? ren[e->name] : "";
        ren[e->name] = nb;
        c->name = nb;
        c->kids[1] = alpha(e->kids[1], ren);
        if (had)
          ren[e->name] = old;
        else
          ren.erase(e->name);
        return c;
      }
      default: {
        auto c = std::make_shared<Expr>(*e);
        for (auto& k : c->kids) k = alpha(k, ren);
        return c;
      }
    }
  }

  ExprPtr go(const ExprPtr& e, bool in_body) {
    switch (e->kind) {
      case Expr::Kind::ArrayLit: {
        if (in_body)
          throw UnrollError("array literal inside comprehension body",
                            e->span);
        auto v = go(e->kids.back(), in_body);
        for (size_t i = e->kids.size() - 1; i-- > 0;)
          v = mk_pair(go(e->kids[i], in_body), v, e->span);
        return v;
      }
      case Expr::Kind::Index: {
        if (!e->kids[0]->typed)
          throw UnrollError("unknown range size (untyped index)", e->span);
        int n = e->kids[0]->type.size();
        return indexed(go(e->kids[0], in_body), go(e->kids[1], in_body), n);
      }
      case Expr::Kind::For: {
        if (in_body)
          throw UnrollError("nested comprehension", e->span);
        if (!e->kids[0]->typed)
          throw UnrollError("unknown range size (untyped source)", e->span);
        int n = e->kids[0]->type.size();
        auto src = go(e->kids[0], in_body);
        auto body = go(e->kids[1], true);
        std::vector<std::string> ys;
        std::vector<ExprPtr> items;
        for (int i = 0; i < n; ++i) {
          auto xi = fresh();
          std::map<std::string, std::string> ren{{e->name, xi}};
          auto copy = alpha(body, ren);
          items.push_back(
              mk_let(xi, pi(src, mk_const(Value::integer(i)), n), copy));
          ys.push_back(fresh());
        }
        ExprPtr tup = mk_var(ys.back());
        for (int i = n - 1; i-- > 0;) tup = mk_pair(mk_var(ys[i]), tup);
        ExprPtr out = tup;
        for (int i = n; i-- > 0;) out = mk_let(ys[i], items[i], out);
        return out;
      }
      default: {
        bool changed = false;
        std::vector<ExprPtr> kids;
        kids.reserve(e->kids.size());
        for (const auto& k : e->kids) {
          auto nk = go(k, in_body);
          changed |= nk != k;
          kids.push_back(std::move(nk));
        }
        if (!changed) return e;
        auto c = std::make_shared<Expr>(*e);
        c->kids = std::move(kids);
        return c;
      }
    }
  }
};

}  // namespace

ExprPtr unroll_arrays(const ExprPtr& e) { return Unroller().run(e); }

bool program_all_discrete(const Expr& e) {
  if (e.kind == Expr::Kind::Random) {
    const DistSig* sig = dist_sig(e.name);
    if (!sig || !sig->discrete) return false;
  }
  if (e.kind == Expr::Kind::Observe && e.observed_type.is_real()) return false;
  for (const auto& k : e.kids)
    if (!program_all_discrete(*k)) return false;
  return true;
}

bool program_bernoulli_fun(const Expr& e) {
  if (e.kind == Expr::Kind::Random) {
    if (e.name != "Bernoulli") return false;
    if (e.kids.size() != 1 || e.kids[0]->kind != Expr::Kind::Const)
      return false;
  }
  if (e.kind == Expr::Kind::Observe && e.observed_type.is_real()) return false;
  for (const auto& k : e.kids)
    if (!program_bernoulli_fun(*k)) return false;
  return true;
}

}  // namespace funstack
