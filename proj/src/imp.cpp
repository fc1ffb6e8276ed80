#include "funstack/imp.hpp"

#include <algorithm>
#include <memory>

#include "funstack/errors.hpp"
#include "funstack/eval.hpp"
#include "funstack/fun_sem.hpp"
#include "funstack/typesys.hpp"

namespace funstack {

std::string ImpExpr::str() const {
  switch (kind) {
    case Kind::Const:
      return value_str(c);
    case Kind::Loc:
      return l1;
    case Kind::Op:
      return l1 + " " + op_str(op) + " " + l2;
  }
  return "";
}

namespace {

ImpStmtPtr mk(ImpStmt::Kind k) {
  auto s = std::make_shared<ImpStmt>();
  s->kind = k;
  return s;
}

}  // namespace

ImpStmtPtr imp_nil() { return mk(ImpStmt::Kind::Nil); }

ImpStmtPtr imp_assign(std::string l, ImpExpr e) {
  auto s = mk(ImpStmt::Kind::Assign);
  s->loc = std::move(l);
  s->expr = std::move(e);
  return s;
}

ImpStmtPtr imp_random(std::string l, std::string dist,
                      std::vector<std::string> args) {
  auto s = mk(ImpStmt::Kind::RandomAssign);
  s->loc = std::move(l);
  s->dist = std::move(dist);
  s->args = std::move(args);
  return s;
}

ImpStmtPtr imp_observe(std::string l, Type base) {
  auto s = mk(ImpStmt::Kind::Observe);
  s->loc = std::move(l);
  s->base = std::move(base);
  return s;
}

ImpStmtPtr imp_if(std::string cond, ImpStmtPtr then_c, ImpStmtPtr else_c) {
  auto s = mk(ImpStmt::Kind::If);
  s->loc = std::move(cond);
  s->kids = {std::move(then_c), std::move(else_c)};
  return s;
}

ImpStmtPtr imp_local(std::string l, Type base, ImpStmtPtr body) {
  auto s = mk(ImpStmt::Kind::Local);
  s->loc = std::move(l);
  s->base = std::move(base);
  s->kids = {std::move(body)};
  return s;
}

ImpStmtPtr imp_seq(ImpStmtPtr a, ImpStmtPtr b) {
  auto s = mk(ImpStmt::Kind::Seq);
  s->kids = {std::move(a), std::move(b)};
  return s;
}

namespace {

const Type* env_lookup(const ImpEnv& env, const std::string& l) {
  for (const auto& [name, t] : env)
    if (name == l) return &t;
  return nullptr;
}

Type const_type(const Value& c) {
  switch (c.kind()) {
    case Value::Kind::Bool:
      return Type::boolean();
    case Value::Kind::Int:
      return Type::integer();
    case Value::Kind::Real:
      return Type::real();
    default:
      throw ImpTypeError("only base constants may be stored in a location");
  }
}

// env carries the ambient Sigma plus the locations accumulated so far.
ImpEnv check(ImpStmt& c, const ImpEnv& env) {
  switch (c.kind) {
    case ImpStmt::Kind::Nil:
      return {};
    case ImpStmt::Kind::Assign: {
      if (env_lookup(env, c.loc))
        throw ImpTypeError("location " + c.loc + " reassigned");
      Type t;
      switch (c.expr.kind) {
        case ImpExpr::Kind::Const:
          t = const_type(c.expr.c);
          break;
        case ImpExpr::Kind::Loc: {
          const Type* s = env_lookup(env, c.expr.l1);
          if (!s)
            throw ImpTypeError("undeclared location " + c.expr.l1);
          t = *s;
          break;
        }
        case ImpExpr::Kind::Op: {
          const Type* a = env_lookup(env, c.expr.l1);
          const Type* b = env_lookup(env, c.expr.l2);
          if (!a || !b)
            throw ImpTypeError("undeclared location in " + c.expr.str());
          auto r = op_result(c.expr.op, *a, *b);
          if (!r)
            throw ImpTypeError("operator " + op_str(c.expr.op) +
                               " untyped at " + a->str() + ", " + b->str());
          t = *r;
          break;
        }
      }
      return {{c.loc, t}};
    }
    case ImpStmt::Kind::RandomAssign: {
      if (env_lookup(env, c.loc))
        throw ImpTypeError("location " + c.loc + " reassigned");
      const DistSig* sig = dist_sig(c.dist);
      if (!sig) throw ImpTypeError("unknown distribution " + c.dist);
      if (c.args.size() != sig->params.size())
        throw ImpTypeError(c.dist + " expects " +
                           std::to_string(sig->params.size()) +
                           " parameters");
      for (std::size_t i = 0; i < c.args.size(); ++i) {
        const Type* a = env_lookup(env, c.args[i]);
        if (!a)
          throw ImpTypeError("undeclared location " + c.args[i]);
        if (*a != sig->params[i])
          throw ImpTypeError("parameter " + std::to_string(i + 1) + " of " +
                             c.dist + " expects " + sig->params[i].str());
      }
      return {{c.loc, sig->result}};
    }
    case ImpStmt::Kind::Observe: {
      const Type* t = env_lookup(env, c.loc);
      if (!t)
        throw ImpTypeError("observe of undeclared location " + c.loc);
      if (!t->is_base())
        throw ImpTypeError("observe at non-base type " + t->str());
      if (c.base.is_unit())
        c.base = *t;
      else if (c.base != *t)
        throw ImpTypeError("observe annotation " + c.base.str() +
                           " disagrees with location type " + t->str());
      return {};
    }
    case ImpStmt::Kind::If: {
      const Type* t = env_lookup(env, c.loc);
      if (!t)
        throw ImpTypeError("undeclared condition " + c.loc);
      if (!t->is_bool())
        throw ImpTypeError("condition " + c.loc + " has type " + t->str());
      ImpEnv s1 = check(*c.kids[0], env);
      ImpEnv s2 = check(*c.kids[1], env);
      if (s1 != s2) throw ImpTypeError("branch yields disagree");
      return s1;
    }
    case ImpStmt::Kind::Local: {
      if (env_lookup(env, c.loc))
        throw ImpTypeError("local " + c.loc + " shadows a live location");
      ImpEnv inner = check(*c.kids[0], env);
      auto it = std::find_if(inner.begin(), inner.end(), [&](const auto& b) {
        return b.first == c.loc;
      });
      if (it == inner.end())
        throw ImpTypeError("local " + c.loc + " never assigned");
      if (it->second != c.base)
        throw ImpTypeError("local " + c.loc + " declared " + c.base.str() +
                           " but assigned " + it->second.str());
      inner.erase(it);
      return inner;
    }
    case ImpStmt::Kind::Seq: {
      ImpEnv s1 = check(*c.kids[0], env);
      ImpEnv both = env;
      both.insert(both.end(), s1.begin(), s1.end());
      ImpEnv s2 = check(*c.kids[1], both);
      s1.insert(s1.end(), s2.begin(), s2.end());
      return s1;
    }
    case ImpStmt::Kind::For:
      throw ImpTypeError("for-statement must be unrolled before typing");
  }
  throw InternalError("unreachable statement kind");
}

using Names = std::shared_ptr<const std::vector<std::string>>;

Names names_of(const ImpEnv& env) {
  auto v = std::make_shared<std::vector<std::string>>();
  v->reserve(env.size());
  for (const auto& [name, t] : env) v->push_back(name);
  return v;
}

std::pair<MeasureTransformer, ImpEnv> go(const ImpStmtPtr& c,
                                         const ImpEnv& env) {
  Names names = names_of(env);
  switch (c->kind) {
    case ImpStmt::Kind::Nil:
      return {mt_pure([](const Value& s) { return s; }), env};
    case ImpStmt::Kind::Assign: {
      ImpEnv out = env;
      out.emplace_back(c->loc, check(*c, env)[0].second);
      ImpStmtPtr st = c;
      auto t = mt_pure([names, st](const Value& s) {
        Value v;
        switch (st->expr.kind) {
          case ImpExpr::Kind::Const:
            v = st->expr.c;
            break;
          case ImpExpr::Kind::Loc:
            v = state_lookup(*names, s, st->expr.l1);
            break;
          case ImpExpr::Kind::Op:
            v = apply_op(st->expr.op, state_lookup(*names, s, st->expr.l1),
                         state_lookup(*names, s, st->expr.l2));
            break;
        }
        return state_add(*names, s, st->loc, v);
      });
      return {std::move(t), std::move(out)};
    }
    case ImpStmt::Kind::RandomAssign: {
      const DistSig* sig = dist_sig(c->dist);
      if (!sig) throw ImpTypeError("unknown distribution " + c->dist);
      if (!sig->discrete)
        throw UnsupportedDistError("continuous distribution " + c->dist +
                                   " in exact backend");
      ImpEnv out = env;
      out.emplace_back(c->loc, sig->result);
      ImpStmtPtr st = c;
      auto draw = mt_extend([names, st](const Value& s) {
        std::vector<Value> params;
        params.reserve(st->args.size());
        for (const auto& a : st->args)
          params.push_back(state_lookup(*names, s, a));
        return dist_measure(st->dist, params);
      });
      auto store = mt_pure([names, st](const Value& sy) {
        return state_add(*names, sy.first(), st->loc, sy.second());
      });
      return {mt_compose(std::move(draw), std::move(store)), std::move(out)};
    }
    case ImpStmt::Kind::Observe: {
      std::string l = c->loc;
      auto pick = [names, l](const Value& s) {
        return state_lookup(*names, s, l);
      };
      return {mt_constrain(pick, c->base), env};
    }
    case ImpStmt::Kind::If: {
      std::string l = c->loc;
      auto pred = [names, l](const Value& s) {
        return state_lookup(*names, s, l).as_bool();
      };
      auto [t1, out1] = go(c->kids[0], env);
      auto [t2, out2] = go(c->kids[1], env);
      if (out1 != out2) throw ImpTypeError("branch yields disagree");
      return {mt_choose(pred, std::move(t1), std::move(t2)), std::move(out1)};
    }
    case ImpStmt::Kind::Local: {
      auto [t, full] = go(c->kids[0], env);
      Names full_names = names_of(full);
      std::string l = c->loc;
      auto drop = mt_pure([full_names, l](const Value& s) {
        return state_drop(*full_names, s, {l});
      });
      ImpEnv out;
      for (const auto& b : full)
        if (b.first != l) out.push_back(b);
      return {mt_compose(std::move(t), std::move(drop)), std::move(out)};
    }
    case ImpStmt::Kind::Seq: {
      auto [t1, mid] = go(c->kids[0], env);
      auto [t2, out] = go(c->kids[1], mid);
      return {mt_compose(std::move(t1), std::move(t2)), std::move(out)};
    }
    case ImpStmt::Kind::For:
      throw InternalError("for-statement must be unrolled before transform");
  }
  throw InternalError("unreachable statement kind");
}

}  // namespace

ImpEnv typecheck_imp(const ImpStmtPtr& c, const ImpEnv& sigma) {
  return check(*c, sigma);
}

std::pair<MeasureTransformer, std::vector<std::string>> transform_imp(
    const ImpStmtPtr& c, const ImpEnv& sigma) {
  typecheck_imp(c, sigma);
  auto [t, out] = go(c, sigma);
  std::vector<std::string> names;
  names.reserve(out.size());
  for (const auto& [name, ty] : out) names.push_back(name);
  return {std::move(t), std::move(names)};
}

namespace {

// Splits C into its local declarations (in declaration order) and a body
// free of top-level locals; branch bodies are hoisted recursively.
void collect(const ImpStmtPtr& c, ImpEnv& locals, ImpStmtPtr& body) {
  switch (c->kind) {
    case ImpStmt::Kind::Local:
      locals.emplace_back(c->loc, c->base);
      collect(c->kids[0], locals, body);
      return;
    case ImpStmt::Kind::Seq: {
      ImpStmtPtr b1, b2;
      collect(c->kids[0], locals, b1);
      collect(c->kids[1], locals, b2);
      if (b1->kind == ImpStmt::Kind::Nil) {
        body = b2;
        return;
      }
      if (b2->kind == ImpStmt::Kind::Nil) {
        body = b1;
        return;
      }
      body = imp_seq(std::move(b1), std::move(b2));
      return;
    }
    case ImpStmt::Kind::If:
      body = imp_if(c->loc, hoist_locals(c->kids[0]), hoist_locals(c->kids[1]));
      return;
    default:
      body = c;
      return;
  }
}

}  // namespace

ImpStmtPtr hoist_locals(const ImpStmtPtr& c) {
  ImpEnv locals;
  ImpStmtPtr body;
  collect(c, locals, body);
  for (auto it = locals.rbegin(); it != locals.rend(); ++it)
    body = imp_local(it->first, it->second, std::move(body));
  return body;
}

void imp_locations(const ImpStmt& c, std::vector<std::string>& out) {
  switch (c.kind) {
    case ImpStmt::Kind::Assign:
    case ImpStmt::Kind::RandomAssign:
      out.push_back(c.loc);
      return;
    case ImpStmt::Kind::Local: {
      // The binder is scoped by the local block and never escapes.
      std::vector<std::string> inner;
      imp_locations(*c.kids[0], inner);
      for (auto& l : inner)
        if (l != c.loc) out.push_back(std::move(l));
      return;
    }
    case ImpStmt::Kind::If:
    case ImpStmt::Kind::Seq:
    case ImpStmt::Kind::For:
      for (const auto& k : c.kids) imp_locations(*k, out);
      return;
    default:
      return;
  }
}

namespace {

void print(const ImpStmt& c, int indent, std::string& out) {
  auto line = [&](const std::string& s) {
    out.append(indent, ' ');
    out += s;
    out += '\n';
  };
  switch (c.kind) {
    case ImpStmt::Kind::Nil:
      line("nil");
      return;
    case ImpStmt::Kind::Assign:
      line(c.loc + " <- " + c.expr.str());
      return;
    case ImpStmt::Kind::RandomAssign: {
      std::string args;
      for (const auto& a : c.args) {
        if (!args.empty()) args += ", ";
        args += a;
      }
      line(c.loc + " <-s " + c.dist + "(" + args + ")");
      return;
    }
    case ImpStmt::Kind::Observe:
      line("observe[" + c.base.str() + "] " + c.loc);
      return;
    case ImpStmt::Kind::If:
      line("if " + c.loc + " {");
      print(*c.kids[0], indent + 2, out);
      line("} else {");
      print(*c.kids[1], indent + 2, out);
      line("}");
      return;
    case ImpStmt::Kind::Local:
      line("local " + c.loc + ":" + c.base.str() + " {");
      print(*c.kids[0], indent + 2, out);
      line("}");
      return;
    case ImpStmt::Kind::Seq:
      print(*c.kids[0], indent, out);
      print(*c.kids[1], indent, out);
      return;
    case ImpStmt::Kind::For:
      line("for " + c.range + " {");
      print(*c.kids[0], indent + 2, out);
      line("}");
      return;
  }
}

}  // namespace

std::string imp_print(const ImpStmt& c) {
  std::string out;
  print(c, 0, out);
  return out;
}

}  // namespace funstack
