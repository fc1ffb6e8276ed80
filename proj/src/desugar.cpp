#include <map>
#include <set>

#include "funstack/errors.hpp"
#include "funstack/frontend.hpp"

namespace funstack {

namespace {

using Binds = std::vector<std::pair<std::string, ExprPtr>>;

class Desugarer {
 public:
  ExprPtr run(const SExpr& e) {
    auto core = ds(e);
    std::set<std::string> used = free_vars(*core);
    std::map<std::string, std::string> ren;
    return uniquify(core, used, ren);
  }

 private:
  int counter_ = 0;
  struct FunDef {
    std::vector<std::string> params;
    SExprPtr body;
  };
  std::map<std::string, FunDef> funs_;
  std::set<std::string> expanding_;
  std::map<std::string, std::string> rename_;

  std::string fresh() { return "%d" + std::to_string(counter_++); }

  ExprPtr wrap(Binds& binds, ExprPtr head) {
    for (auto it = binds.rbegin(); it != binds.rend(); ++it)
      head = mk_let(it->first, it->second, head, head->span);
    return head;
  }

  ExprPtr ds_val(const SExpr& e, Binds& binds) {
    switch (e.kind) {
      case SExpr::Kind::Var: {
        auto it = rename_.find(e.name);
        if (it != rename_.end()) return mk_var(it->second, e.span);
        if (funs_.count(e.name))
          throw DesugarError("higher-order use of function '" + e.name + "'",
                             e.span);
        return mk_var(e.name, e.span);
      }
      case SExpr::Kind::Const:
        return mk_const(e.lit, e.span);
      case SExpr::Kind::Tuple: {
        std::vector<ExprPtr> vals;
        vals.reserve(e.kids.size());
        for (const auto& k : e.kids) vals.push_back(ds_val(*k, binds));
        auto v = vals.back();
        for (size_t i = vals.size() - 1; i-- > 0;)
          v = mk_pair(vals[i], v, e.span);
        return v;
      }
      default: {
        auto name = fresh();
        binds.emplace_back(name, ds(e));
        return mk_var(name, e.span);
      }
    }
  }

  ExprPtr ds(const SExpr& e) {
    Binds binds;
    switch (e.kind) {
      case SExpr::Kind::Var:
      case SExpr::Kind::Const:
      case SExpr::Kind::Tuple:
        return wrap(binds, ds_val(e, binds));
      case SExpr::Kind::Proj: {
        auto v = ds_val(*e.kids[0], binds);
        return wrap(binds, mk_proj(e.proj, v, e.span));
      }
      case SExpr::Kind::Op: {
        auto a = ds_val(*e.kids[0], binds);
        auto b = ds_val(*e.kids[1], binds);
        return wrap(binds, mk_op(e.op, a, b, e.span));
      }
      case SExpr::Kind::If: {
        auto c = ds_val(*e.kids[0], binds);
        return wrap(binds, mk_if(c, ds(*e.kids[1]), ds(*e.kids[2]), e.span));
      }
      case SExpr::Kind::Let:
        return ds_let(e);
      case SExpr::Kind::Random: {
        std::vector<ExprPtr> params;
        for (const auto& k : e.kids) params.push_back(ds_val(*k, binds));
        return wrap(binds, mk_random(e.name, std::move(params), e.span));
      }
      case SExpr::Kind::Observe: {
        const SExpr& arg = *e.kids[0];
        ExprPtr v;
        if (arg.kind == SExpr::Kind::Op && arg.op == OpCode::Eq) {
          auto a = ds_val(*arg.kids[0], binds);
          auto b = ds_val(*arg.kids[1], binds);
          auto eq = mk_op(OpCode::Eq, a, b, arg.span);
          eq->obs_eq_sugar = true;
          auto name = fresh();
          binds.emplace_back(name, eq);
          v = mk_var(name, arg.span);
        } else {
          v = ds_val(arg, binds);
        }
        return wrap(binds, mk_observe(v, e.span));
      }
      case SExpr::Kind::FunDef: {
        if (funs_.count(e.name))
          throw DesugarError("function '" + e.name + "' redefined", e.span);
        funs_[e.name] = {e.params, e.kids[0]};
        auto rest = ds(*e.kids[1]);
        funs_.erase(e.name);
        return rest;
      }
      case SExpr::Kind::Apply:
        return ds_apply(e);
      case SExpr::Kind::Seq:
        return mk_let(fresh(), ds(*e.kids[0]), ds(*e.kids[1]), e.span);
      case SExpr::Kind::ArrayLit: {
        auto arr = std::make_shared<Expr>();
        arr->kind = Expr::Kind::ArrayLit;
        arr->span = e.span;
        for (const auto& k : e.kids) arr->kids.push_back(ds_val(*k, binds));
        return wrap(binds, arr);
      }
      case SExpr::Kind::Index: {
        auto a = ds_val(*e.kids[0], binds);
        auto i = ds_val(*e.kids[1], binds);
        auto ix = std::make_shared<Expr>();
        ix->kind = Expr::Kind::Index;
        ix->span = e.span;
        ix->kids = {a, i};
        return wrap(binds, ix);
      }
      case SExpr::Kind::For: {
        auto src = ds_val(*e.kids[0], binds);
        auto f = std::make_shared<Expr>();
        f->kind = Expr::Kind::For;
        f->span = e.span;
        f->name = e.name;
        f->kids.push_back(src);
        f->kids.push_back(ds(*e.kids[1]));
        return wrap(binds, f);
      }
    }
    throw InternalError("unhandled surface node in desugar");
  }

  ExprPtr ds_let(const SExpr& e) {
    auto bound = ds(*e.kids[0]);
    if (e.params.size() == 1)
      return mk_let(e.params[0], bound, ds(*e.kids[1]), e.span);
    // Tuple-binding let: bind the pair, then project components.
    auto body = ds(*e.kids[1]);
    auto tup = fresh();
    std::vector<std::pair<std::string, ExprPtr>> projs;
    std::string cur = tup;
    for (size_t i = 0; i + 1 < e.params.size(); ++i) {
      projs.emplace_back(e.params[i], mk_proj(1, mk_var(cur), e.span));
      if (i + 2 < e.params.size()) {
        auto rest = fresh();
        projs.emplace_back(rest, mk_proj(2, mk_var(cur), e.span));
        cur = rest;
      } else {
        projs.emplace_back(e.params[i + 1], mk_proj(2, mk_var(cur), e.span));
      }
    }
    for (auto it = projs.rbegin(); it != projs.rend(); ++it)
      body = mk_let(it->first, it->second, body, e.span);
    return mk_let(tup, bound, body, e.span);
  }

  ExprPtr ds_apply(const SExpr& e) {
    auto it = funs_.find(e.name);
    if (it == funs_.end())
      throw DesugarError("application of unknown function '" + e.name + "'",
                         e.span);
    const FunDef& f = it->second;
    if (f.params.size() != e.kids.size())
      throw DesugarError("function '" + e.name + "' expects " +
                             std::to_string(f.params.size()) + " arguments",
                         e.span);
    if (expanding_.count(e.name))
      throw DesugarError("recursive use of function '" + e.name + "'", e.span);

    Binds argbinds;
    std::map<std::string, std::string> saved;
    for (size_t i = 0; i < f.params.size(); ++i) {
      auto a = fresh();
      argbinds.emplace_back(a, ds(*e.kids[i]));
      if (auto r = rename_.find(f.params[i]); r != rename_.end())
        saved[f.params[i]] = r->second;
      rename_[f.params[i]] = a;
    }
    expanding_.insert(e.name);
    auto body = ds(*f.body);
    expanding_.erase(e.name);
    for (const auto& p : f.params) {
      auto s = saved.find(p);
      if (s != saved.end())
        rename_[p] = s->second;
      else
        rename_.erase(p);
    }
    return wrap(argbinds, body);
  }

  ExprPtr uniquify(const ExprPtr& e, std::set<std::string>& used,
                   std::map<std::string, std::string>& ren) {
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
        c->kids[0] = uniquify(e->kids[0], used, ren);
        std::string binder = e->name;
        bool shadowed = ren.count(binder) > 0;
        std::string old = shadowed ? ren[binder] : "";
        if (used.count(binder)) {
          auto nb = binder + "%" + std::to_string(used.size());
          while (used.count(nb)) nb += "x";
          used.insert(nb);
          ren[binder] = nb;
          c->name = nb;
        } else {
          used.insert(binder);
          ren.erase(binder);
        }
        c->kids[1] = uniquify(e->kids[1], used, ren);
        if (shadowed)
          ren[binder] = old;
        else if (c->name != binder)
          ren.erase(binder);
        return c;
      }
      default: {
        auto c = std::make_shared<Expr>(*e);
        for (auto& k : c->kids) k = uniquify(k, used, ren);
        return c;
      }
    }
  }
};

}  // namespace

ExprPtr desugar(const SExpr& e) { return Desugarer().run(e); }

ExprPtr load_program_text(const std::string& source) {
  return desugar(*parse_program(source));
}

static std::string pp(const SExpr& e, bool parens);

static std::string pp_list(const SExpr& e, const char* sep) {
  std::string s;
  for (size_t i = 0; i < e.kids.size(); ++i) {
    if (i) s += sep;
    s += pp(*e.kids[i], false);
  }
  return s;
}

static std::string pp(const SExpr& e, bool parens) {
  std::string s;
  switch (e.kind) {
    case SExpr::Kind::Var:
      return e.name;
    case SExpr::Kind::Const:
      return e.lit.str();
    case SExpr::Kind::Tuple:
      return "(" + pp_list(e, ", ") + ")";
    case SExpr::Kind::Proj: {
      // Parenthesize a projected projection: `p.2.1` would lex as `p` `.`
      // `2.1` with the real literal swallowing the second index.
      std::string t = pp(*e.kids[0], true);
      if (e.kids[0]->kind == SExpr::Kind::Proj) t = "(" + t + ")";
      return t + "." + std::to_string(e.proj);
    }
    case SExpr::Kind::Op:
      s = pp(*e.kids[0], true) + " " + op_str(e.op) + " " +
          pp(*e.kids[1], true);
      break;
    case SExpr::Kind::If:
      s = "if " + pp(*e.kids[0], false) + " then " + pp(*e.kids[1], false) +
          " else " + pp(*e.kids[2], false);
      break;
    case SExpr::Kind::Let:
      if (e.params.size() == 1) {
        s = "let " + e.params[0];
      } else {
        s = "let (";
        for (size_t i = 0; i < e.params.size(); ++i) {
          if (i) s += ", ";
          s += e.params[i];
        }
        s += ")";
      }
      s += " = " + pp(*e.kids[0], false) + " in " + pp(*e.kids[1], false);
      break;
    case SExpr::Kind::Random:
      return "random (" + e.name + "(" + pp_list(e, ", ") + "))";
    case SExpr::Kind::Observe:
      return "observe (" + pp(*e.kids[0], false) + ")";
    case SExpr::Kind::FunDef: {
      s = "fun " + e.name;
      for (const auto& p : e.params) s += " " + p;
      s += " = " + pp(*e.kids[0], false) + " in " + pp(*e.kids[1], false);
      break;
    }
    case SExpr::Kind::Apply: {
      s = e.name;
      for (const auto& k : e.kids) s += " " + pp(*k, true);
      break;
    }
    case SExpr::Kind::Seq:
      s = pp(*e.kids[0], true) + "; " + pp(*e.kids[1], false);
      break;
    case SExpr::Kind::ArrayLit:
      return "[" + pp_list(e, "; ") + "]";
    case SExpr::Kind::Index:
      return pp(*e.kids[0], true) + ".[" + pp(*e.kids[1], false) + "]";
    case SExpr::Kind::For:
      return "[for " + e.name + " in " + pp(*e.kids[0], false) + " -> " +
             pp(*e.kids[1], false) + "]";
  }
  return parens ? "(" + s + ")" : s;
}

std::string print_surface(const SExpr& e) { return pp(e, false); }

}  // namespace funstack
