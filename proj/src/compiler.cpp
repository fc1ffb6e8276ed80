#include "funstack/compiler.hpp"

#include <algorithm>
#include <set>

#include "funstack/errors.hpp"
#include "funstack/fun_sem.hpp"
#include "funstack/typesys.hpp"

namespace funstack {

std::string Pattern::str() const {
  switch (kind) {
    case Kind::Unit:
      return "()";
    case Kind::Loc:
      return range.empty() ? loc : loc + "[" + range + "]";
    case Kind::Pair:
      return "(" + a->str() + ", " + b->str() + ")";
  }
  return "";
}

void pattern_locs(const Pattern& p, std::vector<std::string>& out) {
  switch (p.kind) {
    case Pattern::Kind::Unit:
      return;
    case Pattern::Kind::Loc:
      out.push_back(p.loc);
      return;
    case Pattern::Kind::Pair:
      pattern_locs(*p.a, out);
      pattern_locs(*p.b, out);
      return;
  }
}

bool pattern_compat(const Pattern& p, const Pattern& q) {
  if (p.kind != q.kind) return false;
  if (p.kind == Pattern::Kind::Pair)
    return pattern_compat(*p.a, *q.a) && pattern_compat(*p.b, *q.b);
  return true;
}

namespace {

// l or l[r] as a statement-level location string.
std::string leaf_str(const Pattern& p) {
  return p.range.empty() ? p.loc : p.loc + "[" + p.range + "]";
}

}  // namespace

ImpStmtPtr pattern_assign(const Pattern& p, const Pattern& q) {
  if (!pattern_compat(p, q))
    throw ShapeError("pattern shapes disagree: " + p.str() + " <- " + q.str());
  switch (p.kind) {
    case Pattern::Kind::Unit:
      return imp_nil();
    case Pattern::Kind::Loc:
      return imp_assign(leaf_str(p), ImpExpr::loc(leaf_str(q)));
    case Pattern::Kind::Pair:
      return imp_seq(pattern_assign(*p.a, *q.a), pattern_assign(*p.b, *q.b));
  }
  throw InternalError("unreachable pattern kind");
}

Type pattern_type(const Pattern& p, const ImpEnv& sigma) {
  switch (p.kind) {
    case Pattern::Kind::Unit:
      return Type::unit();
    case Pattern::Kind::Loc: {
      for (const auto& [name, t] : sigma)
        if (name == p.loc)
          return p.range.empty() ? t : t.elem();
      throw ImpTypeError("pattern location " + p.loc + " not in environment");
    }
    case Pattern::Kind::Pair:
      return Type::pair(pattern_type(*p.a, sigma), pattern_type(*p.b, sigma));
  }
  throw InternalError("unreachable pattern kind");
}

Value pattern_value(const Pattern& p, const std::vector<std::string>& sigma,
                    const Value& s) {
  switch (p.kind) {
    case Pattern::Kind::Unit:
      return Value::unit();
    case Pattern::Kind::Loc:
      return state_lookup(sigma, s, p.loc);
    case Pattern::Kind::Pair:
      return Value::pair(pattern_value(*p.a, sigma, s),
                         pattern_value(*p.b, sigma, s));
  }
  throw InternalError("unreachable pattern kind");
}

namespace {

void flatten(const Pattern& p, const Value& v,
             std::map<std::string, Value>& out) {
  switch (p.kind) {
    case Pattern::Kind::Unit:
      return;
    case Pattern::Kind::Loc:
      out[p.loc] = v;
      return;
    case Pattern::Kind::Pair:
      flatten(*p.a, v.first(), out);
      flatten(*p.b, v.second(), out);
      return;
  }
}

}  // namespace

Value lift_state(const Layout& rho, const std::vector<std::string>& gamma,
                 const std::vector<std::string>& sigma, const Value& s) {
  std::map<std::string, Value> bind;
  for (const auto& x : gamma) {
    auto it = rho.find(x);
    if (it == rho.end())
      throw InternalError("layout misses variable " + x);
    flatten(it->second, state_lookup(gamma, s, x), bind);
  }
  std::vector<Value> vals;
  vals.reserve(sigma.size());
  for (const auto& l : sigma) {
    auto it = bind.find(l);
    if (it == bind.end())
      throw InternalError("layout misses location " + l);
    vals.push_back(it->second);
  }
  return encode_state(vals);
}

Value restrict_state(const Layout& rho, const std::vector<std::string>& sigma,
                     const std::vector<std::string>& gamma, const Value& s) {
  std::vector<Value> vals;
  vals.reserve(gamma.size());
  for (const auto& x : gamma) {
    auto it = rho.find(x);
    if (it == rho.end())
      throw InternalError("layout misses variable " + x);
    vals.push_back(pattern_value(it->second, sigma, s));
  }
  return encode_state(vals);
}

namespace {

bool contains_array_node(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::ArrayLit:
    case Expr::Kind::Index:
    case Expr::Kind::For:
      return true;
    default:
      for (const auto& k : e.kids)
        if (contains_array_node(*k)) return true;
      return false;
  }
}

bool contains_for_stmt(const ImpStmt& c) {
  if (c.kind == ImpStmt::Kind::For) return true;
  for (const auto& k : c.kids)
    if (contains_for_stmt(*k)) return true;
  return false;
}

ImpStmtPtr seq(ImpStmtPtr a, ImpStmtPtr b) {
  if (a->kind == ImpStmt::Kind::Nil) return b;
  if (b->kind == ImpStmt::Kind::Nil) return a;
  return imp_seq(std::move(a), std::move(b));
}

class Translator {
 public:
  Translator(const Layout& rho, const ImpEnv& sigma) {
    for (const auto& [x, p] : rho) {
      std::vector<std::string> ls;
      pattern_locs(p, ls);
      layout_locs_.insert(ls.begin(), ls.end());
    }
    for (const auto& [l, t] : sigma) loc_type_[l] = t;
  }

  std::pair<ImpStmtPtr, Pattern> go(const Layout& rho, const ExprPtr& e) {
    if (!e->typed)
      throw InternalError("translation requires a typed expression");
    switch (e->kind) {
      case Expr::Kind::Var: {
        auto it = rho.find(e->name);
        if (it == rho.end())
          throw InternalError("layout misses variable " + e->name);
        return {imp_nil(), it->second};
      }
      case Expr::Kind::Const: {
        if (e->lit.is_unit()) return {imp_nil(), Pattern::unit()};
        std::string l = fresh(e->type);
        return {imp_assign(l, ImpExpr::constant(e->lit)),
                Pattern::location(l)};
      }
      case Expr::Kind::Pair: {
        auto [c1, p1] = go(rho, e->kids[0]);
        auto [c2, p2] = go(rho, e->kids[1]);
        return {seq(std::move(c1), std::move(c2)),
                Pattern::pair(std::move(p1), std::move(p2))};
      }
      case Expr::Kind::Op: {
        auto [c1, p1] = go(rho, e->kids[0]);
        auto [c2, p2] = go(rho, e->kids[1]);
        std::string l = fresh(e->type);
        auto assign = imp_assign(
            l, ImpExpr::binop(e->op, leaf_str(p1), leaf_str(p2)));
        return {seq(seq(std::move(c1), std::move(c2)), std::move(assign)),
                Pattern::location(l)};
      }
      case Expr::Kind::Proj: {
        auto [c, p] = go(rho, e->kids[0]);
        if (p.kind != Pattern::Kind::Pair)
          throw InternalError("projection from a non-pair pattern");
        return {std::move(c), e->proj == 1 ? *p.a : *p.b};
      }
      case Expr::Kind::If: {
        auto [c1, pc] = go(rho, e->kids[0]);
        // Shared target allocated before the branches so its locations are
        // fresh for both.
        Pattern target = fresh_pattern(e->type);
        auto branch = [&](const ExprPtr& m) {
          auto [c, p] = go(rho, m);
          std::vector<std::string> ls;
          imp_locations(*c, ls);
          auto body = seq(std::move(c), pattern_assign(target, p));
          return wrap_locals(ls, std::move(body));
        };
        auto c2 = branch(e->kids[1]);
        auto c3 = branch(e->kids[2]);
        return {seq(std::move(c1),
                    imp_if(leaf_str(pc), std::move(c2), std::move(c3))),
                target};
      }
      case Expr::Kind::Observe: {
        auto [c, p] = go(rho, e->kids[0]);
        if (p.kind != Pattern::Kind::Loc)
          throw InternalError("observation of a non-base pattern");
        return {seq(std::move(c), imp_observe(leaf_str(p), e->observed_type)),
                Pattern::unit()};
      }
      case Expr::Kind::Random: {
        ImpStmtPtr c = imp_nil();
        std::vector<std::string> args;
        for (const auto& k : e->kids) {
          auto [ck, pk] = go(rho, k);
          c = seq(std::move(c), std::move(ck));
          std::vector<std::string> flat;
          flatten_args(pk, flat);
          args.insert(args.end(), flat.begin(), flat.end());
        }
        std::string l = fresh(e->type);
        return {seq(std::move(c), imp_random(l, e->name, std::move(args))),
                Pattern::location(l)};
      }
      case Expr::Kind::Let: {
        auto [c1, p1] = go(rho, e->kids[0]);
        Layout rho2 = rho;
        rho2[e->name] = p1;
        auto [c2, p2] = go(rho2, e->kids[1]);
        std::vector<std::string> ls;
        imp_locations(*c1, ls);
        std::set<std::string> keep;
        std::vector<std::string> fv;
        pattern_locs(p1, fv);
        keep.insert(fv.begin(), fv.end());
        std::vector<std::string> hidden;
        for (const auto& l : ls)
          if (!keep.count(l)) hidden.push_back(l);
        return {seq(wrap_locals(hidden, std::move(c1)), std::move(c2)),
                std::move(p2)};
      }
      case Expr::Kind::For:
        return trans_for(rho, e);
      default:
        throw InternalError("unroll arrays before translation");
    }
  }

 private:
  std::string fresh(const Type& t) {
    std::string l = "l" + std::to_string(next_++);
    if (layout_locs_.count(l) || loc_type_.count(l))
      throw FreshnessError("fresh location " + l + " already in use");
    loc_type_[l] = t;
    return l;
  }

  Pattern fresh_pattern(const Type& t) {
    switch (t.kind()) {
      case Type::Kind::Unit:
        return Pattern::unit();
      case Type::Kind::Pair: {
        auto a = fresh_pattern(t.first());
        auto b = fresh_pattern(t.second());
        return Pattern::pair(std::move(a), std::move(b));
      }
      case Type::Kind::Array:
        throw InternalError("array type in a core pattern");
      default:
        return Pattern::location(fresh(t));
    }
  }

  static void flatten_args(const Pattern& p, std::vector<std::string>& out) {
    switch (p.kind) {
      case Pattern::Kind::Unit:
        return;
      case Pattern::Kind::Loc:
        out.push_back(leaf_str(p));
        return;
      case Pattern::Kind::Pair:
        flatten_args(*p.a, out);
        flatten_args(*p.b, out);
        return;
    }
  }

  ImpStmtPtr wrap_locals(const std::vector<std::string>& ls, ImpStmtPtr body) {
    std::set<std::string> seen;
    for (auto it = ls.rbegin(); it != ls.rend(); ++it) {
      std::string base = *it;
      if (!seen.insert(base).second) continue;
      auto br = base.find('[');
      if (br != std::string::npos) continue;  // indexed targets stay global
      auto ty = loc_type_.find(base);
      if (ty == loc_type_.end())
        throw InternalError("untyped location " + base);
      body = imp_local(base, ty->second, std::move(body));
    }
    return body;
  }

  static Pattern index_pattern(const Pattern& p, const std::string& r) {
    switch (p.kind) {
      case Pattern::Kind::Unit:
        return Pattern::unit();
      case Pattern::Kind::Loc: {
        if (!p.range.empty())
          throw NestedIterationError("range-indexed location indexed again");
        return Pattern::location(p.loc, r);
      }
      case Pattern::Kind::Pair:
        return Pattern::pair(index_pattern(*p.a, r), index_pattern(*p.b, r));
    }
    throw InternalError("unreachable pattern kind");
  }

  std::pair<ImpStmtPtr, Pattern> trans_for(const Layout& rho,
                                           const ExprPtr& e) {
    const ExprPtr& src = e->kids[0];
    const ExprPtr& body = e->kids[1];
    if (contains_array_node(*body))
      throw NestedIterationError("nested iteration in a comprehension body");
    if (src->kind != Expr::Kind::Var || !src->type.is_array())
      throw InternalError("comprehension source must be an array variable");
    auto it = rho.find(src->name);
    if (it == rho.end())
      throw InternalError("layout misses variable " + src->name);
    int n = src->type.size();
    std::string r = "r" + std::to_string(n);

    Layout rho2 = rho;
    rho2[e->name] = index_pattern(it->second, r);
    auto [c, p] = go(rho2, body);

    Pattern target = fresh_array_pattern(body->type, n);
    std::vector<std::string> ls;
    imp_locations(*c, ls);
    auto inner = seq(std::move(c), pattern_assign(index_pattern(target, r), p));
    auto wrapped = wrap_locals(ls, std::move(inner));

    auto loop = std::make_shared<ImpStmt>();
    loop->kind = ImpStmt::Kind::For;
    loop->range = r;
    loop->range_size = n;
    loop->kids = {std::move(wrapped)};
    return {std::move(loop), std::move(target)};
  }

  Pattern fresh_array_pattern(const Type& t, int n) {
    switch (t.kind()) {
      case Type::Kind::Unit:
        return Pattern::unit();
      case Type::Kind::Pair: {
        auto a = fresh_array_pattern(t.first(), n);
        auto b = fresh_array_pattern(t.second(), n);
        return Pattern::pair(std::move(a), std::move(b));
      }
      case Type::Kind::Array:
        throw NestedIterationError("array element inside a comprehension");
      default:
        return Pattern::location(fresh(Type::array(t, n)));
    }
  }

  int next_ = 0;
  std::set<std::string> layout_locs_;
  std::map<std::string, Type> loc_type_;
};

}  // namespace

TranslateResult translate(const Layout& rho, const ImpEnv& sigma,
                          const ExprPtr& m) {
  Translator tr(rho, sigma);
  auto [c, p] = tr.go(rho, m);
  TranslateResult res{std::move(c), std::move(p), {}};
  if (!contains_for_stmt(*res.stmt)) {
    res.sigma_prime = typecheck_imp(res.stmt, sigma);
    ImpEnv full = sigma;
    full.insert(full.end(), res.sigma_prime.begin(), res.sigma_prime.end());
    if (pattern_type(res.pattern, full) != m->type)
      throw InternalError("translated pattern type disagrees with the source");
  }
  return res;
}

TranslateResult translate_for(const Layout& rho, const ImpEnv& sigma,
                              const ExprPtr& comprehension) {
  if (comprehension->kind != Expr::Kind::For)
    throw InternalError("translate_for expects a comprehension");
  return translate(rho, sigma, comprehension);
}

namespace {

void local_binders(const ImpStmt& c, std::set<std::string>& out) {
  if (c.kind == ImpStmt::Kind::Local) out.insert(c.loc);
  for (const auto& k : c.kids) local_binders(*k, out);
}

std::string rename_loc(const std::string& s, const std::string& range, int i,
                       const std::set<std::string>& locals) {
  std::string suffix = "[" + range + "]";
  if (s.size() > suffix.size() &&
      s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0)
    return s.substr(0, s.size() - suffix.size()) + "@" + std::to_string(i);
  if (locals.count(s)) return s + "#" + std::to_string(i);
  return s;
}

ImpStmtPtr instantiate(const ImpStmt& c, const std::string& range, int i,
                       const std::set<std::string>& locals) {
  auto out = std::make_shared<ImpStmt>(c);
  out->loc = rename_loc(c.loc, range, i, locals);
  out->expr.l1 = rename_loc(c.expr.l1, range, i, locals);
  out->expr.l2 = rename_loc(c.expr.l2, range, i, locals);
  for (auto& a : out->args) a = rename_loc(a, range, i, locals);
  out->kids.clear();
  for (const auto& k : c.kids)
    out->kids.push_back(instantiate(*k, range, i, locals));
  return out;
}

}  // namespace

ImpStmtPtr unroll_imp(const ImpStmtPtr& c) {
  if (c->kind == ImpStmt::Kind::For) {
    std::set<std::string> locals;
    local_binders(*c->kids[0], locals);
    ImpStmtPtr out = imp_nil();
    for (int i = 0; i < c->range_size; ++i)
      out = seq(out, instantiate(*c->kids[0], c->range, i, locals));
    return out;
  }
  auto out = std::make_shared<ImpStmt>(*c);
  out->kids.clear();
  for (const auto& k : c->kids) out->kids.push_back(unroll_imp(k));
  if (out->kind == ImpStmt::Kind::Seq) {
    if (out->kids[0]->kind == ImpStmt::Kind::Nil) return out->kids[1];
    if (out->kids[1]->kind == ImpStmt::Kind::Nil) return out->kids[0];
  }
  return out;
}

bool imp_only_const_assigns(const ImpStmt& c) {
  switch (c.kind) {
    case ImpStmt::Kind::Nil:
      return true;
    case ImpStmt::Kind::Assign:
      return c.expr.kind == ImpExpr::Kind::Const;
    case ImpStmt::Kind::Seq:
      return imp_only_const_assigns(*c.kids[0]) &&
             imp_only_const_assigns(*c.kids[1]);
    default:
      return false;
  }
}

}  // namespace funstack
