#include "funstack/ast.hpp"

#include <algorithm>

namespace funstack {

std::string op_str(OpCode op) {
  switch (op) {
    case OpCode::And: return "&&";
    case OpCode::Or: return "||";
    case OpCode::Eq: return "=";
    case OpCode::Gt: return ">";
    case OpCode::Add: return "+";
    case OpCode::Sub: return "-";
    case OpCode::Mul: return "*";
    case OpCode::Mod: return "%";
  }
  return "?";
}

static ExprPtr node(Expr::Kind k, Span sp) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->span = sp;
  return e;
}

ExprPtr mk_var(const std::string& n, Span sp) {
  auto e = node(Expr::Kind::Var, sp);
  e->name = n;
  return e;
}
ExprPtr mk_const(Value v, Span sp) {
  auto e = node(Expr::Kind::Const, sp);
  e->lit = std::move(v);
  return e;
}
ExprPtr mk_pair(ExprPtr a, ExprPtr b, Span sp) {
  auto e = node(Expr::Kind::Pair, sp);
  e->kids = {std::move(a), std::move(b)};
  return e;
}
ExprPtr mk_op(OpCode op, ExprPtr a, ExprPtr b, Span sp) {
  auto e = node(Expr::Kind::Op, sp);
  e->op = op;
  e->kids = {std::move(a), std::move(b)};
  return e;
}
ExprPtr mk_proj(int which, ExprPtr a, Span sp) {
  auto e = node(Expr::Kind::Proj, sp);
  e->proj = which;
  e->kids = {std::move(a)};
  return e;
}
ExprPtr mk_if(ExprPtr c, ExprPtr t, ExprPtr f, Span sp) {
  auto e = node(Expr::Kind::If, sp);
  e->kids = {std::move(c), std::move(t), std::move(f)};
  return e;
}
ExprPtr mk_let(const std::string& x, ExprPtr bound, ExprPtr body, Span sp) {
  auto e = node(Expr::Kind::Let, sp);
  e->name = x;
  e->kids = {std::move(bound), std::move(body)};
  return e;
}
ExprPtr mk_random(const std::string& dist, std::vector<ExprPtr> params,
                  Span sp) {
  auto e = node(Expr::Kind::Random, sp);
  e->name = dist;
  e->kids = std::move(params);
  return e;
}
ExprPtr mk_observe(ExprPtr v, Span sp) {
  auto e = node(Expr::Kind::Observe, sp);
  e->kids = {std::move(v)};
  return e;
}

bool is_value(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Var:
    case Expr::Kind::Const:
      return true;
    case Expr::Kind::Pair:
      return is_value(*e.kids[0]) && is_value(*e.kids[1]);
    default:
      return false;
  }
}

bool is_anf(const Expr& e) {
  auto val = [](const ExprPtr& k) { return is_value(*k) && is_anf(*k); };
  switch (e.kind) {
    case Expr::Kind::Var:
    case Expr::Kind::Const:
      return true;
    case Expr::Kind::Pair:
      return val(e.kids[0]) && val(e.kids[1]);
    case Expr::Kind::Op:
      return val(e.kids[0]) && val(e.kids[1]);
    case Expr::Kind::Proj:
      return val(e.kids[0]);
    case Expr::Kind::If:
      return val(e.kids[0]) && is_anf(*e.kids[1]) && is_anf(*e.kids[2]);
    case Expr::Kind::Let:
      return is_anf(*e.kids[0]) && is_anf(*e.kids[1]);
    case Expr::Kind::Random:
      return std::all_of(e.kids.begin(), e.kids.end(), val);
    case Expr::Kind::Observe:
      return val(e.kids[0]);
    case Expr::Kind::ArrayLit:
      return std::all_of(e.kids.begin(), e.kids.end(), val);
    case Expr::Kind::Index:
      return val(e.kids[0]) && val(e.kids[1]);
    case Expr::Kind::For:
      return is_value(*e.kids[0]) && is_anf(*e.kids[1]);
  }
  return false;
}

void free_vars(const Expr& e, std::set<std::string>& out) {
  switch (e.kind) {
    case Expr::Kind::Var:
      out.insert(e.name);
      return;
    case Expr::Kind::Let: {
      free_vars(*e.kids[0], out);
      std::set<std::string> body;
      free_vars(*e.kids[1], body);
      body.erase(e.name);
      out.insert(body.begin(), body.end());
      return;
    }
    case Expr::Kind::For: {
      free_vars(*e.kids[0], out);
      std::set<std::string> body;
      free_vars(*e.kids[1], body);
      body.erase(e.name);
      out.insert(body.begin(), body.end());
      return;
    }
    default:
      for (const auto& k : e.kids) free_vars(*k, out);
  }
}

std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> out;
  free_vars(e, out);
  return out;
}

void bound_vars(const Expr& e, std::vector<std::string>& out) {
  if (e.kind == Expr::Kind::Let || e.kind == Expr::Kind::For)
    out.push_back(e.name);
  for (const auto& k : e.kids) bound_vars(*k, out);
}

ExprPtr subst(const ExprPtr& e, const std::string& x, const ExprPtr& v) {
  switch (e->kind) {
    case Expr::Kind::Var:
      return e->name == x ? v : e;
    case Expr::Kind::Const:
      return e;
    case Expr::Kind::Let:
      if (e->name == x) {
        auto c = std::make_shared<Expr>(*e);
        c->kids[0] = subst(e->kids[0], x, v);
        return c;
      }
      break;
    case Expr::Kind::For:
      if (e->name == x) {
        auto c = std::make_shared<Expr>(*e);
        c->kids[0] = subst(e->kids[0], x, v);
        return c;
      }
      break;
    default:
      break;
  }
  bool changed = false;
  std::vector<ExprPtr> kids;
  kids.reserve(e->kids.size());
  for (const auto& k : e->kids) {
    auto nk = subst(k, x, v);
    changed |= nk != k;
    kids.push_back(std::move(nk));
  }
  if (!changed) return e;
  auto c = std::make_shared<Expr>(*e);
  c->kids = std::move(kids);
  return c;
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.name != b.name || a.proj != b.proj ||
      a.kids.size() != b.kids.size())
    return false;
  if (a.kind == Expr::Kind::Const && a.lit != b.lit) return false;
  if (a.kind == Expr::Kind::Op && a.op != b.op) return false;
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!expr_equal(*a.kids[i], *b.kids[i])) return false;
  return true;
}

std::string expr_str(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Var:
      return e.name;
    case Expr::Kind::Const:
      return e.lit.str();
    case Expr::Kind::Pair:
      return "(" + expr_str(*e.kids[0]) + ", " + expr_str(*e.kids[1]) + ")";
    case Expr::Kind::Op:
      return "(" + expr_str(*e.kids[0]) + " " + op_str(e.op) + " " +
             expr_str(*e.kids[1]) + ")";
    case Expr::Kind::Proj:
      return expr_str(*e.kids[0]) + "." + std::to_string(e.proj);
    case Expr::Kind::If:
      return "if " + expr_str(*e.kids[0]) + " then " + expr_str(*e.kids[1]) +
             " else " + expr_str(*e.kids[2]);
    case Expr::Kind::Let:
      return "let " + e.name + " = " + expr_str(*e.kids[0]) + " in " +
             expr_str(*e.kids[1]);
    case Expr::Kind::Random: {
      std::string s = "random (" + e.name + "(";
      for (size_t i = 0; i < e.kids.size(); ++i) {
        if (i) s += ", ";
        s += expr_str(*e.kids[i]);
      }
      return s + "))";
    }
    case Expr::Kind::Observe:
      return "observe (" + expr_str(*e.kids[0]) + ")";
    case Expr::Kind::ArrayLit: {
      std::string s = "[";
      for (size_t i = 0; i < e.kids.size(); ++i) {
        if (i) s += "; ";
        s += expr_str(*e.kids[i]);
      }
      return s + "]";
    }
    case Expr::Kind::Index:
      return expr_str(*e.kids[0]) + ".[" + expr_str(*e.kids[1]) + "]";
    case Expr::Kind::For:
      return "[for " + e.name + " in " + expr_str(*e.kids[0]) + " -> " +
             expr_str(*e.kids[1]) + "]";
  }
  return "?";
}

}  // namespace funstack
