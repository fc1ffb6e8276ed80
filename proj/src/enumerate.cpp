#include "funstack/enumerate.hpp"

#include <deque>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "funstack/errors.hpp"
#include "funstack/eval.hpp"
#include "funstack/threads.hpp"
#include "funstack/typesys.hpp"

namespace funstack {

namespace {

Value eval_closed(const Expr& v) {
  return eval_value_expr(v, [](const std::string& n) -> Value {
    throw StuckError("free variable '" + n + "' in closed evaluation");
  });
}

std::vector<Step> branch_random(const Expr& e) {
  std::vector<Value> params;
  params.reserve(e.kids.size());
  for (const auto& k : e.kids) {
    if (k->kind != Expr::Kind::Const)
      throw StuckError("random with unevaluated parameter");
    params.push_back(k->lit);
  }
  const DistSig* sig = dist_sig(e.name);
  if (!sig || !sig->discrete)
    throw UnsupportedDistError(
        "enumeration requires discrete distributions, got " + e.name, e.span);
  FiniteMeasure m = dist_measure(e.name, params);
  std::vector<Step> out;
  out.reserve(m.size());
  for (const auto& [v, w] : m.entries())
    out.push_back({w, mk_const(v, e.span)});
  return out;
}

}  // namespace

std::vector<Step> reduce(const ExprPtr& e) {
  if (is_value(*e)) return {};
  switch (e->kind) {
    case Expr::Kind::Let: {
      if (is_value(*e->kids[0]))
        return {{1.0, subst(e->kids[1], e->name, e->kids[0])}};
      auto inner = reduce(e->kids[0]);
      for (auto& s : inner) {
        auto c = std::make_shared<Expr>(*e);
        c->kids[0] = s.next;
        s.next = std::move(c);
      }
      return inner;
    }
    case Expr::Kind::Op:
      return {{1.0, mk_const(apply_op(e->op, eval_closed(*e->kids[0]),
                                      eval_closed(*e->kids[1])),
                             e->span)}};
    case Expr::Kind::Proj: {
      Value v = eval_closed(*e->kids[0]);
      if (!v.is_pair()) throw StuckError("projection of non-pair");
      return {{1.0, mk_const(e->proj == 1 ? v.first() : v.second(), e->span)}};
    }
    case Expr::Kind::If: {
      Value c = eval_closed(*e->kids[0]);
      return {{1.0, c.as_bool() ? e->kids[1] : e->kids[2]}};
    }
    case Expr::Kind::Random:
      return branch_random(*e);
    case Expr::Kind::Observe: {
      Value v = eval_closed(*e->kids[0]);
      Value zero = zero_element(e->observed_type.is_base()
                                    ? e->observed_type
                                    : Type::boolean());
      Step s{1.0, mk_const(Value::unit(), e->span)};
      s.invalid_observe = v != zero;
      return {s};
    }
    default:
      throw StuckError("no reduction rule applies (Progress violated)");
  }
}

namespace {

struct Node {
  ExprPtr expr;
  double prob;
  bool valid;
  int steps;
  int choices;
};

struct Acc {
  FiniteMeasure valid_mass;
  double invalid_mass = 0.0;
  long long runs = 0;
  std::vector<Run> trace;
};

void dfs(Node n, const EnumOptions& opts, const Type& prog_type, Acc& acc) {
  for (;;) {
    auto steps = reduce(n.expr);
    if (steps.empty()) {
      Value v = eval_closed(*n.expr);
      ++acc.runs;
      if (n.valid)
        acc.valid_mass.add_weight(v, n.prob);
      else
        acc.invalid_mass += n.prob;
      if (opts.trace) acc.trace.push_back({v, n.prob, n.valid, n.steps});
      return;
    }
    if (steps.size() > 1) {
      ++n.choices;
      if (n.choices > opts.max_choices)
        throw BudgetError("random-choice budget of " +
                          std::to_string(opts.max_choices) + " exceeded");
    }
    if (opts.check_types) {
      for (const auto& s : steps) {
        auto t = typecheck(s.next, {});
        if (t != prog_type)
          throw InternalError("Preservation violated: " + t.str() + " vs " +
                              prog_type.str());
      }
    }
    ++n.steps;
    // Continue in place on the first successor, recurse on the rest.
    for (size_t i = 1; i < steps.size(); ++i) {
      Node m = n;
      m.expr = steps[i].next;
      m.prob = n.prob * steps[i].p;
      m.valid = n.valid && !steps[i].invalid_observe;
      dfs(std::move(m), opts, prog_type, acc);
    }
    n.expr = steps[0].next;
    n.prob *= steps[0].p;
    n.valid = n.valid && !steps[0].invalid_observe;
  }
}

void merge(Acc& into, Acc& from) {
  for (const auto& [v, w] : from.valid_mass.entries())
    into.valid_mass.add_weight(v, w);
  into.invalid_mass += from.invalid_mass;
  into.runs += from.runs;
  into.trace.insert(into.trace.end(), from.trace.begin(), from.trace.end());
}

}  // namespace

EnumResult enumerate_runs(const ExprPtr& e, const EnumOptions& opts) {
  Type prog_type = typecheck(e, {});
  Node root{e, 1.0, true, 0, 0};

  int workers = worker_count();
  std::deque<Node> frontier{root};
  Acc base;
  {
    // Expand breadth-first until there is enough independent work. The
    // frontier size is fixed (not worker-dependent) so merge order, and
    // hence every floating-point sum, is identical for any schedule.
    const size_t want = 64;
    while (!frontier.empty() && frontier.size() < want) {
      Node n = frontier.front();
      frontier.pop_front();
      auto steps = reduce(n.expr);
      if (steps.empty()) {
        Value v = eval_closed(*n.expr);
        ++base.runs;
        if (n.valid)
          base.valid_mass.add_weight(v, n.prob);
        else
          base.invalid_mass += n.prob;
        if (opts.trace) base.trace.push_back({v, n.prob, n.valid, n.steps});
        continue;
      }
      if (steps.size() > 1 && ++n.choices > opts.max_choices)
        throw BudgetError("random-choice budget of " +
                          std::to_string(opts.max_choices) + " exceeded");
      ++n.steps;
      for (const auto& s : steps) {
        Node m = n;
        m.expr = s.next;
        m.prob = n.prob * s.p;
        m.valid = n.valid && !s.invalid_observe;
        frontier.push_back(std::move(m));
      }
    }
  }

  std::vector<Node> work(frontier.begin(), frontier.end());
  std::vector<Acc> accs(work.size());
  std::exception_ptr err;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers) \
    if (opts.parallel && workers > 1)
#endif
  for (long i = 0; i < static_cast<long>(work.size()); ++i) {
    try {
      dfs(work[i], opts, prog_type, accs[i]);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);

  // Deterministic merge in frontier order.
  for (auto& a : accs) merge(base, a);
  EnumResult out;
  out.valid_mass = std::move(base.valid_mass);
  out.invalid_mass = base.invalid_mass;
  out.runs = base.runs;
  out.trace = std::move(base.trace);
  return out;
}

std::pair<FiniteMeasure, double> enum_posterior(const ExprPtr& e,
                                                const EnumOptions& opts) {
  EnumResult r = enumerate_runs(e, opts);
  if (r.valid_mass.empty())
    throw ZeroEvidence("no valid runs (Prob[valid] = 0)");
  return normalize(r.valid_mass);
}

}  // namespace funstack
