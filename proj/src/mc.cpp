#include "funstack/mc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "funstack/dists.hpp"
#include "funstack/errors.hpp"
#include "funstack/eval.hpp"
#include "funstack/typesys.hpp"

namespace funstack {

namespace {

// ---- observation classification ----------------------------------------

struct Analysis {
  std::map<std::string, ExprPtr> def;       // binder -> bound expression
  std::map<std::string, ExprPtr> let_node;  // binder -> let node
  // per variable: (pre-order position, use node)
  std::map<std::string, std::vector<std::pair<int, const Expr*>>> uses;
  std::vector<std::pair<ExprPtr, int>> observes;
  int clock = 0;

  void scan(const ExprPtr& e) {
    int pos = clock++;
    switch (e->kind) {
      case Expr::Kind::Var:
        uses[e->name].emplace_back(pos, e.get());
        return;
      case Expr::Kind::Let:
        def[e->name] = e->kids[0];
        let_node[e->name] = e;
        scan(e->kids[0]);
        scan(e->kids[1]);
        return;
      case Expr::Kind::Observe:
        observes.emplace_back(e, pos);
        scan(e->kids[0]);
        return;
      default:
        for (const auto& k : e->kids) scan(k);
        return;
    }
  }

  std::size_t use_count(const std::string& x) const {
    auto it = uses.find(x);
    return it == uses.end() ? 0 : it->second.size();
  }
};

bool is_continuous_draw(const Expr& e) {
  if (e.kind != Expr::Kind::Random) return false;
  const DistSig* sig = dist_sig(e.name);
  return sig && !sig->discrete;
}

struct Chase {
  std::string last;                  // var whose definition is non-copy
  ExprPtr terminal;                  // that definition (null when unbound)
  std::vector<std::string> copies;   // copy vars passed through
  std::set<const Expr*> use_nodes;   // var nodes traversed
};

Chase chase(const ExprPtr& varnode, const Analysis& a) {
  Chase r;
  ExprPtr cur = varnode;
  while (true) {
    r.use_nodes.insert(cur.get());
    r.last = cur->name;
    auto it = a.def.find(cur->name);
    if (it == a.def.end()) return r;
    ExprPtr d = it->second;
    // Normal forms bind temporaries in nested lets; the value is the body's.
    while (d->kind == Expr::Kind::Let) d = d->kids[1];
    if (d->kind == Expr::Kind::Var) {
      r.copies.push_back(cur->name);
      cur = d;
      continue;
    }
    r.terminal = d;
    return r;
  }
}

struct ObsInfo {
  ExprPtr obs;
  int pos = 0;
  std::string pivot;
  ExprPtr offset;  // null for a bare pivot
  bool negated = false;
  std::set<const Expr*> chain_nodes;
};

bool single_use(const std::vector<std::string>& vars, const Analysis& a) {
  for (const auto& v : vars)
    if (a.use_count(v) != 1) return false;
  return true;
}

bool offset_clean(const ExprPtr& offset, const std::string& pivot) {
  if (!offset) return true;
  return free_vars(*offset).count(pivot) == 0;
}

// Classify one real-typed observation; false means unsupported.
bool analyze_obs(const ExprPtr& obs, int pos, const Analysis& a, ObsInfo& out) {
  const ExprPtr& v = obs->kids[0];
  if (v->kind != Expr::Kind::Var) return false;
  Chase c1 = chase(v, a);
  if (!c1.terminal) return false;
  out.obs = obs;
  out.pos = pos;
  out.chain_nodes = c1.use_nodes;
  if (is_continuous_draw(*c1.terminal)) {
    if (!single_use(c1.copies, a)) return false;
    out.pivot = c1.last;
    return true;
  }
  if (c1.terminal->kind == Expr::Kind::Op && c1.terminal->op == OpCode::Sub) {
    // The chain through the subtraction-bound var must be linear.
    std::vector<std::string> mids = c1.copies;
    mids.push_back(c1.last);
    if (!single_use(mids, a)) return false;
    for (int side = 0; side < 2; ++side) {
      const ExprPtr& arm = c1.terminal->kids[side];
      const ExprPtr& other = c1.terminal->kids[1 - side];
      if (arm->kind != Expr::Kind::Var) continue;
      Chase c2 = chase(arm, a);
      if (!c2.terminal || !is_continuous_draw(*c2.terminal)) continue;
      if (!single_use(c2.copies, a)) continue;
      if (!offset_clean(other, c2.last)) continue;
      out.pivot = c2.last;
      out.offset = other;
      out.negated = side == 1;  // E - x
      out.chain_nodes.insert(c2.use_nodes.begin(), c2.use_nodes.end());
      return true;
    }
  }
  return false;
}

// A constant real after chasing copies; nullopt otherwise.
std::optional<double> const_real(const ExprPtr& e, const Analysis& a) {
  if (!e) return 0.0;
  if (e->kind == Expr::Kind::Const && e->lit.is_real())
    return e->lit.as_real();
  if (e->kind != Expr::Kind::Var) return std::nullopt;
  Chase c = chase(e, a);
  if (c.terminal && c.terminal->kind == Expr::Kind::Const &&
      c.terminal->lit.is_real())
    return c.terminal->lit.as_real();
  return std::nullopt;
}

}  // namespace

void observe_rewrite(const ExprPtr& m) {
  if (!m->typed) throw InternalError("observe_rewrite requires a typed AST");
  Analysis a;
  a.scan(m);
  std::map<std::string, std::vector<ObsInfo>> groups;
  for (const auto& [obs, pos] : a.observes) {
    obs->obs_mode = Expr::ObsMode::Discrete;
    if (obs->observed_type.all_discrete()) continue;
    obs->obs_mode = Expr::ObsMode::Unsupported;
    if (!obs->observed_type.is_real()) continue;
    ObsInfo info;
    if (analyze_obs(obs, pos, a, info)) groups[info.pivot].push_back(info);
  }
  for (auto& [pivot, infos] : groups) {
    ExprPtr let = a.let_node.at(pivot);
    std::set<const Expr*> chain;
    int first_obs = infos[0].pos;
    for (const auto& i : infos) {
      chain.insert(i.chain_nodes.begin(), i.chain_nodes.end());
      first_obs = std::min(first_obs, i.pos);
    }
    std::vector<int> outside;
    for (const auto& [pos, node] : a.uses[pivot])
      if (!chain.count(node)) outside.push_back(pos);

    if (outside.empty() && infos.size() == 1) {
      let->pivot_site = true;
      let->obs_mode = Expr::ObsMode::LonePivot;
      ObsInfo& i = infos[0];
      i.obs->obs_mode = Expr::ObsMode::LonePivot;
      i.obs->pivot_var = pivot;
      i.obs->pivot_offset = i.offset;
      i.obs->pivot_negated = i.negated;
      continue;
    }
    // Shared pivot: outside uses strictly before every observation, and one
    // constant observation point.
    bool ok =
        std::all_of(outside.begin(), outside.end(),
                    [&](int p) { return p < first_obs; });
    std::optional<double> target;
    for (const auto& i : infos) {
      auto c = const_real(i.offset, a);
      if (!c || (target && *target != *c)) {
        ok = false;
        break;
      }
      target = *c;
    }
    if (!ok) continue;  // observations stay marked unsupported
    let->pivot_site = true;
    let->obs_mode = Expr::ObsMode::SharedPivot;
    let->pivot_force = *target;
    for (auto& i : infos) {
      i.obs->obs_mode = Expr::ObsMode::SharedPivot;
      i.obs->pivot_var = pivot;
      i.obs->pivot_offset = i.offset;
      i.obs->pivot_negated = i.negated;
      i.obs->pivot_preweighted = true;
    }
  }
}

// ---- weighted runs ------------------------------------------------------

namespace {

struct RunCtx {
  std::map<std::string, Value> env;
  struct Pending {
    std::string dist;
    std::vector<Value> params;
  };
  std::map<std::string, Pending> pending;
  std::set<std::string> unconsumed;
  double weight = 1.0;
  CounterRng* rng = nullptr;
};

Value run(const ExprPtr& e, RunCtx& ctx) {
  switch (e->kind) {
    case Expr::Kind::Var: {
      auto it = ctx.env.find(e->name);
      if (it == ctx.env.end())
        throw InternalError("unbound variable " + e->name);
      return it->second;
    }
    case Expr::Kind::Const:
      return e->lit;
    case Expr::Kind::Pair:
      return Value::pair(run(e->kids[0], ctx), run(e->kids[1], ctx));
    case Expr::Kind::Op:
      return apply_op(e->op, run(e->kids[0], ctx), run(e->kids[1], ctx));
    case Expr::Kind::Proj: {
      Value p = run(e->kids[0], ctx);
      return e->proj == 1 ? p.first() : p.second();
    }
    case Expr::Kind::If:
      return run(e->kids[0], ctx).as_bool() ? run(e->kids[1], ctx)
                                            : run(e->kids[2], ctx);
    case Expr::Kind::Random: {
      std::vector<Value> params;
      params.reserve(e->kids.size());
      for (const auto& k : e->kids) params.push_back(run(k, ctx));
      return dist_sample(e->name, params, *ctx.rng);
    }
    case Expr::Kind::Let: {
      if (e->pivot_site) {
        const ExprPtr& rhs = e->kids[0];
        std::vector<Value> params;
        params.reserve(rhs->kids.size());
        for (const auto& k : rhs->kids) params.push_back(run(k, ctx));
        if (e->obs_mode == Expr::ObsMode::LonePivot) {
          ctx.pending[e->name] = {rhs->name, std::move(params)};
          ctx.env[e->name] = Value::real(std::nan(""));
        } else {
          ctx.weight *= dist_density(rhs->name, params, e->pivot_force);
          ctx.env[e->name] = Value::real(e->pivot_force);
          ctx.unconsumed.insert(e->name);
        }
      } else {
        ctx.env[e->name] = run(e->kids[0], ctx);
      }
      return run(e->kids[1], ctx);
    }
    case Expr::Kind::Observe: {
      switch (e->obs_mode) {
        case Expr::ObsMode::Discrete: {
          Value v = run(e->kids[0], ctx);
          if (v != zero_element(e->observed_type)) ctx.weight = 0.0;
          return Value::unit();
        }
        case Expr::ObsMode::LonePivot: {
          double target =
              e->pivot_offset ? run(e->pivot_offset, ctx).as_real() : 0.0;
          auto it = ctx.pending.find(e->pivot_var);
          if (it == ctx.pending.end())
            throw InternalError("lone pivot " + e->pivot_var + " not pending");
          ctx.weight *=
              dist_density(it->second.dist, it->second.params, target);
          ctx.pending.erase(it);
          return Value::unit();
        }
        case Expr::ObsMode::SharedPivot: {
          Value v = run(e->kids[0], ctx);
          if (v.as_real() != 0.0)
            throw UnsupportedObserveError(
                "forced observation point disagrees at run time", e->span);
          ctx.unconsumed.erase(e->pivot_var);
          return Value::unit();
        }
        case Expr::ObsMode::Unsupported:
          throw UnsupportedObserveError(
              "unsupported observation at continuous type", e->span);
      }
      return Value::unit();
    }
    default:
      throw InternalError("array node in a sampled program (unroll first)");
  }
}

}  // namespace

WeightedSample run_weighted(const ExprPtr& m, CounterRng& rng) {
  RunCtx ctx;
  ctx.rng = &rng;
  Value v = run(m, ctx);
  if (!ctx.unconsumed.empty())
    throw UnsupportedObserveError(
        "a run skipped the forced observation of " + *ctx.unconsumed.begin());
  return {std::move(v), ctx.weight};
}

// ---- chunked inference --------------------------------------------------

namespace {

// Neumaier compensated sum.
class CompSum {
 public:
  void add(double x) {
    double t = s_ + x;
    if (std::abs(s_) >= std::abs(x))
      c_ += (s_ - t) + x;
    else
      c_ += (x - t) + s_;
    s_ = t;
  }
  double get() const { return s_ + c_; }

 private:
  double s_ = 0.0, c_ = 0.0;
};

void leaf_types(const Type& t, std::vector<Type>& out) {
  switch (t.kind()) {
    case Type::Kind::Unit:
      return;
    case Type::Kind::Pair:
      leaf_types(t.first(), out);
      leaf_types(t.second(), out);
      return;
    case Type::Kind::Array:
      throw InternalError("array type in a sampled program");
    default:
      out.push_back(t);
      return;
  }
}

void leaf_values(const Value& v, std::vector<Value>& out) {
  switch (v.kind()) {
    case Value::Kind::Unit:
      return;
    case Value::Kind::Pair:
      leaf_values(v.first(), out);
      leaf_values(v.second(), out);
      return;
    default:
      out.push_back(v);
      return;
  }
}

struct ChunkAcc {
  CompSum w, w2;
  // discrete components: value -> (sum w, sum w^2)
  std::vector<std::map<Value, std::pair<double, double>>> disc;
  // real components: w*x, w*x^2, w^2*x, w^2*x^2, w^2*x^3, w^2*x^4
  std::vector<std::array<CompSum, 6>> moments;
};

}  // namespace

McResult infer_mc(const ExprPtr& m, const McOptions& opts) {
  if (opts.samples < 1) throw ParamError("sample count must be positive");
  if (!m->typed) typecheck(m, {});
  observe_rewrite(m);

  std::vector<Type> leaves;
  leaf_types(m->type, leaves);
  const long long n = opts.samples;
  const long long chunk = std::max<long long>(1, opts.chunk);
  const long long nchunks = (n + chunk - 1) / chunk;

  std::vector<ChunkAcc> accs(nchunks);
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic) if (opts.parallel)
  for (long long ci = 0; ci < nchunks; ++ci) {
    try {
      ChunkAcc& acc = accs[ci];
      acc.disc.resize(leaves.size());
      acc.moments.resize(leaves.size());
      CounterRng rng(opts.seed, static_cast<std::uint64_t>(ci));
      long long lo = ci * chunk, hi = std::min(n, lo + chunk);
      for (long long j = lo; j < hi; ++j) {
        auto [v, w] = run_weighted(m, rng);
        acc.w.add(w);
        acc.w2.add(w * w);
        if (w == 0.0) continue;
        std::vector<Value> vals;
        leaf_values(v, vals);
        for (std::size_t k = 0; k < leaves.size(); ++k) {
          if (leaves[k].is_real()) {
            double x = vals[k].as_real();
            auto& mm = acc.moments[k];
            mm[0].add(w * x);
            mm[1].add(w * x * x);
            mm[2].add(w * w * x);
            mm[3].add(w * w * x * x);
            mm[4].add(w * w * x * x * x);
            mm[5].add(w * w * x * x * x * x);
          } else {
            auto& slot = acc.disc[k][vals[k]];
            slot.first += w;
            slot.second += w * w;
          }
        }
      }
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);

  // Deterministic merge in chunk order.
  CompSum W, W2;
  std::vector<std::map<Value, std::pair<CompSum, CompSum>>> disc(leaves.size());
  std::vector<std::array<CompSum, 6>> mom(leaves.size());
  for (const auto& acc : accs) {
    W.add(acc.w.get());
    W2.add(acc.w2.get());
    for (std::size_t k = 0; k < leaves.size(); ++k) {
      if (k < acc.disc.size())
        for (const auto& [v, sw] : acc.disc[k]) {
          disc[k][v].first.add(sw.first);
          disc[k][v].second.add(sw.second);
        }
      if (k < acc.moments.size())
        for (int j = 0; j < 6; ++j) mom[k][j].add(acc.moments[k][j].get());
    }
  }

  double sw = W.get(), sw2 = W2.get();
  if (sw <= 0.0) throw ZeroEvidence("all samples have zero weight");

  McResult res;
  res.samples = n;
  res.seed = opts.seed;
  double nn = static_cast<double>(n);
  res.evidence = sw / nn;
  res.evidence_se =
      std::sqrt(std::max(0.0, sw2 / nn - res.evidence * res.evidence) / nn);
  res.ess = sw * sw / sw2;

  for (std::size_t k = 0; k < leaves.size(); ++k) {
    McComponent comp;
    comp.type = leaves[k];
    if (leaves[k].is_real()) {
      comp.discrete = false;
      double m1 = mom[k][0].get(), m2 = mom[k][1].get();
      double q1 = mom[k][2].get(), q2 = mom[k][3].get();
      double q3 = mom[k][4].get(), q4 = mom[k][5].get();
      double q0 = sw2;
      double mu = m1 / sw;
      double var = std::max(0.0, m2 / sw - mu * mu);
      comp.mean = mu;
      comp.variance = var;
      comp.mean_se =
          std::sqrt(std::max(0.0, q2 - 2 * mu * q1 + mu * mu * q0)) / sw;
      double c2 = q2 - 2 * mu * q1 + mu * mu * q0;
      double c4 = q4 - 4 * mu * q3 + 6 * mu * mu * q2 -
                  4 * mu * mu * mu * q1 + mu * mu * mu * mu * q0;
      double g = c4 - 2 * var * c2 + var * var * q0;
      comp.variance_se = std::sqrt(std::max(0.0, g)) / sw;
    } else {
      for (const auto& [v, sums] : disc[k]) {
        double p = sums.first.get() / sw;
        comp.posterior.add_weight(v, p);
        double v2 = sums.second.get();
        double s2 = v2 * (1 - p) * (1 - p) + (sw2 - v2) * p * p;
        comp.se[v] = std::sqrt(std::max(0.0, s2)) / sw;
      }
    }
    res.components.push_back(std::move(comp));
  }
  return res;
}

}  // namespace funstack
