#include "funstack/factorgraph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "funstack/dists.hpp"
#include "funstack/errors.hpp"
#include "funstack/eval.hpp"
#include "funstack/fun_sem.hpp"
#include "funstack/measure.hpp"
#include "funstack/typesys.hpp"

namespace funstack {

std::size_t FactorGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& e : edges) {
    ++n;
    if (e.kind == FgEdge::Kind::Gate)
      n += e.g1->edge_count() + e.g2->edge_count();
  }
  return n;
}

namespace {

std::size_t count_stmts(const ImpStmt& c) {
  switch (c.kind) {
    case ImpStmt::Kind::Nil:
      return 0;
    case ImpStmt::Kind::Seq:
    case ImpStmt::Kind::Local:
    case ImpStmt::Kind::For: {
      std::size_t n = c.kind == ImpStmt::Kind::For ? 1 : 0;
      for (const auto& k : c.kids) n += count_stmts(*k);
      return n;
    }
    case ImpStmt::Kind::If:
      return 1 + count_stmts(*c.kids[0]) + count_stmts(*c.kids[1]);
    default:
      return 1;
  }
}

void edges_of(const ImpStmt& c, std::vector<FgEdge>& out);

FactorGraph impfg(const ImpStmtPtr& c) {
  FactorGraph g;
  const ImpStmt* cur = c.get();
  while (cur->kind == ImpStmt::Kind::Local) {
    g.bound.emplace_back(cur->loc, cur->base);
    cur = cur->kids[0].get();
  }
  edges_of(*cur, g.edges);
  return g;
}

void edges_of(const ImpStmt& c, std::vector<FgEdge>& out) {
  switch (c.kind) {
    case ImpStmt::Kind::Nil:
      return;
    case ImpStmt::Kind::Seq:
      edges_of(*c.kids[0], out);
      edges_of(*c.kids[1], out);
      return;
    case ImpStmt::Kind::Assign: {
      FgEdge e;
      e.x = c.loc;
      switch (c.expr.kind) {
        case ImpExpr::Kind::Const:
          e.kind = FgEdge::Kind::Const;
          e.c = c.expr.c;
          break;
        case ImpExpr::Kind::Loc:
          e.kind = FgEdge::Kind::Equal;
          e.y = c.expr.l1;
          break;
        case ImpExpr::Kind::Op:
          e.kind = FgEdge::Kind::Op;
          e.op = c.expr.op;
          e.y = c.expr.l1;
          e.z = c.expr.l2;
          break;
      }
      out.push_back(std::move(e));
      return;
    }
    case ImpStmt::Kind::RandomAssign: {
      FgEdge e;
      e.kind = FgEdge::Kind::Sample;
      e.x = c.loc;
      e.dist = c.dist;
      e.args = c.args;
      out.push_back(std::move(e));
      return;
    }
    case ImpStmt::Kind::Observe: {
      FgEdge e;
      e.kind = FgEdge::Kind::Const;
      e.x = c.loc;
      e.c = zero_element(c.base);
      out.push_back(std::move(e));
      return;
    }
    case ImpStmt::Kind::If: {
      FgEdge e;
      e.kind = FgEdge::Kind::Gate;
      e.x = c.loc;
      e.g1 = std::make_shared<FactorGraph>(impfg(c.kids[0]));
      e.g2 = std::make_shared<FactorGraph>(impfg(c.kids[1]));
      out.push_back(std::move(e));
      return;
    }
    case ImpStmt::Kind::Local:
      throw InternalError("local below top level: hoist before impfg");
    case ImpStmt::Kind::For:
      throw InternalError("unroll for-statements before impfg");
  }
}

}  // namespace

FactorGraph build_graph(const ImpStmtPtr& hoisted, const ImpEnv& sigma) {
  ImpEnv sigma_prime = typecheck_imp(hoisted, sigma);
  FactorGraph g = impfg(hoisted);
  g.sigma = sigma;
  // Output variables are the non-local assignments.
  for (const auto& b : sigma_prime) g.sigma_prime.push_back(b);
  g.stmt_count = count_stmts(*hoisted);
  return g;
}

namespace {

using Env = std::map<std::string, Value>;

class Evaluator {
 public:
  explicit Evaluator(std::size_t cap) : budget_(cap * 1024) {}

  // Sum over all variable assignments consistent with the edges, calling
  // emit with the final environment and the accumulated factor product.
  void walk(const std::vector<FgEdge>& edges, std::size_t i, Env& env,
            double w, const std::function<void(const Env&, double)>& emit) {
    if (w == 0.0) return;
    if (i == edges.size()) {
      emit(env, w);
      return;
    }
    if (budget_-- == 0)
      throw SupportOverflow("factor-graph enumeration exceeds the cap");
    const FgEdge& e = edges[i];
    switch (e.kind) {
      case FgEdge::Kind::Const:
        define_or_check(edges, i, env, w, e.x, e.c, emit);
        return;
      case FgEdge::Kind::Equal:
        define_or_check(edges, i, env, w, e.x, at(env, e.y), emit);
        return;
      case FgEdge::Kind::Op:
        define_or_check(edges, i, env, w, e.x,
                        apply_op(e.op, at(env, e.y), at(env, e.z)), emit);
        return;
      case FgEdge::Kind::Sample: {
        const DistSig* sig = dist_sig(e.dist);
        if (!sig || !sig->discrete)
          throw ContinuousGraphError("continuous sample factor for " + e.x);
        std::vector<Value> params;
        params.reserve(e.args.size());
        for (const auto& a : e.args) params.push_back(at(env, a));
        auto it = env.find(e.x);
        if (it != env.end()) {
          walk(edges, i + 1, env, w * dist_mass(e.dist, params, it->second),
               emit);
          return;
        }
        FiniteMeasure d = dist_measure(e.dist, params);
        for (const auto& [v, m] : d.entries()) {
          env[e.x] = v;
          walk(edges, i + 1, env, w * m, emit);
        }
        env.erase(e.x);
        return;
      }
      case FgEdge::Kind::Gate: {
        Value v = at(env, e.x);
        if (!v.is_bool())
          throw InternalError("gate condition " + e.x + " is not boolean");
        // The untaken branch has exponent 0 and contributes factor 1.
        const FactorGraph& b = v.as_bool() ? *e.g1 : *e.g2;
        walk(b.edges, 0, env, w, [&](const Env& env2, double w2) {
          Env cont = env2;
          for (const auto& [l, t] : b.bound) cont.erase(l);
          walk(edges, i + 1, cont, w2, emit);
        });
        return;
      }
    }
  }

 private:
  static const Value& at(const Env& env, const std::string& x) {
    auto it = env.find(x);
    if (it == env.end())
      throw ImpTypeError("undefined variable " + x + " in factor graph");
    return it->second;
  }

  void define_or_check(const std::vector<FgEdge>& edges, std::size_t i,
                       Env& env, double w, const std::string& x,
                       const Value& v,
                       const std::function<void(const Env&, double)>& emit) {
    auto it = env.find(x);
    if (it != env.end()) {
      if (it->second == v) walk(edges, i + 1, env, w, emit);
      return;
    }
    env[x] = v;
    walk(edges, i + 1, env, w, emit);
    env.erase(x);
  }

  std::size_t budget_;
};

}  // namespace

FiniteMeasure graph_measure(const FactorGraph& g, const FiniteMeasure& mu) {
  std::vector<std::string> sigma_names, out_names;
  for (const auto& [n, t] : g.sigma) sigma_names.push_back(n);
  out_names = sigma_names;
  for (const auto& [n, t] : g.sigma_prime) out_names.push_back(n);

  std::vector<std::pair<Value, double>> states(mu.entries().begin(),
                                               mu.entries().end());
  std::vector<FiniteMeasure> parts(states.size());
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < states.size(); ++k) {
    try {
      Evaluator ev(measure_support_cap());
      Env env;
      auto vals = decode_state(states[k].first, sigma_names.size());
      for (std::size_t j = 0; j < sigma_names.size(); ++j)
        env[sigma_names[j]] = vals[j];
      ev.walk(g.edges, 0, env, states[k].second,
              [&](const Env& env2, double w) {
                std::vector<Value> out;
                out.reserve(out_names.size());
                for (const auto& n : out_names) {
                  auto it = env2.find(n);
                  if (it == env2.end())
                    throw InternalError("output variable " + n +
                                        " unassigned");
                  out.push_back(it->second);
                }
                parts[k].add_weight(encode_state(out), w);
              });
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  FiniteMeasure result;
  for (const auto& part : parts)
    result = add_measures(result, part);
  return result;
}

std::pair<FiniteMeasure, double> fg_marginal(const FactorGraph& g,
                                             const FiniteMeasure& mu,
                                             const std::string& var) {
  std::vector<std::string> out_names;
  for (const auto& [n, t] : g.sigma) out_names.push_back(n);
  for (const auto& [n, t] : g.sigma_prime) out_names.push_back(n);
  if (std::find(out_names.begin(), out_names.end(), var) == out_names.end())
    throw ImpTypeError("variable " + var + " unbound in graph and ambient");
  FiniteMeasure joint = graph_measure(g, mu);
  auto pick = mt_pure([out_names, var](const Value& s) {
    return state_lookup(out_names, s, var);
  });
  return normalize(pick(joint));
}

namespace {

void dot_edges(const FactorGraph& g, const std::string& prefix, int& id,
               std::ostringstream& os) {
  for (const auto& [n, t] : g.bound)
    os << "  \"" << prefix << n << "\" [label=\"" << n << ":" << t.str()
       << "\", shape=circle];\n";
  for (const auto& e : g.edges) {
    std::string f = "f" + std::to_string(id++);
    switch (e.kind) {
      case FgEdge::Kind::Const:
        os << "  \"" << f << "\" [label=\"= " << e.c.str()
           << "\", shape=box];\n";
        os << "  \"" << f << "\" -- \"" << prefix << e.x << "\";\n";
        break;
      case FgEdge::Kind::Equal:
        os << "  \"" << f << "\" [label=\"=\", shape=box];\n";
        os << "  \"" << f << "\" -- \"" << prefix << e.x << "\";\n";
        os << "  \"" << f << "\" -- \"" << prefix << e.y << "\";\n";
        break;
      case FgEdge::Kind::Op:
        os << "  \"" << f << "\" [label=\"" << op_str(e.op)
           << "\", shape=box];\n";
        os << "  \"" << f << "\" -- \"" << prefix << e.x << "\";\n";
        os << "  \"" << f << "\" -- \"" << prefix << e.y << "\";\n";
        os << "  \"" << f << "\" -- \"" << prefix << e.z << "\";\n";
        break;
      case FgEdge::Kind::Sample:
        os << "  \"" << f << "\" [label=\"" << e.dist << "\", shape=box];\n";
        os << "  \"" << f << "\" -- \"" << prefix << e.x << "\";\n";
        for (const auto& a : e.args)
          os << "  \"" << f << "\" -- \"" << prefix << a << "\";\n";
        break;
      case FgEdge::Kind::Gate: {
        os << "  subgraph \"cluster_" << f << "t\" {\n"
           << "  style=dashed; label=\"" << e.x << "\";\n";
        dot_edges(*e.g1, prefix + f + "t_", id, os);
        os << "  }\n";
        os << "  subgraph \"cluster_" << f << "e\" {\n"
           << "  style=dashed; label=\"!" << e.x << "\";\n";
        dot_edges(*e.g2, prefix + f + "e_", id, os);
        os << "  }\n";
        break;
      }
    }
  }
}

void json_graph(const FactorGraph& g, std::ostringstream& os);

void json_edge(const FgEdge& e, std::ostringstream& os) {
  os << "{";
  switch (e.kind) {
    case FgEdge::Kind::Const:
      os << "\"kind\":\"Const\",\"x\":\"" << e.x
         << "\",\"c\":" << value_json(e.c);
      break;
    case FgEdge::Kind::Equal:
      os << "\"kind\":\"Equal\",\"x\":\"" << e.x << "\",\"y\":\"" << e.y
         << "\"";
      break;
    case FgEdge::Kind::Op:
      os << "\"kind\":\"Op\",\"x\":\"" << e.x << "\",\"op\":\"" << op_str(e.op)
         << "\",\"y\":\"" << e.y << "\",\"z\":\"" << e.z << "\"";
      break;
    case FgEdge::Kind::Sample: {
      os << "\"kind\":\"Sample\",\"x\":\"" << e.x << "\",\"dist\":\"" << e.dist
         << "\",\"args\":[";
      for (std::size_t i = 0; i < e.args.size(); ++i)
        os << (i ? "," : "") << "\"" << e.args[i] << "\"";
      os << "]";
      break;
    }
    case FgEdge::Kind::Gate:
      os << "\"kind\":\"Gate\",\"x\":\"" << e.x << "\",\"then\":";
      json_graph(*e.g1, os);
      os << ",\"else\":";
      json_graph(*e.g2, os);
      break;
  }
  os << "}";
}

void json_graph(const FactorGraph& g, std::ostringstream& os) {
  os << "{\"bound\":[";
  for (std::size_t i = 0; i < g.bound.size(); ++i)
    os << (i ? "," : "") << "{\"name\":\"" << g.bound[i].first
       << "\",\"type\":\"" << g.bound[i].second.str() << "\"}";
  os << "],\"edges\":[";
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (i) os << ",";
    json_edge(g.edges[i], os);
  }
  os << "]}";
}

}  // namespace

std::string fg_dot(const FactorGraph& g) {
  std::ostringstream os;
  os << "graph factors {\n";
  int id = 0;
  dot_edges(g, "", id, os);
  os << "}\n";
  return os.str();
}

std::string fg_json(const FactorGraph& g) {
  std::ostringstream os;
  json_graph(g, os);
  return os.str();
}

}  // namespace funstack
