#include "funstack/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "funstack/enumerate.hpp"
#include "funstack/errors.hpp"
#include "funstack/factorgraph.hpp"
#include "funstack/frontend.hpp"
#include "funstack/fun_sem.hpp"
#include "funstack/imp.hpp"
#include "funstack/typesys.hpp"

namespace funstack {

PreparedProgram prepare_source(const std::string& source) {
  PreparedProgram p;
  p.core = load_program_text(source);
  typecheck(p.core, {});
  p.core = unroll_arrays(p.core);
  p.type = typecheck(p.core, {});
  p.all_discrete = program_all_discrete(*p.core);
  return p;
}

PreparedProgram prepare_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return prepare_source(ss.str());
}

std::string default_backend(const PreparedProgram& p) {
  return p.all_discrete ? "enum" : "mc";
}

InferenceReport run_backend(const PreparedProgram& p, std::string backend,
                            const InferOptions& opts) {
  if (backend.empty()) backend = default_backend(p);
  if (opts.max_support) set_measure_support_cap(opts.max_support);

  InferenceReport rep;
  rep.backend = backend;
  auto t0 = std::chrono::steady_clock::now();
  if (backend == "enum") {
    EnumOptions eo;
    eo.max_choices = opts.max_choices;
    EnumResult er = enumerate_runs(p.core, eo);
    rep.runs_explored = er.runs;
    auto [post, ev] = normalize(er.valid_mass);
    rep.posterior = std::move(post);
    rep.evidence = ev;
  } else if (backend == "mt") {
    auto [post, ev] = infer_mt(p.core);
    rep.posterior = std::move(post);
    rep.evidence = ev;
  } else if (backend == "imp") {
    auto tr = translate({}, {}, p.core);
    auto stmt = unroll_imp(tr.stmt);
    auto [t, names] = transform_imp(stmt, {});
    FiniteMeasure out = t(FiniteMeasure::dirac(Value::unit()));
    Pattern pat = tr.pattern;
    auto proj = mt_pure([names, pat](const Value& s) {
      return pattern_value(pat, names, s);
    });
    auto [post, ev] = normalize(proj(out));
    rep.posterior = std::move(post);
    rep.evidence = ev;
  } else if (backend == "fg") {
    auto tr = translate({}, {}, p.core);
    auto stmt = unroll_imp(tr.stmt);
    FactorGraph g = build_graph(hoist_locals(stmt), {});
    FiniteMeasure out = graph_measure(g, FiniteMeasure::dirac(Value::unit()));
    std::vector<std::string> names;
    for (const auto& [n, t] : g.sigma) names.push_back(n);
    for (const auto& [n, t] : g.sigma_prime) names.push_back(n);
    Pattern pat = tr.pattern;
    auto proj = mt_pure([names, pat](const Value& s) {
      return pattern_value(pat, names, s);
    });
    auto [post, ev] = normalize(proj(out));
    rep.posterior = std::move(post);
    rep.evidence = ev;
  } else if (backend == "mc") {
    McOptions mo;
    mo.samples = opts.samples;
    mo.seed = opts.seed;
    rep.is_mc = true;
    rep.mc = infer_mc(p.core, mo);
    rep.evidence = rep.mc.evidence;
  } else {
    throw ParamError("unknown backend " + backend);
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

}  // namespace funstack
