#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "funstack/compiler.hpp"
#include "funstack/enumerate.hpp"
#include "funstack/errors.hpp"
#include "funstack/factorgraph.hpp"
#include "funstack/imp.hpp"
#include "funstack/measure.hpp"
#include "funstack/pipeline.hpp"
#include "funstack/typesys.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace funstack;

namespace {

json ast_json(const Expr& e) {
  static const char* kinds[] = {"var",     "const", "pair",  "op",
                                "proj",    "if",    "let",   "random",
                                "observe", "array", "index", "for"};
  json j;
  j["kind"] = kinds[static_cast<int>(e.kind)];
  if (!e.name.empty()) j["name"] = e.name;
  if (e.kind == Expr::Kind::Const) j["value"] = json::parse(value_json(e.lit));
  if (e.kind == Expr::Kind::Op) j["op"] = op_str(e.op);
  if (e.kind == Expr::Kind::Proj) j["proj"] = e.proj;
  if (e.typed) j["type"] = e.type.str();
  j["span"] = {e.span.line, e.span.col};
  if (!e.kids.empty()) {
    json kids = json::array();
    for (const auto& k : e.kids) kids.push_back(ast_json(*k));
    j["kids"] = std::move(kids);
  }
  return j;
}

json posterior_json(const InferenceReport& rep) {
  if (!rep.is_mc) return json::parse(measure_json(rep.posterior));
  json comps = json::array();
  for (const auto& c : rep.mc.components) {
    json j;
    j["type"] = c.type.str();
    if (c.discrete) {
      json entries = json::array();
      for (const auto& [v, w] : c.posterior.entries()) {
        json ent;
        ent["value"] = json::parse(value_json(v));
        ent["weight"] = w;
        ent["se"] = c.se.at(v);
        entries.push_back(std::move(ent));
      }
      j["probs"] = std::move(entries);
    } else {
      j["mean"] = c.mean;
      j["variance"] = c.variance;
      j["mean_se"] = c.mean_se;
      j["variance_se"] = c.variance_se;
    }
    comps.push_back(std::move(j));
  }
  return comps;
}

json report_json(const InferenceReport& rep, const InferOptions& opts) {
  json j;
  j["backend"] = rep.backend;
  j["posterior"] = posterior_json(rep);
  j["evidence"] = rep.evidence;
  json d;
  d["wall_seconds"] = rep.wall_seconds;
  if (rep.is_mc) {
    d["samples"] = rep.mc.samples;
    d["stderr"] = rep.mc.evidence_se;
    d["ess"] = rep.mc.ess;
  } else if (rep.backend == "enum") {
    d["runs"] = rep.runs_explored;
    d["support"] = rep.posterior.size();
  } else {
    d["support"] = rep.posterior.size();
  }
  j["diagnostics"] = std::move(d);
  j["seed"] = opts.seed;
  return j;
}

// Exact-backend agreement on one file; returns the pass/fail matrix.
bool compare_file(const std::string& path, json& out) {
  PreparedProgram p = prepare_file(path);
  std::vector<std::string> backends;
  if (p.all_discrete)
    backends = {"enum", "mt", "imp", "fg"};
  else
    backends = {"mc"};
  std::vector<InferenceReport> reps;
  for (const auto& b : backends) reps.push_back(run_backend(p, b));
  bool ok = true;
  json matrix = json::array();
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t k = i + 1; k < reps.size(); ++k) {
      double dp = measure_distance(reps[i].posterior, reps[k].posterior);
      double de = std::abs(reps[i].evidence - reps[k].evidence);
      bool pair_ok = dp <= 1e-9 && de <= 1e-9;
      ok = ok && pair_ok;
      matrix.push_back({{"a", reps[i].backend},
                        {"b", reps[k].backend},
                        {"posterior_diff", dp},
                        {"evidence_diff", de},
                        {"pass", pair_ok}});
    }
  out["file"] = path;
  out["backends"] = backends;
  out["matrix"] = std::move(matrix);
  out["pass"] = ok;
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact and Monte Carlo inference for a small probabilistic "
               "language"};
  app.require_subcommand(1);

  std::string file, backend;
  InferOptions opts;
  bool dump_ast = false, want_json = false, want_dot = false;

  auto* check = app.add_subcommand("check", "parse and typecheck");
  check->add_option("file", file)->required();
  check->add_flag("--dump-ast", dump_ast);

  auto* compile = app.add_subcommand("compile", "translate to the imperative "
                                                "form");
  compile->add_option("file", file)->required();
  compile->add_flag("--json", want_json);

  auto* graph = app.add_subcommand("graph", "build the factor graph");
  graph->add_option("file", file)->required();
  graph->add_flag("--dot", want_dot);
  graph->add_flag("--json", want_json);

  auto* infer = app.add_subcommand("infer", "posterior inference");
  infer->add_option("file", file)->required();
  infer->add_option("--backend", backend)
      ->check(CLI::IsMember({"enum", "mt", "imp", "fg", "mc"}));
  infer->add_option("--samples", opts.samples);
  infer->add_option("--seed", opts.seed);
  infer->add_option("--max-support", opts.max_support);
  infer->add_option("--max-choices", opts.max_choices);

  auto* compare = app.add_subcommand("compare", "differential backend check");
  compare->add_option("file", file)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) {
      PreparedProgram p = prepare_file(file);
      if (dump_ast) {
        std::cout << ast_json(*p.core).dump(2) << "\n";
      } else {
        json j;
        j["type"] = p.type.str();
        j["all_discrete"] = p.all_discrete;
        std::cout << j.dump(2) << "\n";
      }
      std::cerr << file << ": " << p.type.str() << "\n";
      return 0;
    }
    if (compile->parsed()) {
      PreparedProgram p = prepare_file(file);
      auto tr = translate({}, {}, p.core);
      if (want_json) {
        json j;
        j["imp"] = imp_print(*tr.stmt);
        j["pattern"] = tr.pattern.str();
        json sigma = json::array();
        for (const auto& [l, t] : tr.sigma_prime)
          sigma.push_back({{"loc", l}, {"type", t.str()}});
        j["sigma"] = std::move(sigma);
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << imp_print(*tr.stmt);
        std::cerr << "pattern: " << tr.pattern.str() << "\n";
      }
      return 0;
    }
    if (graph->parsed()) {
      PreparedProgram p = prepare_file(file);
      auto tr = translate({}, {}, p.core);
      FactorGraph g = build_graph(hoist_locals(unroll_imp(tr.stmt)), {});
      if (want_dot)
        std::cout << fg_dot(g);
      else
        std::cout << fg_json(g) << "\n";
      std::cerr << "edges: " << g.edge_count() << "\n";
      return 0;
    }
    if (infer->parsed()) {
      PreparedProgram p = prepare_file(file);
      InferenceReport rep = run_backend(p, backend, opts);
      std::cout << report_json(rep, opts).dump(2) << "\n";
      std::cerr << rep.backend << ": evidence " << rep.evidence << " ("
                << rep.wall_seconds << " s)\n";
      return 0;
    }
    if (compare->parsed()) {
      json files = json::array();
      bool ok = true;
      if (fs::is_directory(file)) {
        std::vector<fs::path> paths;
        for (const auto& ent : fs::directory_iterator(file))
          if (ent.path().extension() == ".fun") paths.push_back(ent.path());
        std::sort(paths.begin(), paths.end());
        for (const auto& path : paths) {
          json one;
          ok = compare_file(path.string(), one) && ok;
          files.push_back(std::move(one));
        }
      } else {
        json one;
        ok = compare_file(file, one);
        files.push_back(std::move(one));
      }
      json j;
      j["results"] = std::move(files);
      j["pass"] = ok;
      std::cout << j.dump(2) << "\n";
      std::cerr << (ok ? "agree" : "DISAGREE") << "\n";
      return ok ? 0 : 1;
    }
  } catch (const FunError& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 70;
  }
  return 0;
}
