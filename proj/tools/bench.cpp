// Serial vs parallel timings for the three parallel kernels: likelihood
// weighting, run enumeration, and the factor-graph measure. Each workload
// is run both ways and the outputs are compared before timing is reported.

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "funstack/compiler.hpp"
#include "funstack/enumerate.hpp"
#include "funstack/factorgraph.hpp"
#include "funstack/frontend.hpp"
#include "funstack/fun_sem.hpp"
#include "funstack/imp.hpp"
#include "funstack/mc.hpp"
#include "funstack/measure.hpp"
#include "funstack/pipeline.hpp"
#include "funstack/threads.hpp"
#include "funstack/typesys.hpp"

using namespace funstack;

namespace {

double seconds(const std::function<void()>& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void row(const char* name, double serial, double parallel, bool agree) {
  std::printf("%-14s %10.3f s %10.3f s %8.2fx  %s\n", name, serial, parallel,
              serial / parallel, agree ? "outputs agree" : "OUTPUTS DIFFER");
}

void bench_mc() {
  auto p = prepare_source(
      "fun skill u = random (Gaussian(10.0, 20.0)) in "
      "fun performance player = random (Gaussian(player, 1.0)) in "
      "let alice = skill () in let bob = skill () in let cyd = skill () in "
      "observe (performance alice > performance bob); "
      "observe (performance bob > performance cyd); "
      "observe (performance alice > performance cyd); (alice, bob, cyd)");
  McOptions ser, par;
  ser.samples = par.samples = 500000;
  ser.parallel = false;
  par.parallel = true;
  McResult a, b;
  double ts = seconds([&] { a = infer_mc(p.core, ser); });
  double tp = seconds([&] { b = infer_mc(p.core, par); });
  row("sampling", ts, tp,
      a.evidence == b.evidence &&
          a.components[0].mean == b.components[0].mean);
}

void bench_enum() {
  // 20 coin flips, one disjunctive observation: ~1M paths.
  std::string src = "observe (c0 || c19); (c0, c19)";
  for (int i = 19; i >= 0; --i)
    src = "let c" + std::to_string(i) +
          " = random (Bernoulli(0.4)) in " + src;
  auto p = prepare_source(src);
  EnumOptions ser, par;
  ser.max_choices = par.max_choices = 24;
  ser.parallel = false;
  par.parallel = true;
  EnumResult a, b;
  double ts = seconds([&] { a = enumerate_runs(p.core, ser); });
  double tp = seconds([&] { b = enumerate_runs(p.core, par); });
  row("enumeration", ts, tp,
      measure_distance(a.valid_mass, b.valid_mass) == 0.0 &&
          a.invalid_mass == b.invalid_mass);
}

void bench_graph() {
  // An open program over 12 boolean state variables: the graph semantics
  // parallelizes over the 4096 input states.
  const int n = 12;
  TypeEnv gamma;
  Layout rho;
  ImpEnv sigma;
  std::vector<std::string> gnames, snames;
  std::string cond = "x";
  for (int i = 0; i < n; ++i) {
    std::string v = "v" + std::to_string(i), l = "s" + std::to_string(i);
    gamma.emplace_back(v, Type::boolean());
    rho[v] = Pattern::location(l);
    sigma.emplace_back(l, Type::boolean());
    gnames.push_back(v);
    snames.push_back(l);
    cond = (i % 2 ? "(" + cond + " && " + v + ")"
                  : "(" + cond + " || " + v + ")");
  }
  auto m = load_program_text(
      "let x = random (Bernoulli(0.5)) in "
      "let y = random (Bernoulli(0.3)) in observe " + cond + "; (x, y)");
  typecheck(m, gamma);
  auto tr = translate(rho, sigma, m);
  FactorGraph g = build_graph(hoist_locals(tr.stmt), sigma);

  FiniteMeasure mu;
  std::vector<Value> state(n);
  for (int bits = 0; bits < (1 << n); ++bits) {
    for (int i = 0; i < n; ++i)
      state[i] = Value::boolean((bits >> i) & 1);
    mu.add_weight(lift_state(rho, gnames, snames, encode_state(state)),
                  1.0 / (1 << n));
  }

  FiniteMeasure a, b;
#ifdef _OPENMP
  omp_set_num_threads(1);
#endif
  double ts = seconds([&] { a = graph_measure(g, mu); });
#ifdef _OPENMP
  omp_set_num_threads(worker_count());
#endif
  double tp = seconds([&] { b = graph_measure(g, mu); });
  row("factor graph", ts, tp, measure_distance(a, b) == 0.0);
}

}  // namespace

int main() {
  std::printf("workers: %d\n", worker_count());
  std::printf("%-14s %12s %12s %9s\n", "kernel", "serial", "parallel",
              "speedup");
  bench_mc();
  bench_enum();
  bench_graph();
  return 0;
}
