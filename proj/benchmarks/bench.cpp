#include <benchmark/benchmark.h>

#include <cmath>

#include "kgkms/graph_io.hpp"
#include "kgkms/measures.hpp"
#include "kgkms/states.hpp"

namespace {

using namespace kgkms;

const KGraph& graph23() {
  static KGraph g = KGraph::validate(make_single_vertex({2, 3}).skeleton,
                                     make_single_vertex({2, 3}).rules, KGraphOptions{6});
  return g;
}

struct Ctx {
  VertexMatrices m;
  SpectralData s;
  Dynamics dyn;
};

const Ctx& ctx23() {
  static Ctx c = [] {
    Ctx out;
    out.m = vertex_matrices(graph23());
    out.s = common_pf(graph23(), out.m);
    out.dyn = normalize_dynamics(out.s, {1.0, std::log(3.0)});
    return out;
  }();
  return c;
}

void bm_validate(benchmark::State& state) {
  GraphSpec spec = make_single_vertex({2, 3});
  for (auto _ : state) {
    KGraph g = KGraph::validate(spec.skeleton, spec.rules);
    benchmark::DoNotOptimize(g.edge_count());
  }
}
BENCHMARK(bm_validate);

void bm_enumerate_paths(benchmark::State& state) {
  GraphSpec spec = make_single_vertex({2, 3});
  int d = static_cast<int>(state.range(0));
  for (auto _ : state) {
    KGraph g = KGraph::validate(spec.skeleton, spec.rules, KGraphOptions{d});
    Degree n{d, d};
    benchmark::DoNotOptimize(g.paths(n).size());
  }
}
BENCHMARK(bm_enumerate_paths)->Arg(2)->Arg(3)->Arg(4);

void bm_compose_normalize(benchmark::State& state) {
  const KGraph& g = graph23();
  const auto& deep = g.paths(Degree{3, 3});
  size_t i = 0;
  for (auto _ : state) {
    const Path& a = deep[i % deep.size()];
    const Path& b = deep[(i * 7 + 3) % deep.size()];
    benchmark::DoNotOptimize(g.compose(a, b));
    ++i;
  }
}
BENCHMARK(bm_compose_normalize);

void bm_lambda_min_sweep(benchmark::State& state) {
  const KGraph& g = graph23();
  const auto& pool = g.paths(Degree{1, 1});
  for (auto _ : state) {
    size_t total = 0;
    for (const Path& mu : pool)
      for (const Path& nu : pool) total += g.lambda_min(mu, nu).size();
    benchmark::DoNotOptimize(total);
  }
}
BENCHMARK(bm_lambda_min_sweep);

void bm_multiply(benchmark::State& state) {
  const KGraph& g = graph23();
  const auto& pool = g.paths(Degree{1, 1});
  ToeplitzElement a;
  for (const Path& p : pool) a = a + ToeplitzElement::term(p, p);
  for (auto _ : state) benchmark::DoNotOptimize(multiply(g, a, a).size());
}
BENCHMARK(bm_multiply);

void bm_phi_spatial(benchmark::State& state) {
  const Ctx& c = ctx23();
  MeasureContext ctx(graph23(), c.m, c.s, c.dyn);
  Path a = graph23().edge_path(graph23().edge_index("c1e1"));
  ToeplitzElement e = ToeplitzElement::term(a, a);
  for (auto _ : state) benchmark::DoNotOptimize(phi_spatial(ctx, e, 40).value);
}
BENCHMARK(bm_phi_spatial);

void bm_kms_residual_sweep(benchmark::State& state) {
  const Ctx& c = ctx23();
  const KGraph& g = graph23();
  CriticalState st = make_critical_state(g, c.s, c.dyn);
  const auto& pool = g.paths(Degree{1, 1});
  for (auto _ : state) {
    double worst = 0.0;
    for (const Path& mu : pool)
      for (const Path& nu : pool)
        worst = std::max(worst, kms_residual(g, st, SpanningTerm{mu, nu},
                                             SpanningTerm{nu, mu}, 1.0));
    benchmark::DoNotOptimize(worst);
  }
}
BENCHMARK(bm_kms_residual_sweep);

void bm_perron(benchmark::State& state) {
  IntMat a(3);
  // an irreducible integer matrix with an irrational spectral radius
  long long entries[9] = {1, 2, 0, 1, 1, 1, 0, 3, 1};
  for (int i = 0; i < 9; ++i) a.a[static_cast<size_t>(i)] = entries[i];
  for (auto _ : state) benchmark::DoNotOptimize(perron(a).rho);
}
BENCHMARK(bm_perron);

}  // namespace

BENCHMARK_MAIN();
