#include <benchmark/benchmark.h>

#include "ldk/conjfree.hpp"
#include "ldk/demorgan.hpp"
#include "ldk/harness.hpp"
#include "ldk/syntax.hpp"

using namespace ldk;

static void BM_Enumerate(benchmark::State& state) {
  GenSpec spec;
  spec.system = static_cast<SystemId>(state.range(0));
  spec.size_bound = static_cast<std::size_t>(state.range(1));
  std::size_t n = 0;
  for (auto _ : state) {
    n = 0;
    for_each_term(spec, [&](const Typed&) { ++n; });
  }
  state.counters["terms"] = static_cast<double>(n);
}
BENCHMARK(BM_Enumerate)
    ->Args({static_cast<int>(SystemId::Small), 7})
    ->Args({static_cast<int>(SystemId::DisjFree), 6})
    ->Args({static_cast<int>(SystemId::Full), 5})
    ->Unit(benchmark::kMillisecond);

// A chain of nested beta redexes: (\u:X. (\u:X. ... u) u) x.
static Term beta_chain(int depth) {
  Term t = Term::var("x");
  for (int i = 0; i < depth; ++i)
    t = Term::app(Term::lam("u", Formula::atom("X"), Term::var("u")), t);
  return t;
}

static void BM_Normalize(benchmark::State& state) {
  Context g = parse_context("x:X");
  Term t = beta_chain(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        normalize(g, t, RuleSet::system(SystemId::Small), Strategy::LeftmostOutermost, 100000));
}
BENCHMARK(BM_Normalize)->Arg(8)->Arg(64);

static void BM_ReductionGraph(benchmark::State& state) {
  Context g = parse_context("x:X");
  Term t = beta_chain(static_cast<int>(state.range(0)));
  std::size_t nodes = 0;
  for (auto _ : state) nodes = reduction_graph(g, t, RuleSet::system(SystemId::Small)).nodes.size();
  state.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_ReductionGraph)->Arg(6)->Arg(10);

static void BM_SimulateSequenceDeMorgan(benchmark::State& state) {
  Context g = parse_context("x:X");
  Term t = parse_term(
      "case (delta h:~(X \\/ X). h (in1[X \\/ X] (delta j:~X. j x))) of { a:X => a | b:X => b }", g);
  Trace s = normalize(g, t, RuleSet::system(SystemId::Full), Strategy::LeftmostOutermost, 100);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_sequence(g, s));
}
BENCHMARK(BM_SimulateSequenceDeMorgan);

static void BM_SimulateSequenceConjFree(benchmark::State& state) {
  Context g = parse_context("a:X, b:X");
  Term t = parse_term("p1 <p2 <a, p1 <b, a>>, (\\u:X. u) b>", g);
  Trace s = normalize(g, t, RuleSet::system(SystemId::DisjFree), Strategy::LeftmostInnermost, 100);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_sequence_cf(g, s));
}
BENCHMARK(BM_SimulateSequenceConjFree);
BENCHMARK_MAIN();
