// Serial vs OpenMP brute-force valuation sweep, plus the symbolic solver on
// the same expression for scale. Thread count follows EXPOKNAP_THREADS.

#include <benchmark/benchmark.h>

#include "expoknap/hnn.hpp"
#include "expoknap/oracle.hpp"

using namespace expoknap;

namespace {

oracle::Presentation presentation() {
  oracle::Presentation p;
  p.alphabet = Alphabet({"a", "b"});
  p.alphabet.add_generator("t", true);
  p.subgroup_generators[2] = {p.alphabet.parse("a a"), p.alphabet.parse("b a b^-1")};
  return p;
}

KnapsackExpr expression(const Alphabet& al) {
  KnapsackExpr e;
  e.constants = {al.parse("t^-1"), al.parse("t b"), al.parse("b^-1"), {}};
  e.powers = {{al.parse("a"), "x"}, {al.parse("a^-1"), "y"}, {al.parse("b a^-1 b^-1"), "z"}};
  return e;
}

void BM_BruteSerial(benchmark::State& state) {
  oracle::Oracle o(presentation());
  auto e = expression(o.presentation().alphabet);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::brute_solutions(o, e, state.range(0)));
}

void BM_BruteParallel(benchmark::State& state) {
  oracle::Oracle o(presentation());
  auto e = expression(o.presentation().alphabet);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::brute_solutions_parallel(o, e, state.range(0)));
  state.counters["threads"] = oracle::thread_count();
}

void BM_Symbolic(benchmark::State& state) {
  auto p = presentation();
  std::map<std::uint32_t, StallingsGraph> assoc{
      {2, StallingsGraph::build(p.subgroup_generators[2], p.alphabet.letter_count())}};
  HnnGroup H(p.alphabet, assoc);
  auto e = expression(p.alphabet);
  for (auto _ : state) benchmark::DoNotOptimize(sol(H, e));
}

}  // namespace

BENCHMARK(BM_BruteSerial)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BruteParallel)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Symbolic)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
