#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "khb/functor_ops.hpp"
#include "khb/isomorphism.hpp"
#include "khb/khovanov.hpp"
#include "khb/simplicial.hpp"
#include "khb/totalization.hpp"

using namespace khb;

namespace {

std::string corpus(const std::string& rel) { return std::string(KHB_BENCH_CORPUS_DIR) + "/" + rel; }

PDCode pd(const std::string& name) {
  std::ifstream in(corpus("pd/" + name + ".pd"));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_pd(ss.str());
}

StableFunctor functor(const std::string& name) {
  return functor_from_json(read_json_file(corpus("functors/" + name + ".json")));
}

const std::vector<std::string> kDiagrams{"trefoil_left", "figure_eight", "granny_knot", "trefoil_union_figure_eight"};

void BM_BuildKhovanov(benchmark::State& state) {
  auto d = pd(kDiagrams[static_cast<std::size_t>(state.range(0))]);
  for (auto _ : state) benchmark::DoNotOptimize(build_khovanov_functor(d));
  state.SetLabel(kDiagrams[static_cast<std::size_t>(state.range(0))]);
}
BENCHMARK(BM_BuildKhovanov)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_KhovanovHomology(benchmark::State& state) {
  auto f = build_khovanov_functor(pd(kDiagrams[static_cast<std::size_t>(state.range(0))]));
  for (auto _ : state) benchmark::DoNotOptimize(khovanov_homology(f));
  state.SetLabel(kDiagrams[static_cast<std::size_t>(state.range(0))]);
}
BENCHMARK(BM_KhovanovHomology)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

// Largest differential of a Khovanov totalization; random dense matrices
// quickly have invariant factors beyond 64 bits.
void BM_InvariantFactors(benchmark::State& state) {
  auto f = build_khovanov_functor(pd(kDiagrams[static_cast<std::size_t>(state.range(0))]));
  auto c = tot(f.stable);
  IntegerMatrix m;
  for (int d : c.degrees())
    if (c.d(d).rows() * c.d(d).cols() > m.rows() * m.cols()) m = c.d(d);
  for (auto _ : state) benchmark::DoNotOptimize(invariant_factors(m));
  state.SetLabel(std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}
BENCHMARK(BM_InvariantFactors)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_MatchingSearch(benchmark::State& state) {
  auto f = functor(state.range(0) ? "zero_extend" : "multiple_extend").functor;
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_matchings(f));
}
BENCHMARK(BM_MatchingSearch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_IsomorphismSearch(benchmark::State& state) {
  auto f1 = functor("rp2_smash_F1").functor;
  auto p = functor("P").functor;
  auto pp = product(p, p);
  for (auto _ : state) benchmark::DoNotOptimize(find_natural_isomorphism(f1, pp));
}
BENCHMARK(BM_IsomorphismSearch)->Unit(benchmark::kMicrosecond);

void BM_DeltaHomology(benchmark::State& state) {
  auto x = delta_from_json(read_json_file(corpus("delta/torus_7.json")));
  for (auto _ : state) benchmark::DoNotOptimize(homology(tot(delta_functor(x))));
}
BENCHMARK(BM_DeltaHomology)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
