#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "quakebend/bend.hpp"
#include "quakebend/shearbend.hpp"

using namespace quakebend;

namespace {

const MarkedGroup& base_group() {
    static const MarkedGroup g = fuchsian_orthogonal(symmetric_length());
    return g;
}

void BM_EnumeratorSetup(benchmark::State& state) {
    const Slope s(static_cast<long long>(state.range(0)), 5);
    for (auto _ : state) benchmark::DoNotOptimize(CrossingEnumerator(base_group(), s));
}
BENCHMARK(BM_EnumeratorSetup)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_CrossingsOfWord(benchmark::State& state) {
    const CrossingEnumerator en(base_group(), Slope(2, 3));
    const Word w = Word::parse("YXY").power(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(en.crossings(w));
}
BENCHMARK(BM_CrossingsOfWord)->Arg(1)->Arg(2)->Arg(3);

void BM_TruncatedHolonomy(benchmark::State& state) {
    const CrossingEnumerator en(base_group(), Slope(2, 3));
    const Word w = Word::parse("YXY");
    for (auto _ : state) benchmark::DoNotOptimize(truncated_holonomy(en, 0.7, w, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_TruncatedHolonomy)->Arg(5)->Arg(20);

void BM_ShearFit(benchmark::State& state) {
    const TraceTriple target = quakebend_by_marking({base_group(), Slope(0, 1), 0.3}).trace_triple();
    const auto seed = shearbend::ComplexShears::symmetric();
    for (auto _ : state) benchmark::DoNotOptimize(shearbend::fit_shears_to_representation(target, seed));
}
BENCHMARK(BM_ShearFit);

void BM_PerturbationBound(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Mat2> a(n), e(n);
    for (std::size_t k = 0; k < n; ++k) {
        a[k] = {cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
        e[k] = {cplx(u(rng), 0), 0.0, 0.0, cplx(0, u(rng))};
    }
    for (auto _ : state) benchmark::DoNotOptimize(product_perturbation_gap(a, e));
    state.SetComplexityN(static_cast<long long>(n));
}
BENCHMARK(BM_PerturbationBound)->DenseRange(2, 16, 2)->Complexity([](benchmark::IterationCount n) {
    return static_cast<double>(n) * std::exp2(static_cast<double>(n));
});

} // namespace

BENCHMARK_MAIN();
