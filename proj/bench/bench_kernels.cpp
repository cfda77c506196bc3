// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "plr/circfft.hpp"
#include "plr/construct.hpp"
#include "plr/criterion.hpp"
#include "plr/scramble.hpp"

using namespace plr;

namespace {

const DiscreteLogTable& table(int m) {
    static std::map<int, DiscreteLogTable> cache;
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, build_log_table(find_modulus(2, m, true), Poly::monomial(2, 1))).first;
    return it->second;
}

PointSet rule_points(int m, std::size_t s) {
    return generate_points(cbc_fast(table(m), s, 1.0, WeightSequence::polynomial(2)).gv);
}

void BM_CriterionSerial(benchmark::State& state) {
    const auto pts = rule_points(static_cast<int>(state.range(0)), 20);
    for (auto _ : state) benchmark::DoNotOptimize(criterion_B_serial(pts, 1.0, WeightSequence::polynomial(2)));
}

void BM_CriterionParallel(benchmark::State& state) {
    const auto pts = rule_points(static_cast<int>(state.range(0)), 20);
    for (auto _ : state) benchmark::DoNotOptimize(criterion_B(pts, 1.0, WeightSequence::polynomial(2)));
}

std::vector<double> random_vec(std::size_t n) {
    std::mt19937_64 rng(n);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

void BM_MatvecDirect(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto k = random_vec(n);
    const auto v = random_vec(n + 1);
    const std::span<const double> vs(v.data(), n);
    for (auto _ : state) benchmark::DoNotOptimize(circulant_matvec_direct(k, vs));
}

void BM_MatvecTransform(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const CirculantKernel k{random_vec(n)};
    const ConvolutionPlan plan(k, ConvolutionPlan::Strategy::transform);
    const auto v = random_vec(n + 1);
    const std::span<const double> vs(v.data(), n);
    for (auto _ : state) benchmark::DoNotOptimize(plan.apply(vs));
}

void BM_CbcNaive(benchmark::State& state) {
    const auto& t = table(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(cbc_naive(t.modulus(), 5, 1.0, WeightSequence::polynomial(2), &t));
}

void BM_CbcFast(benchmark::State& state) {
    const auto& t = table(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(cbc_fast(t, 5, 1.0, WeightSequence::polynomial(2)));
}

void BM_CbcFastScale(benchmark::State& state) {
    const auto& t = table(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(cbc_fast(t, 100, 1.0, WeightSequence::polynomial(2)));
}

void BM_ReplicateVariance(benchmark::State& state) {
    const auto pts = rule_points(static_cast<int>(state.range(0)), 5);
    const auto f = make_integrand("prodlin", 5);
    for (auto _ : state) benchmark::DoNotOptimize(replicate_variance(f, pts, 50, {0, 1}));
}

}  // namespace

BENCHMARK(BM_CriterionSerial)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CriterionParallel)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatvecDirect)->Arg(255)->Arg(1023)->Arg(4095)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MatvecTransform)->Arg(255)->Arg(1023)->Arg(4095)->Arg(65535)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CbcNaive)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CbcFast)->Arg(6)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CbcFastScale)->Arg(14)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReplicateVariance)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
