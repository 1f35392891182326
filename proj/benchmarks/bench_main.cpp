#include <benchmark/benchmark.h>

#include <map>

#include "appr/appr.hpp"
#include "appr/random_appr.hpp"
#include "appr/sparsify.hpp"
#include "appr/synth.hpp"

namespace {

const appr::Graph& power_law_graph(int n) {
    static std::map<int, appr::Graph> cache;
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, appr::synth::power_law(n, 3, 42)).first;
    return it->second;
}

void BM_ApprSolve(benchmark::State& state) {
    const appr::Graph& g = power_law_graph(static_cast<int>(state.range(0)));
    const appr::ApprParams params{0.15, 1e-6};
    for (auto _ : state) {
        auto res = appr::appr_solve(g, 0, params);
        benchmark::DoNotOptimize(res.push_count);
    }
}
BENCHMARK(BM_ApprSolve)->Arg(1000)->Arg(5000)->Arg(20000);

void BM_RandomAppr(benchmark::State& state) {
    const appr::Graph& g = power_law_graph(static_cast<int>(state.range(0)));
    const appr::ApprParams params{0.15, 1e-5};
    appr::SamplerConfig cfg;
    cfg.q_bar = 8;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        cfg.rng_seed = ++seed;
        auto res = appr::random_appr(g, 0, params, cfg);
        benchmark::DoNotOptimize(res.push_count);
    }
}
BENCHMARK(BM_RandomAppr)->Arg(1000)->Arg(5000);

void BM_SparsifyOffline(benchmark::State& state) {
    const appr::Graph& g = power_law_graph(static_cast<int>(state.range(0)));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        auto gs = appr::sparsify_offline(g, appr::InfluencerScheme{4.0}, ++seed);
        benchmark::DoNotOptimize(gs.edge_count());
    }
}
BENCHMARK(BM_SparsifyOffline)->Arg(1000)->Arg(5000)->Arg(20000);

void BM_SinglePush(benchmark::State& state) {
    const appr::Graph& g = power_law_graph(5000);
    const appr::ApprParams params{0.15, 1e-6};
    for (auto _ : state) {
        appr::ApprState st;
        st.init(g, appr::unit_vec(0), params.epsilon);
        appr::push(st, g, 0, params);
        benchmark::DoNotOptimize(st.push_count);
    }
}
BENCHMARK(BM_SinglePush);

}  // namespace

BENCHMARK_MAIN();
