// Compares the serial reference batch-classification sweep against the
// OpenMP kernel. The two must produce identical results (covered by tests);
// this measures what the parallel sweep buys at various batch sizes.

#include <benchmark/benchmark.h>

#include <vector>

#include "relnet/trainer.hpp"

namespace {

constexpr int kAttributes = 8;

relnet::TransformedDataset make_data(int n_instances) {
    relnet::rng::Stream stream(123);
    relnet::TransformedDataset data;
    data.theta = 0.5;
    data.node_reliability_vectors.reserve(n_instances);
    data.y01.reserve(n_instances);
    for (int i = 0; i < n_instances; ++i) {
        std::vector<double> v(kAttributes);
        for (double& x : v) x = stream.u01();
        data.node_reliability_vectors.push_back(std::move(v));
        data.y01.push_back(static_cast<std::uint8_t>(i % 2));
    }
    return data;
}

std::vector<double> make_arcs(const relnet::Topology& topo) {
    relnet::rng::Stream stream(7);
    std::vector<double> arc(topo.n_var());
    for (double& a : arc) a = stream.u01();
    return arc;
}

} // namespace

static void BM_ClassifyBatchSerial(benchmark::State& state) {
    const relnet::Topology topo(kAttributes);
    const auto data = make_data(static_cast<int>(state.range(0)));
    const auto arc = make_arcs(topo);
    const auto bounds = relnet::build_bounds(data.theta, relnet::SimParams{});
    for (auto _ : state) {
        auto out = relnet::classify_batch_serial(topo, arc, data, bounds, 99);
        benchmark::DoNotOptimize(out.correct);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ClassifyBatchSerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_ClassifyBatchParallel(benchmark::State& state) {
    const relnet::Topology topo(kAttributes);
    const auto data = make_data(static_cast<int>(state.range(0)));
    const auto arc = make_arcs(topo);
    const auto bounds = relnet::build_bounds(data.theta, relnet::SimParams{});
    for (auto _ : state) {
        auto out = relnet::classify_batch_parallel(topo, arc, data, bounds, 99,
                                                   /*n_threads=*/0);
        benchmark::DoNotOptimize(out.correct);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ClassifyBatchParallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
