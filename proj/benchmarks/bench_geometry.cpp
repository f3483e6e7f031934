#include <string>

#include <benchmark/benchmark.h>

#include "flab/connections.hpp"
#include "flab/sampling.hpp"
#include "flab/spray.hpp"
#include "flab/verify.hpp"

namespace {

const char* const kConfigs[] = {"euclidean2", "riemannian2", "riemannian3", "randers3", "randers4"};

flab::FinslerMetric metric(int which)
{
    return flab::load_metric_file(std::string(FLAB_CONFIG_DIR) + "/" + kConfigs[which] + ".json").metric;
}

flab::TangentPoint point(const flab::FinslerMetric& M, std::uint64_t k)
{
    return flab::sample_point(7, k, M.dimension(), M.domain());
}

void BM_PointGeometry(benchmark::State& state)
{
    const flab::FinslerMetric M = metric(static_cast<int>(state.range(0)));
    std::uint64_t k = 0;
    for (auto _ : state) benchmark::DoNotOptimize(flab::PointGeometry(M, point(M, k++ % 64)));
    state.SetLabel(M.id());
}

void BM_VaismanTable(benchmark::State& state)
{
    const flab::FinslerMetric M = metric(static_cast<int>(state.range(0)));
    const flab::PointGeometry geo(M, point(M, 0));
    for (auto _ : state) benchmark::DoNotOptimize(flab::vaisman(geo));
    state.SetLabel(M.id());
}

void BM_CompositeTable(benchmark::State& state)
{
    const flab::FinslerMetric M = metric(static_cast<int>(state.range(0)));
    const flab::PointGeometry geo(M, point(M, 0));
    const flab::VranceanuTable vr = flab::vranceanu(geo);
    const flab::VaismanTable va = flab::vaisman(geo);
    for (auto _ : state) benchmark::DoNotOptimize(flab::composite_connection(geo, vr, va));
    state.SetLabel(M.id());
}

void BM_SweepPoint(benchmark::State& state)
{
    const flab::FinslerMetric M = metric(static_cast<int>(state.range(0)));
    flab::SweepOptions opts;
    opts.fd_spot_points = 0;
    const flab::SweepContext ctx(M, opts);
    long k = 0;
    for (auto _ : state) benchmark::DoNotOptimize(flab::evaluate_point(ctx, k++));
    state.SetLabel(M.id());
}

void BM_Geodesic(benchmark::State& state)
{
    const flab::FinslerMetric M = metric(1);
    const flab::TangentPoint p0({0.1, 0.2}, {1.0, 0.5});
    for (auto _ : state) benchmark::DoNotOptimize(flab::integrate_geodesic(M, p0, 200, 0.01));
}

} // namespace

BENCHMARK(BM_PointGeometry)->DenseRange(0, 4)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_VaismanTable)->DenseRange(0, 4)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CompositeTable)->DenseRange(0, 4)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SweepPoint)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Geodesic)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
