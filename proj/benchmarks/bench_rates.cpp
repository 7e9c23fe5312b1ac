#include <benchmark/benchmark.h>

#include <cmath>

#include "qkdrate/decoy.hpp"
#include "qkdrate/mcoracle.hpp"
#include "qkdrate/optimize.hpp"
#include "qkdrate/rates.hpp"
#include "qkdrate/sweep_io.hpp"

namespace {

const qkdrate::experiment_profile& gys() {
    static const auto p = *qkdrate::find_builtin_profile("GYS");
    return p;
}

void bm_sarg04_point(benchmark::State& state) {
    const double L = static_cast<double>(state.range(0));
    for (auto _ : state) {
        auto pt = qkdrate::sarg04_rate(qkdrate::sarg_variant::four_state, gys(),
                                       0.1, qkdrate::ec_model::cascade(), L);
        benchmark::DoNotOptimize(pt);
    }
}
BENCHMARK(bm_sarg04_point)->Arg(0)->Arg(50)->Arg(100);

void bm_decoy_yields(benchmark::State& state) {
    for (auto _ : state) {
        auto est = qkdrate::sarg04_yields(qkdrate::sarg_variant::four_state,
                                          gys().detector, gys().channel, 50.0, 8);
        benchmark::DoNotOptimize(est);
    }
}
BENCHMARK(bm_decoy_yields);

void bm_sweep_serial(benchmark::State& state) {
    qkdrate::sweep_request req;
    req.protocol = qkdrate::protocol_id::sarg04_4;
    req.profile = gys();
    req.grid = qkdrate::make_grid(0.0, 100.0, 5.0);
    req.threads = 1;
    for (auto _ : state) {
        auto pts = qkdrate::sweep(req);
        benchmark::DoNotOptimize(pts);
    }
}
BENCHMARK(bm_sweep_serial);

void bm_sweep_optimized_mu(benchmark::State& state) {
    qkdrate::sweep_request req;
    req.protocol = qkdrate::protocol_id::bb84_wcp;
    req.profile = gys();
    req.grid = qkdrate::make_grid(0.0, 50.0, 10.0);
    req.optimize = qkdrate::optimize_vars::mu;
    req.threads = 1;
    for (auto _ : state) {
        auto pts = qkdrate::sweep(req);
        benchmark::DoNotOptimize(pts);
    }
}
BENCHMARK(bm_sweep_optimized_mu);

void bm_mc_wcp_pulses(benchmark::State& state) {
    qkdrate::mc_config cfg;
    cfg.profile = gys();
    cfg.pulses = static_cast<std::uint64_t>(state.range(0));
    cfg.mu = 0.1;
    cfg.L_km = 10.0;
    cfg.threads = 1;
    for (auto _ : state) {
        auto est = qkdrate::simulate_wcp_channel(cfg);
        benchmark::DoNotOptimize(est);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_mc_wcp_pulses)->Arg(10000)->Arg(100000);

void bm_golden_section(benchmark::State& state) {
    qkdrate::optimize_directive d;
    for (auto _ : state) {
        auto r = qkdrate::maximize_scalar(
            [](double x) { return x * std::exp(-x); }, d);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(bm_golden_section);

} // namespace

BENCHMARK_MAIN();
