#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "kgioh/inflation.hpp"
#include "kgioh/operator_lab.hpp"
#include "kgioh/phase_transition.hpp"
#include "kgioh/specfun.hpp"
#include "kgioh/thermo.hpp"

using namespace kgioh;

static void BM_PcfSeries(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(specfun::pcf_d(0.3, cplx(1.5, 0.7)).value);
}
BENCHMARK(BM_PcfSeries);

static void BM_PcfBand(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(specfun::pcf_d(cplx(-0.5, 0.25), cplx(7.0, 7.0)).value);
}
BENCHMARK(BM_PcfBand);

static void BM_PcfAsymptotic(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(specfun::pcf_d(0.3, cplx(20.0, 3.0)).value);
}
BENCHMARK(BM_PcfAsymptotic);

static void BM_ThermoComplex(benchmark::State& st) {
    ModelParams p;
    const double beta = st.range(0) / 10.0;
    TruncationPolicy trunc;
    trunc.n_max = 2000000;
    for (auto _ : st) benchmark::DoNotOptimize(thermo(beta, p, trunc).ln_z);
}
BENCHMARK(BM_ThermoComplex)->Arg(2)->Arg(10)->Arg(70);

static void BM_ThermoReference(benchmark::State& st) {
    ModelParams p;
    p.hermitian_reference = true;
    for (auto _ : st) benchmark::DoNotOptimize(thermo(1.0, p, TruncationPolicy{}).ln_z);
}
BENCHMARK(BM_ThermoReference);

static void BM_VerifyChain(benchmark::State& st) {
    ModelParams p;
    for (auto _ : st) benchmark::DoNotOptimize(oplab::verify_chain(static_cast<int>(st.range(0)), p).res_vx);
}
BENCHMARK(BM_VerifyChain)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_EosSweep(benchmark::State& st) {
    InflationConfig c;
    c.v0 = 1e3;
    std::vector<double> beta;
    for (int i = 0; i < 61; ++i) beta.push_back(std::pow(10.0, 2.0 - 6.0 * i / 60.0));
    for (auto _ : st) benchmark::DoNotOptimize(inflation_eos(c, beta, TruncationPolicy{}).size());
}
BENCHMARK(BM_EosSweep);

static void BM_PtSweep(benchmark::State& st) {
    PhaseTransitionConfig c;
    TruncationPolicy trunc;
    trunc.n_max = 2000000;
    std::vector<double> grid;
    for (int i = 0; i <= 12; ++i) grid.push_back(1.0 - std::pow(10.0, -1.0 - 3.0 * i / 12.0));
    for (auto _ : st) benchmark::DoNotOptimize(pt_sweep(c, grid, trunc).size());
}
BENCHMARK(BM_PtSweep)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
