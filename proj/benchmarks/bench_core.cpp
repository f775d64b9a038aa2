#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "vegpat/normal_form.hpp"
#include "vegpat/ode.hpp"
#include "vegpat/pde.hpp"
#include "vegpat/turing.hpp"

using namespace vegpat;

namespace {

ModelParams th_family() {
    ModelParams p;
    p.theta1 = 5.0;
    p.theta2 = 0.8;
    p.d2 = 0.01;
    p.l = 3.0;
    return p;
}

void bm_equilibria(benchmark::State& state) {
    ModelParams p;
    p.theta1 = 2.5;
    p.theta2 = 0.18;
    p.R = 8.8;
    for (auto _ : state) benchmark::DoNotOptimize(find_positive_equilibria(p));
}
BENCHMARK(bm_equilibria);

void bm_hopf_scan(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(hopf_points(th_family(), 1.2, 2.0));
}
BENCHMARK(bm_hopf_scan)->Unit(benchmark::kMillisecond);

void bm_th_points(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(th_points(th_family(), 1.5, 1.65));
}
BENCHMARK(bm_th_points)->Unit(benchmark::kMillisecond);

void bm_normal_form(benchmark::State& state) {
    ModelParams p = th_family();
    const auto ths = th_points(p, 1.5, 1.65);
    for (auto _ : state) benchmark::DoNotOptimize(nf_coeffs(p, ths[0]));
}
BENCHMARK(bm_normal_form)->Unit(benchmark::kMillisecond);

void bm_ode_integrate(benchmark::State& state) {
    ModelParams p = th_family();
    p.R = 1.5;
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate_ode(p, {7.0, 1.0}, 2000.0));
}
BENCHMARK(bm_ode_integrate)->Unit(benchmark::kMillisecond);

void bm_pde_step(benchmark::State& state) {
    ModelParams p = th_family();
    p.R = 1.5746872;
    p.d1 = 0.0411414;
    const int nx = static_cast<int>(state.range(0));
    const auto x = pde_grid(nx, p.l);
    std::vector<double> w0(nx), b0(nx);
    for (int i = 0; i < nx; ++i) {
        w0[i] = 6.91998 + 0.1 * std::cos(x[i]);
        b0[i] = 1.05093 + 0.1 * std::cos(x[i]);
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_pde(p, w0, b0, 100.0, 1e-3, 8));
}
BENCHMARK(bm_pde_step)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
