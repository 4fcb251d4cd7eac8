#include <benchmark/benchmark.h>

#include "nettrack/linalg.hpp"
#include "nettrack/model.hpp"
#include "nettrack/norm_design.hpp"
#include "nettrack/scalar_design.hpp"

namespace {

using namespace nettrack;

Matrix random_sym(int n, std::uint64_t seed) {
    Matrix M = zeros(n, n);
    std::uint64_t s = seed;
    auto next = [&s]() {
        s += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return double((z ^ (z >> 31)) >> 11) * 0x1.0p-53;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) M(i, j) = M(j, i) = next() - 0.5;
    return M;
}

void BM_sym_eigen(benchmark::State& state) {
    const int n = int(state.range(0));
    const Matrix M = random_sym(n, 1);
    for (auto _ : state) {
        Spectrum sp = sym_eigen(M);
        benchmark::DoNotOptimize(sp.eigenvalues);
    }
}
BENCHMARK(BM_sym_eigen)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_spectral_norm(benchmark::State& state) {
    const int n = int(state.range(0));
    const Matrix M = random_sym(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(spectral_norm(M));
}
BENCHMARK(BM_spectral_norm)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_dlyap(benchmark::State& state) {
    const int n = int(state.range(0));
    Matrix P = random_sym(n, 3);
    const double rho = spectral_radius(P);
    for (double& x : P.a) x *= 0.8 / rho;
    Matrix Q = random_sym(n, 4);
    Q = Q * transpose(Q);
    for (auto _ : state) {
        Matrix S = dlyap(P, Q);
        benchmark::DoNotOptimize(S.a);
    }
}
BENCHMARK(BM_dlyap)->Arg(8)->Arg(16)->Arg(32);

void BM_scalar_report(benchmark::State& state) {
    const int N = int(state.range(0));
    Plant p = make_canonical_scalar(circulant(N, 2));
    for (auto _ : state) {
        ScalarGainReport rep = scalar_capacity(p);
        benchmark::DoNotOptimize(rep.C_alpha);
    }
}
BENCHMARK(BM_scalar_report)->Arg(6)->Arg(12)->Arg(24);

void BM_compute_ntc(benchmark::State& state) {
    const int N = int(state.range(0));
    Plant p = make_canonical_scalar(circulant(N, 1));
    NtcOptions opts;
    opts.max_iters = 400;
    for (auto _ : state) {
        CapacityReport rep = compute_ntc(p, opts);
        benchmark::DoNotOptimize(rep.achieved_norm);
    }
}
BENCHMARK(BM_compute_ntc)->Arg(4)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
