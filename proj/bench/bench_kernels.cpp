// Timing comparison of the OpenMP level kernels against the naive serial
// recursions, plus the batched Fourier path against scalar evaluation.
// Build target: bench_kernels (not part of the test suite).

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cascadelab/cascade.hpp"
#include "cascadelab/fourier.hpp"
#include "cascadelab/weights.hpp"

using namespace cascadelab;

namespace {

using Clock = std::chrono::steady_clock;

double time_once(const std::function<double()>& fn, double& checksum) {
    const auto t0 = Clock::now();
    checksum += fn();
    const auto t1 = Clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

double best_of(int reps, const std::function<double()>& fn, double& checksum) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) best = std::min(best, time_once(fn, checksum));
    return best;
}

void row(const char* name, double serial, double parallel) {
    std::printf("%-28s %12.6f s %12.6f s %8.2fx\n", name, serial, parallel,
                serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
    int n = 22;
    int reps = 3;
    if (argc > 1) n = std::stoi(argv[1]);
    if (argc > 2) reps = std::stoi(argv[2]);

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("depth n = %d, best of %d, %d thread(s)\n\n", n, reps, threads);
    std::printf("%-28s %14s %14s %9s\n", "kernel", "serial ref", "production", "speedup");

    const CascadeRealization r(WeightLaw::uniform(), 0xBE7C4ull, 1, n + 2);
    double sink = 0.0;

    row("martingale_m2",
        best_of(reps, [&] { return serial_ref::martingale_m2(r, n); }, sink),
        best_of(reps, [&] { return martingale_m2(r, n); }, sink));
    row("sup_Y",
        best_of(reps, [&] { return serial_ref::sup_Y(r, n); }, sink),
        best_of(reps, [&] { return sup_Y(r, n); }, sink));
    row("extremal_logmass",
        best_of(reps, [&] { return serial_ref::extremal_logmass(r, n).max_S; }, sink),
        best_of(reps, [&] { return extremal_logmass(r, n).max_S; }, sink));

    // Fourier: 256 frequencies one by one vs one shared-DFS batch.
    const int fn = std::min(n, 16);
    std::vector<long long> freqs;
    for (long long s = 1; s <= 256; ++s) freqs.push_back(s);
    row("mu_hat x256 vs batch",
        best_of(reps,
                [&] {
                    double acc = 0.0;
                    for (long long s : freqs) acc += std::abs(mu_hat(r, fn, s));
                    return acc;
                },
                sink),
        best_of(reps,
                [&] {
                    double acc = 0.0;
                    for (const cplx& v : mu_hat_batch(r, fn, freqs)) acc += std::abs(v);
                    return acc;
                },
                sink));

    std::printf("\nchecksum %.6g\n", sink);
    return 0;
}
