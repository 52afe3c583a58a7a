// Timing harness for the step kernels: serial reference vs OpenMP-parallel,
// with a bitwise cross-check of the final amplitudes. Usage:
//   bench_kernels [num_sites] [cutoff] [steps]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qca/evolution.hpp"
#include "qca/rng.hpp"

using namespace qca;

namespace {

double seconds_for(const StepApplier& applier, std::vector<cplx>& amp, int steps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int s = 0; s < steps; ++s) applier.apply_step(amp);
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

double seconds_for_measure(const std::vector<cplx>& amp, const LatticeSpec& spec,
                           Execution exec, int reps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) {
        volatile double sink = measure_amp(amp, spec, exec).total_n;
        (void)sink;
    }
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    const int num_sites = argc > 1 ? std::atoi(argv[1]) : 6;
    const int cutoff = argc > 2 ? std::atoi(argv[2]) : 4;
    const int steps = argc > 3 ? std::atoi(argv[3]) : 10;

    LatticeSpec spec(num_sites, cutoff, TruncationMode::CyclicWrap,
                     std::int64_t(1) << 28);
    spec.mass = 0.7;
    spec.coupling = 1.1;
    spec.epsilon = 0.05;
    spec.alpha = 1.0;
    const GateParams params = scaling_params(spec);

    std::printf("chain: N=%d Lambda=%d dim=%lld steps=%d\n", spec.num_sites,
                spec.cutoff, static_cast<long long>(spec.dim()), steps);
#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: compiled out (serial build)\n");
#endif

    // Random normalized initial amplitudes, shared by both kernels.
    std::vector<cplx> init(spec.dim());
    Rng rng(7);
    double n2 = 0.0;
    for (auto& a : init) {
        a = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        n2 += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : init) a *= inv;

    const StepApplier serial(spec, params, Execution::Serial);
    const StepApplier parallel(spec, params, Execution::Parallel);

    std::vector<cplx> amp_serial = init;
    std::vector<cplx> amp_parallel = init;
    serial.apply_step(amp_serial);  // warm caches / page in
    amp_serial = init;

    const double t_serial = seconds_for(serial, amp_serial, steps);
    const double t_parallel = seconds_for(parallel, amp_parallel, steps);

    const bool identical =
        std::memcmp(amp_serial.data(), amp_parallel.data(),
                    amp_serial.size() * sizeof(cplx)) == 0;

    std::printf("\n%-18s %10s %14s %10s\n", "kernel", "steps/s", "seconds",
                "speedup");
    std::printf("%-18s %10.2f %14.4f %10s\n", "step serial", steps / t_serial,
                t_serial, "1.00x");
    std::printf("%-18s %10.2f %14.4f %9.2fx\n", "step parallel", steps / t_parallel,
                t_parallel, t_serial / t_parallel);

    const int reps = 20;
    const double m_serial =
        seconds_for_measure(amp_serial, spec, Execution::Serial, reps);
    const double m_parallel =
        seconds_for_measure(amp_serial, spec, Execution::Parallel, reps);
    std::printf("%-18s %10.2f %14.4f %10s\n", "measure serial", reps / m_serial,
                m_serial, "1.00x");
    std::printf("%-18s %10.2f %14.4f %9.2fx\n", "measure parallel",
                reps / m_parallel, m_parallel, m_serial / m_parallel);

    std::printf("\nserial/parallel final states bitwise identical: %s\n",
                identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
