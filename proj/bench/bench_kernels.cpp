// Timing comparison between the serial reference kernels and their
// OpenMP-parallel counterparts. Results must match bit for bit; the unit
// suite asserts that, this target reports the speedup.

#include <chrono>
#include <cstdio>
#include <cstring>

#include "persuasion/analysis.hpp"
#include "persuasion/random_instances.hpp"
#include "persuasion/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace persuasion;

namespace {

template <typename F>
double time_s(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp not enabled; both columns run serial code\n");
#endif

    Rng rng(7);
    const Instance inst = random_instance(rng, 2, 2);
    const ConfusionModel conf = random_confusion(rng, 2, 2);

    std::printf("%-34s %10s %10s %8s\n", "kernel", "serial[s]", "parallel[s]", "speedup");

    {
        OracleResult serial_res, parallel_res;
        const double ts = time_s([&] { serial_res = brute_force_value_serial(inst, conf, 1.0 / 40.0); });
        const double tp = time_s([&] { parallel_res = brute_force_value(inst, conf, 1.0 / 40.0); });
        const bool same = std::memcmp(&serial_res.value, &parallel_res.value, sizeof(double)) == 0;
        std::printf("%-34s %10.3f %10.3f %7.2fx %s\n", "grid oracle (41^4 points)", ts, tp, ts / tp,
                    same ? "" : "MISMATCH");
    }
    {
        double serial_val = 0.0, parallel_val = 0.0;
        const double ts = time_s([&] { serial_val = concavification_value_serial(inst, conf, 0.01); });
        const double tp = time_s([&] { parallel_val = concavification_value(inst, conf, 0.01); });
        const bool same = std::memcmp(&serial_val, &parallel_val, sizeof(double)) == 0;
        std::printf("%-34s %10.3f %10.3f %7.2fx %s\n", "concavification (step 0.01)", ts, tp, ts / tp,
                    same ? "" : "MISMATCH");
    }
    return 0;
}
