#pragma once
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace persuasion {

// Deterministic RNG wrapper. Doubles are derived from raw 64-bit draws rather
// than std::uniform_real_distribution, whose output is implementation-defined;
// reports produced with a fixed seed must be byte-identical across runs.
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(engine_() % static_cast<uint64_t>(hi - lo + 1));
    }

    // Point on the probability simplex (normalized exponentials).
    std::vector<double> simplex(int n) {
        std::vector<double> v(n);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            double u = uniform();
            if (u < 1e-300) u = 1e-300;
            v[i] = -std::log(u);
            sum += v[i];
        }
        for (int i = 0; i < n; ++i) v[i] /= sum;
        return v;
    }

    uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace persuasion
