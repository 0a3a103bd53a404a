#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "persuasion/state_model.hpp"

namespace persuasion {

struct PropertyResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Randomized invariant suites over instances shaped like the given scenario:
// Bayes plausibility, persuasiveness, welfare, oracle sandwich, stability
// bound, geometric rate, and the continuity probe. Deterministic given
// (scenario, seed, trials); results are reported in a fixed order.
std::vector<PropertyResult> run_verification(const Instance& scenario_instance, uint64_t seed, int trials);

}  // namespace persuasion
