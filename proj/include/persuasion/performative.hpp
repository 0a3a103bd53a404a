#pragma once
#include <optional>
#include <vector>

#include "persuasion/signaling.hpp"
#include "persuasion/state_model.hpp"

namespace persuasion {

struct PerformativeConfig {
    double lambda = 0.0;  // in [0, 1]; weight of the previous prior
    int max_rounds = 32;
    double tolerance = 1e-6;  // convergence epsilon on predicted-space distance
    bool normalize = false;   // report utilities shifted by c_n = max_theta u(0, theta)

    void validate() const;
};

struct PerformativeRound {
    Belief prior;               // true-space prior at this round
    PersuasionSolution solution;
    double alpha = 1.0;         // projection coordinate on the round-0 posterior segment
    double platform_utility = 0.0;  // solution value, normalized when configured
    double distance_to_target = 0.0;  // || mu_hat_t - rho_hat^1_0 ||_inf
};

struct PerformativeTrace {
    std::vector<PerformativeRound> rounds;
    std::optional<Belief> target_posterior;  // rho^1_0, the round-0 share posterior (true space)
    std::optional<std::vector<double>> target_predicted;
    std::optional<int> converged_at;
    std::optional<int> stable_at;
    std::optional<int> degenerate_at;          // first round with P(s=1) = 0
    std::optional<int> segment_violation_at;   // prior left the posterior segment beyond 1e-6
    bool monotone_utility = false;
    double lambda = 0.0;
    bool normalized = false;
    double normalization_shift = 0.0;  // c_n
};

// One prior update: lambda * mu_t + (1 - lambda) * rho_t(theta | s = 1).
// When the share signal is never sent the prior is returned unchanged; the
// caller records the degeneracy.
Belief performative_step(const Instance& instance, const ConfusionModel& confusion,
                         const PersuasionSolution& solution, double lambda);

// Runs the stateful process: each round solves the signaling LP at the current
// prior, breaking optimal-face ties toward the previous round's share
// posterior (L1 distance in predicted space via a secondary LP). Terminates on
// stability (prior repeats within 1e-12), degeneracy, or max_rounds.
PerformativeTrace run_performative(const Instance& instance, const ConfusionModel& confusion,
                                   const PerformativeConfig& config);

// Theorem hypothesis for monotone convergence: share is the default action at
// the prior and the normalized baseline utility is positive.
bool monotone_hypothesis_holds(const Instance& instance);

double normalization_shift(const Instance& instance);  // c_n = max_theta u(0, theta)

// True iff normalized per-round utilities are non-decreasing. Requires a
// lambda = 0 trace (PreconditionError otherwise).
bool check_monotone_utility(const PerformativeTrace& trace, const Instance& instance);

}  // namespace persuasion
