#pragma once
#include <array>
#include <optional>

#include "persuasion/bayes_core.hpp"
#include "persuasion/lp_engine.hpp"
#include "persuasion/state_model.hpp"

namespace persuasion {

struct BestResponseDetail {
    int action = 1;
    bool user_indifferent = false;    // within 1e-9 on expected user utility
    bool double_indifferent = false;  // platform indifferent too; resolved to share
};

// User best response at a true-space belief: maximize expected user utility
// over the v-marginal; ties go to the platform-preferred action, double ties
// to share.
BestResponseDetail best_response_detail(const Instance& instance, const Belief& belief);
int best_response(const Instance& instance, const Belief& belief);

struct BaselineResult {
    int action = 1;
    double platform_utility = 0.0;
    double user_utility = 0.0;
};

// Utilities when no signal is sent and the user best-responds to the prior.
BaselineResult no_signal_baseline(const Instance& instance);

struct SignalOutcome {
    double probability = 0.0;
    Belief true_posterior;
    Belief predicted_posterior;
    int user_action = 1;
    bool user_indifferent = false;
    bool double_indifferent = false;
    double platform_value = 0.0;  // expected platform utility at the posterior
    double user_value = 0.0;
    double ic_slack = 0.0;  // recommended-action utility minus alternative
};

struct PersuasionSolution {
    SignalingScheme scheme;
    std::array<double, 2> signal_probs{0.0, 0.0};  // P(s=0), P(s=1)
    std::array<std::optional<SignalOutcome>, 2> posteriors;
    double platform_utility = 0.0;  // ex-ante
    double user_utility = 0.0;      // ex-ante
    double baseline_platform_utility = 0.0;
    double baseline_user_utility = 0.0;
    int baseline_action = 1;
    bool persuasive = false;
};

// Evaluates a given scheme: signal probabilities, posteriors, tie-broken user
// actions, ex-ante utilities and the persuasiveness flag. Zero-probability
// signals contribute no posterior.
PersuasionSolution evaluate_scheme(const Instance& instance, const ConfusionModel& confusion,
                                   const SignalingScheme& scheme);

// Builds and solves the optimal-signaling LP, then reconstructs the full
// solution. Falls back to the uninformative baseline-action scheme in the
// (theoretically impossible) infeasible case.
PersuasionSolution solve_optimal_scheme(const Instance& instance, const ConfusionModel& confusion);

// Corollary-2 check: user ex-ante utility minus the prior baseline. Negative
// beyond 1e-9 signals an implementation bug and throws WelfareViolation.
double user_welfare_check(const PersuasionSolution& solution);

}  // namespace persuasion
