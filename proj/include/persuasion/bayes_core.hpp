#pragma once
#include <vector>

#include "persuasion/state_model.hpp"

namespace persuasion {

// Two-signal action-recommendation scheme over predicted states: entry
// share_prob[theta_hat] = pi(1 | theta_hat), with pi(0 | .) = 1 - pi(1 | .).
struct SignalingScheme {
    std::vector<double> share_prob;

    static SignalingScheme uninformative(int theta_count, int action);
    int size() const { return static_cast<int>(share_prob.size()); }
    void validate(int theta_count) const;
};

// Effective true-state likelihood of the share signal:
// pitilde(theta) = sum_thetahat pi(1|thetahat) * Q[thetahat, theta].
std::vector<double> signal_likelihood(const SignalingScheme& scheme, const ConfusionModel& confusion);

// Marginal scheme revealed to users: entry vhat = sum_mhat pi(1 | mhat, vhat).
// Entries are sums across predicted misinformation states, so they lie in
// [0, m_count] rather than [0, 1].
std::vector<double> marginal_scheme(const SignalingScheme& scheme, const StateSpace& space);

struct PosteriorResult {
    double signal_prob = 0.0;
    Belief true_posterior;
    Belief predicted_posterior;
};

// Bayes update for one signal. Throws ZeroProbabilitySignal when the signal is
// sent with probability below 1e-12.
PosteriorResult posterior(const SignalingScheme& scheme, const Instance& instance, const ConfusionModel& confusion,
                          int signal);

// Belief transforms between the two spaces: predicted = Q * true, and
// true = V * predicted. The inverse direction can leave the simplex for
// predicted beliefs outside the image of the true simplex; the result is
// flagged via Belief::in_simplex rather than clamped.
Belief predicted_from_true(const Belief& belief, const ConfusionModel& confusion);
Belief true_from_predicted(const Belief& belief, const ConfusionModel& confusion);

}  // namespace persuasion
