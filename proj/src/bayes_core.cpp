#include "persuasion/bayes_core.hpp"

#include <cmath>

#include "persuasion/errors.hpp"

namespace persuasion {

constexpr double kZeroSignalTol = 1e-12;

SignalingScheme SignalingScheme::uninformative(int theta_count, int action) {
    SignalingScheme s;
    s.share_prob.assign(theta_count, action == 1 ? 1.0 : 0.0);
    return s;
}

void SignalingScheme::validate(int theta_count) const {
    if (size() != theta_count) throw DimensionError("scheme dimension does not match theta_count");
    for (double p : share_prob)
        if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) throw ValidationError("scheme probability outside [0,1]");
}

std::vector<double> signal_likelihood(const SignalingScheme& scheme, const ConfusionModel& confusion) {
    const int n = confusion.theta_count();
    scheme.validate(n);
    // column theta of Q dotted with the scheme
    return mat_t_vec(confusion.q_theta, scheme.share_prob);
}

std::vector<double> marginal_scheme(const SignalingScheme& scheme, const StateSpace& space) {
    scheme.validate(space.theta_count());
    std::vector<double> marginal(space.v_count, 0.0);
    for (int mhat = 0; mhat < space.m_count; ++mhat)
        for (int vhat = 0; vhat < space.v_count; ++vhat)
            marginal[vhat] += scheme.share_prob[space.flatten(mhat, vhat)];
    return marginal;
}

PosteriorResult posterior(const SignalingScheme& scheme, const Instance& instance, const ConfusionModel& confusion,
                          int signal) {
    const int n = instance.space.theta_count();
    if (confusion.theta_count() != n) throw DimensionError("confusion does not match instance");
    const std::vector<double> share_lik = signal_likelihood(scheme, confusion);

    PosteriorResult res;
    std::vector<double> unnorm(n);
    for (int theta = 0; theta < n; ++theta) {
        const double lik = signal == 1 ? share_lik[theta] : 1.0 - share_lik[theta];
        unnorm[theta] = instance.prior[theta] * lik;
        res.signal_prob += unnorm[theta];
    }
    if (res.signal_prob < kZeroSignalTol)
        throw ZeroProbabilitySignal("signal " + std::to_string(signal) + " has probability below 1e-12");

    for (double& p : unnorm) p /= res.signal_prob;
    res.true_posterior = Belief::make(SpaceTag::TrueSpace, std::move(unnorm));
    res.predicted_posterior = predicted_from_true(res.true_posterior, confusion);
    return res;
}

Belief predicted_from_true(const Belief& belief, const ConfusionModel& confusion) {
    if (belief.tag != SpaceTag::TrueSpace) throw SpaceTagError("predicted_from_true expects a true-space belief");
    if (belief.size() != confusion.theta_count()) throw DimensionError("belief does not match confusion");
    return Belief::make_signed(SpaceTag::PredictedSpace, mat_vec(confusion.q_theta, belief.probs));
}

Belief true_from_predicted(const Belief& belief, const ConfusionModel& confusion) {
    if (belief.tag != SpaceTag::PredictedSpace) throw SpaceTagError("true_from_predicted expects a predicted-space belief");
    if (belief.size() != confusion.theta_count()) throw DimensionError("belief does not match confusion");
    return Belief::make_signed(SpaceTag::TrueSpace, mat_vec(confusion.v_theta, belief.probs));
}

}  // namespace persuasion
