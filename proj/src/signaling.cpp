#include "persuasion/signaling.hpp"

#include <cmath>

#include "persuasion/errors.hpp"

namespace persuasion {

namespace {

constexpr double kTieTol = 1e-9;
constexpr double kIcTol = 1e-7;
constexpr double kZeroSignalTol = 1e-12;

double expected_user_utility(const Instance& instance, const std::vector<double>& belief, int action) {
    double s = 0.0;
    for (int theta = 0; theta < instance.space.theta_count(); ++theta)
        s += belief[theta] * instance.w(action, instance.space.v_of(theta));
    return s;
}

double expected_platform_utility(const Instance& instance, const std::vector<double>& belief, int action) {
    double s = 0.0;
    for (int theta = 0; theta < instance.space.theta_count(); ++theta) s += belief[theta] * instance.u(action, theta);
    return s;
}

}  // namespace

BestResponseDetail best_response_detail(const Instance& instance, const Belief& belief) {
    if (belief.tag != SpaceTag::TrueSpace) throw SpaceTagError("best_response expects a true-space belief");
    if (belief.size() != instance.space.theta_count()) throw DimensionError("belief does not match instance");

    const double w0 = expected_user_utility(instance, belief.probs, 0);
    const double w1 = expected_user_utility(instance, belief.probs, 1);

    BestResponseDetail detail;
    if (std::abs(w1 - w0) > kTieTol) {
        detail.action = w1 > w0 ? 1 : 0;
        return detail;
    }
    detail.user_indifferent = true;
    const double u0 = expected_platform_utility(instance, belief.probs, 0);
    const double u1 = expected_platform_utility(instance, belief.probs, 1);
    if (std::abs(u1 - u0) > kTieTol) {
        detail.action = u1 > u0 ? 1 : 0;
    } else {
        detail.double_indifferent = true;
        detail.action = 1;
    }
    return detail;
}

int best_response(const Instance& instance, const Belief& belief) {
    return best_response_detail(instance, belief).action;
}

BaselineResult no_signal_baseline(const Instance& instance) {
    const Belief prior = Belief::make(SpaceTag::TrueSpace, instance.prior);
    BaselineResult res;
    res.action = best_response(instance, prior);
    res.platform_utility = expected_platform_utility(instance, instance.prior, res.action);
    res.user_utility = expected_user_utility(instance, instance.prior, res.action);
    return res;
}

PersuasionSolution evaluate_scheme(const Instance& instance, const ConfusionModel& confusion,
                                   const SignalingScheme& scheme) {
    PersuasionSolution sol;
    sol.scheme = scheme;

    const BaselineResult base = no_signal_baseline(instance);
    sol.baseline_action = base.action;
    sol.baseline_platform_utility = base.platform_utility;
    sol.baseline_user_utility = base.user_utility;

    const std::vector<double> share_lik = signal_likelihood(scheme, confusion);
    double p_share = 0.0;
    for (int theta = 0; theta < instance.space.theta_count(); ++theta)
        p_share += instance.prior[theta] * share_lik[theta];
    sol.signal_probs = {1.0 - p_share, p_share};

    sol.persuasive = true;
    for (int s = 0; s < 2; ++s) {
        if (sol.signal_probs[s] < kZeroSignalTol) continue;
        PosteriorResult post = posterior(scheme, instance, confusion, s);

        SignalOutcome out;
        out.probability = post.signal_prob;
        const BestResponseDetail br = best_response_detail(instance, post.true_posterior);
        out.user_indifferent = br.user_indifferent;
        out.double_indifferent = br.double_indifferent;
        out.ic_slack = expected_user_utility(instance, post.true_posterior.probs, s) -
                       expected_user_utility(instance, post.true_posterior.probs, 1 - s);
        if (out.ic_slack < -kIcTol) sol.persuasive = false;
        // A rational user follows an incentive-compatible recommendation (at
        // exact indifference the recommendation itself settles the tie); only
        // a non-persuasive branch falls back to the tie-broken best response.
        out.user_action = out.ic_slack >= -kIcTol ? s : br.action;
        out.platform_value = expected_platform_utility(instance, post.true_posterior.probs, out.user_action);
        out.user_value = expected_user_utility(instance, post.true_posterior.probs, out.user_action);

        out.true_posterior = std::move(post.true_posterior);
        out.predicted_posterior = std::move(post.predicted_posterior);

        sol.platform_utility += sol.signal_probs[s] * out.platform_value;
        sol.user_utility += sol.signal_probs[s] * out.user_value;
        sol.posteriors[s] = std::move(out);
    }
    return sol;
}

PersuasionSolution solve_optimal_scheme(const Instance& instance, const ConfusionModel& confusion) {
    const LPStandardForm lp = build_direct_lp(instance, confusion);
    const LPSolution lp_sol = solve_lp(lp);

    if (lp_sol.status == LPStatus::Unbounded)
        throw NumericalInstability("optimal-signaling LP reported unbounded");  // box bounds preclude this
    if (lp_sol.status == LPStatus::Infeasible) {
        const BaselineResult base = no_signal_baseline(instance);
        return evaluate_scheme(instance, confusion,
                               SignalingScheme::uninformative(instance.space.theta_count(), base.action));
    }

    SignalingScheme scheme;
    scheme.share_prob = lp_sol.variables;

    // The optimal face can be degenerate. Canonicalize by preferring the
    // scheme whose effective likelihood is L1-closest to all-ones, i.e. the
    // least-censoring optimum; this pins a unique deterministic solution.
    std::vector<double> share_mass(lp.num_vars(), 0.0);
    for (int th = 0; th < confusion.theta_count(); ++th)
        for (int t = 0; t < confusion.theta_count(); ++t) share_mass[th] += confusion.q_theta(th, t);
    const LPSolution canon = solve_lp_with_secondary(lp, lp_sol.objective_value, share_mass);
    if (canon.status == LPStatus::Optimal) scheme.share_prob = canon.variables;

    PersuasionSolution sol = evaluate_scheme(instance, confusion, scheme);
    if (std::abs(sol.platform_utility - lp_sol.objective_value) > 1e-8)
        throw NumericalInstability("reconstructed utility deviates from LP optimum by " +
                                   std::to_string(sol.platform_utility - lp_sol.objective_value));
    return sol;
}

double user_welfare_check(const PersuasionSolution& solution) {
    const double delta = solution.user_utility - solution.baseline_user_utility;
    if (delta < -1e-9)
        throw WelfareViolation("user welfare decreased by " + std::to_string(-delta) +
                               "; signaling must never hurt the user");
    return delta;
}

}  // namespace persuasion
