#include "persuasion/performative.hpp"

#include <cmath>

#include "persuasion/bayes_core.hpp"
#include "persuasion/errors.hpp"
#include "persuasion/lp_engine.hpp"

namespace persuasion {

namespace {

constexpr double kZeroSignalTol = 1e-12;
constexpr double kStabilityTol = 1e-12;
constexpr double kSegmentTol = 1e-6;

// Tie-break LP over the optimal face: auxiliary variables d bound the
// coordinatewise deviation |y - (sum y) target| with y(theta_hat) =
// mu_hat(theta_hat) pi(theta_hat), the unnormalized share posterior in
// predicted space. Minimizing sum d picks the scheme whose share posterior is
// L1-closest to the target.
LPStandardForm make_tiebreak_lp(const LPStandardForm& base, const std::vector<double>& mu_hat,
                                const std::vector<double>& target) {
    const int n = base.num_vars();
    const int m = base.num_rows();

    LPStandardForm ext;
    ext.objective.assign(2 * n, 0.0);
    for (int j = 0; j < n; ++j) ext.objective[j] = base.objective[j];
    ext.objective_constant = base.objective_constant;

    ext.inequality_matrix = Matrix(m + 2 * n, 2 * n);
    ext.inequality_rhs.assign(m + 2 * n, 0.0);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) ext.inequality_matrix(i, j) = base.inequality_matrix(i, j);
        ext.inequality_rhs[i] = base.inequality_rhs[i];
    }
    for (int t = 0; t < n; ++t) {
        const int row_a = m + 2 * t;      // d_t - y_t + (sum y) target_t >= 0
        const int row_b = m + 2 * t + 1;  // d_t + y_t - (sum y) target_t >= 0
        for (int j = 0; j < n; ++j) {
            const double coupling = mu_hat[j] * target[t];
            ext.inequality_matrix(row_a, j) = coupling - (j == t ? mu_hat[t] : 0.0);
            ext.inequality_matrix(row_b, j) = -coupling + (j == t ? mu_hat[t] : 0.0);
        }
        ext.inequality_matrix(row_a, n + t) = 1.0;
        ext.inequality_matrix(row_b, n + t) = 1.0;
    }
    ext.lower_bounds.assign(2 * n, 0.0);
    ext.upper_bounds.assign(2 * n, 2.0);
    for (int j = 0; j < n; ++j) ext.upper_bounds[j] = 1.0;
    return ext;
}

double projection_alpha(const std::vector<double>& point, const std::vector<double>& seg_lo,
                        const std::vector<double>& seg_hi, double* residual_out) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < point.size(); ++i) {
        const double d = seg_hi[i] - seg_lo[i];
        num += (point[i] - seg_lo[i]) * d;
        den += d * d;
    }
    double alpha = den > 1e-24 ? num / den : 1.0;
    alpha = std::min(1.0, std::max(0.0, alpha));
    if (residual_out) {
        double res = 0.0;
        for (size_t i = 0; i < point.size(); ++i) {
            const double on_seg = seg_lo[i] + alpha * (seg_hi[i] - seg_lo[i]);
            res = std::max(res, std::abs(point[i] - on_seg));
        }
        *residual_out = res;
    }
    return alpha;
}

}  // namespace

void PerformativeConfig::validate() const {
    if (lambda < 0.0 || lambda > 1.0) throw ValidationError("lambda must be in [0,1]");
    if (max_rounds <= 0) throw ValidationError("max_rounds must be positive");
    if (!(tolerance > 0.0)) throw ValidationError("tolerance must be positive");
}

Belief performative_step(const Instance& instance, const ConfusionModel& confusion,
                         const PersuasionSolution& solution, double lambda) {
    (void)confusion;
    if (solution.signal_probs[1] < kZeroSignalTol || !solution.posteriors[1])
        return Belief::make(SpaceTag::TrueSpace, instance.prior);

    const std::vector<double>& share_post = solution.posteriors[1]->true_posterior.probs;
    std::vector<double> next(instance.prior.size());
    for (size_t i = 0; i < next.size(); ++i) next[i] = lambda * instance.prior[i] + (1.0 - lambda) * share_post[i];
    return Belief::make(SpaceTag::TrueSpace, std::move(next));
}

double normalization_shift(const Instance& instance) {
    double c_n = -std::numeric_limits<double>::infinity();
    for (int theta = 0; theta < instance.space.theta_count(); ++theta) c_n = std::max(c_n, instance.u(0, theta));
    return c_n;
}

bool monotone_hypothesis_holds(const Instance& instance) {
    const BaselineResult base = no_signal_baseline(instance);
    return base.action == 1 && base.platform_utility - normalization_shift(instance) > 0.0;
}

PerformativeTrace run_performative(const Instance& instance, const ConfusionModel& confusion,
                                   const PerformativeConfig& config) {
    config.validate();

    PerformativeTrace trace;
    trace.lambda = config.lambda;
    trace.normalized = config.normalize;
    trace.normalization_shift = config.normalize ? normalization_shift(instance) : 0.0;

    std::vector<double> mu = instance.prior;
    std::optional<std::vector<double>> prev_share_pred;
    std::optional<std::vector<double>> seg_lo_pred;  // rho_hat^0_0
    std::optional<std::vector<double>> seg_hi_pred;  // rho_hat^1_0

    for (int round = 0; round < config.max_rounds; ++round) {
        const Instance inst_t = instance.with_prior(mu);
        PersuasionSolution sol;
        try {
            if (!prev_share_pred) {
                sol = solve_optimal_scheme(inst_t, confusion);
            } else {
                const LPStandardForm lp = build_direct_lp(inst_t, confusion);
                const LPSolution lp_sol = solve_lp(lp);
                if (lp_sol.status != LPStatus::Optimal)
                    throw NumericalInstability("signaling LP did not reach optimality");

                SignalingScheme scheme;
                scheme.share_prob = lp_sol.variables;
                const std::vector<double> mu_hat = mat_vec(confusion.q_theta, mu);
                const LPStandardForm ext = make_tiebreak_lp(lp, mu_hat, *prev_share_pred);
                std::vector<double> secondary(ext.num_vars(), 0.0);
                for (int j = lp.num_vars(); j < ext.num_vars(); ++j) secondary[j] = -1.0;
                const LPSolution tie = solve_lp_with_secondary(ext, lp_sol.objective_value, secondary);
                if (tie.status == LPStatus::Optimal)
                    scheme.share_prob.assign(tie.variables.begin(), tie.variables.begin() + lp.num_vars());
                sol = evaluate_scheme(inst_t, confusion, scheme);
                if (std::abs(sol.platform_utility - lp_sol.objective_value) > 1e-7)
                    throw NumericalInstability("tie-broken scheme left the optimal face");
            }
        } catch (const Error& e) {
            throw NumericalInstability("round " + std::to_string(round) + ": " + e.what());
        }

        PerformativeRound rec;
        rec.prior = Belief::make(SpaceTag::TrueSpace, mu);
        rec.platform_utility = sol.platform_utility - trace.normalization_shift;

        const bool degenerate = sol.signal_probs[1] < kZeroSignalTol || !sol.posteriors[1];

        if (round == 0 && !degenerate) {
            trace.target_posterior = sol.posteriors[1]->true_posterior;
            trace.target_predicted = sol.posteriors[1]->predicted_posterior.probs;
            seg_hi_pred = sol.posteriors[1]->predicted_posterior.probs;
            if (sol.posteriors[0]) seg_lo_pred = sol.posteriors[0]->predicted_posterior.probs;
        }

        const std::vector<double> mu_hat = mat_vec(confusion.q_theta, mu);
        if (trace.target_predicted) {
            double dist = 0.0;
            for (size_t i = 0; i < mu_hat.size(); ++i)
                dist = std::max(dist, std::abs(mu_hat[i] - (*trace.target_predicted)[i]));
            rec.distance_to_target = dist;
            if (!trace.converged_at && dist <= config.tolerance) trace.converged_at = round;
        }
        if (seg_lo_pred && seg_hi_pred) {
            double residual = 0.0;
            rec.alpha = projection_alpha(mu_hat, *seg_lo_pred, *seg_hi_pred, &residual);
            if (residual > kSegmentTol && !trace.segment_violation_at) trace.segment_violation_at = round;
        }

        if (degenerate) {
            if (!trace.degenerate_at) trace.degenerate_at = round;
            if (!trace.stable_at) trace.stable_at = round;  // frozen prior repeats exactly
            rec.solution = std::move(sol);
            trace.rounds.push_back(std::move(rec));
            break;
        }

        const Belief next = performative_step(inst_t, confusion, sol, config.lambda);
        double step = 0.0;
        for (size_t i = 0; i < mu.size(); ++i) step = std::max(step, std::abs(next.probs[i] - mu[i]));

        prev_share_pred = sol.posteriors[1]->predicted_posterior.probs;
        rec.solution = std::move(sol);
        trace.rounds.push_back(std::move(rec));

        if (step <= kStabilityTol) {
            trace.stable_at = round;
            break;
        }
        mu = next.probs;
    }

    trace.monotone_utility = true;
    for (size_t t = 1; t < trace.rounds.size(); ++t)
        if (trace.rounds[t].platform_utility < trace.rounds[t - 1].platform_utility - 1e-9)
            trace.monotone_utility = false;
    return trace;
}

bool check_monotone_utility(const PerformativeTrace& trace, const Instance& instance) {
    if (trace.lambda != 0.0) throw PreconditionError("monotone-utility check requires a lambda = 0 trace");
    const double shift = trace.normalized ? 0.0 : normalization_shift(instance);
    for (size_t t = 1; t < trace.rounds.size(); ++t) {
        const double prev = trace.rounds[t - 1].platform_utility - shift;
        const double cur = trace.rounds[t].platform_utility - shift;
        if (cur < prev - 1e-9) return false;
    }
    return true;
}

}  // namespace persuasion
