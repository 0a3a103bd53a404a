#include "persuasion/verify.hpp"

#include <cmath>
#include <cstdio>

#include "persuasion/analysis.hpp"
#include "persuasion/bayes_core.hpp"
#include "persuasion/lp_engine.hpp"
#include "persuasion/performative.hpp"
#include "persuasion/random_instances.hpp"
#include "persuasion/signaling.hpp"

namespace persuasion {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), pattern, a, b);
    return buf;
}

PropertyResult bayes_plausibility_suite(Rng& rng, int m_count, int v_count, int trials) {
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Instance inst = random_instance(rng, m_count, v_count);
        const ConfusionModel conf = random_confusion(rng, m_count, v_count);
        SignalingScheme scheme;
        scheme.share_prob = random_scheme(rng, inst.space.theta_count());
        const PersuasionSolution sol = evaluate_scheme(inst, conf, scheme);

        const std::vector<double> mu_hat = mat_vec(conf.q_theta, inst.prior);
        for (int theta = 0; theta < inst.space.theta_count(); ++theta) {
            double avg_true = 0.0, avg_pred = 0.0;
            for (int s = 0; s < 2; ++s) {
                if (!sol.posteriors[s]) continue;
                avg_true += sol.signal_probs[s] * sol.posteriors[s]->true_posterior.probs[theta];
                avg_pred += sol.signal_probs[s] * sol.posteriors[s]->predicted_posterior.probs[theta];
            }
            worst = std::max(worst, std::abs(avg_true - inst.prior[theta]));
            worst = std::max(worst, std::abs(avg_pred - mu_hat[theta]));
        }
    }
    return {"bayes-plausibility", worst <= 1e-9, fmt("max deviation %.3g (tol 1e-9)", worst)};
}

PropertyResult persuasiveness_suite(Rng& rng, int m_count, int v_count, int trials) {
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Instance inst = random_instance(rng, m_count, v_count);
        const ConfusionModel conf =
            t % 3 == 0 ? ConfusionModel::identity(inst.space) : random_confusion(rng, m_count, v_count);
        const PersuasionSolution sol = solve_optimal_scheme(inst, conf);
        for (int s = 0; s < 2; ++s)
            if (sol.posteriors[s]) worst = std::min(worst, sol.posteriors[s]->ic_slack);
    }
    return {"persuasiveness", worst >= -1e-7, fmt("min IC slack %.3g (tol -1e-7)", worst)};
}

PropertyResult welfare_suite(Rng& rng, int m_count, int v_count, int trials) {
    double worst_user = 0.0, worst_platform = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Instance inst = random_instance(rng, m_count, v_count);
        const ConfusionModel conf =
            t % 3 == 0 ? ConfusionModel::identity(inst.space) : random_confusion(rng, m_count, v_count);
        const PersuasionSolution sol = solve_optimal_scheme(inst, conf);
        worst_user = std::min(worst_user, sol.user_utility - sol.baseline_user_utility);
        worst_platform = std::min(worst_platform, sol.platform_utility - sol.baseline_platform_utility);
    }
    const bool pass = worst_user >= -1e-9 && worst_platform >= -1e-9;
    return {"welfare", pass, fmt("min user gain %.3g, min platform gain %.3g (tol -1e-9)", worst_user, worst_platform)};
}

PropertyResult oracle_sandwich_suite(Rng& rng, int m_count, int v_count, int trials) {
    if (m_count * v_count > 4) {
        m_count = 2;
        v_count = 2;  // keep the grid affordable; dimensions reported below
    }
    const double step = 0.05;
    double worst_low = 0.0, worst_high = 0.0;
    bool pass = true;
    for (int t = 0; t < trials; ++t) {
        const Instance inst = random_instance(rng, m_count, v_count);
        const ConfusionModel conf =
            t % 2 == 0 ? ConfusionModel::identity(inst.space) : random_confusion(rng, m_count, v_count);
        const double lp_value = solve_lp(build_direct_lp(inst, conf)).objective_value;
        const OracleResult oracle = brute_force_value(inst, conf, step);

        double u_lo = 1e300, u_hi = -1e300;
        for (double u : inst.platform_utility.data) {
            u_lo = std::min(u_lo, u);
            u_hi = std::max(u_hi, u);
        }
        const double slack = step * (u_hi - u_lo) * inst.space.theta_count();
        worst_low = std::min(worst_low, lp_value - oracle.value);
        worst_high = std::max(worst_high, lp_value - oracle.value - slack);
        if (lp_value < oracle.value - 1e-9 || lp_value - oracle.value > slack) pass = false;
    }
    return {"oracle-sandwich", pass, fmt("min(lp-oracle) %.3g, max excess over grid bound %.3g", worst_low, worst_high)};
}

PropertyResult stability_bound_suite(Rng& rng, int m_count, int v_count, int trials) {
    bool pass = true;
    int worst_round = 0;
    for (int t = 0; t < trials; ++t) {
        const Instance inst = random_instance(rng, m_count, v_count);
        const ConfusionModel conf = ConfusionModel::identity(inst.space);
        PerformativeConfig cfg;
        cfg.lambda = 0.0;
        cfg.max_rounds = 2 * inst.space.theta_count() + 4;
        const PerformativeTrace trace = run_performative(inst, conf, cfg);
        const int bound = 2 * (inst.space.theta_count() - 1);
        if (!trace.stable_at || *trace.stable_at > bound) {
            pass = false;
            worst_round = trace.stable_at ? *trace.stable_at : cfg.max_rounds;
        } else {
            worst_round = std::max(worst_round, *trace.stable_at);
        }
    }
    return {"stability-bound", pass, fmt("max stable_at %.0f (bound 2(|Theta|-1))", static_cast<double>(worst_round))};
}

PropertyResult geometric_rate_suite(Rng& rng, int m_count, int v_count, int trials) {
    const double lambda = 0.5;
    double worst_ratio_err = 0.0, worst_alpha_err = 0.0;
    int used = 0;
    for (int t = 0; t < trials && used < std::max(5, trials / 2); ++t) {
        const Instance inst = random_instance(rng, m_count, v_count);
        const ConfusionModel conf = ConfusionModel::identity(inst.space);
        const PersuasionSolution probe = solve_optimal_scheme(inst, conf);
        if (!probe.posteriors[0] || !probe.posteriors[1]) continue;
        if (probe.platform_utility < probe.baseline_platform_utility + 1e-3) continue;
        ++used;

        PerformativeConfig cfg;
        cfg.lambda = lambda;
        cfg.max_rounds = 10;
        cfg.tolerance = 1e-9;
        const PerformativeTrace trace = run_performative(inst, conf, cfg);
        for (size_t r = 1; r < trace.rounds.size(); ++r) {
            const double prev = trace.rounds[r - 1].distance_to_target;
            const double cur = trace.rounds[r].distance_to_target;
            if (prev >= 1e-4) worst_ratio_err = std::max(worst_ratio_err, std::abs(cur / prev - lambda));
            const double predicted = (1.0 - lambda) + lambda * trace.rounds[r - 1].alpha;
            worst_alpha_err = std::max(worst_alpha_err, std::abs(trace.rounds[r].alpha - predicted));
        }
    }
    const bool pass = worst_ratio_err <= 1e-6 && worst_alpha_err <= 1e-8;
    return {"geometric-rate", pass, fmt("max |ratio-lambda| %.3g, max alpha error %.3g", worst_ratio_err, worst_alpha_err)};
}

PropertyResult continuity_probe_suite(Rng& rng, int m_count, int v_count, int trials) {
    bool pass = true;
    double worst_ratio = 0.0;
    const int probes = std::max(1, trials / 10);
    for (int t = 0; t < probes; ++t) {
        const Instance inst = random_instance(rng, m_count, v_count);
        const ConfusionModel base = ConfusionModel::identity(inst.space);
        double prev_delta = 1e300;
        for (double delta : {0.04, 0.02, 0.01}) {
            Matrix q_v = Matrix::identity(v_count);
            for (int j = 0; j < v_count; ++j) {
                q_v(j, j) = 1.0 - delta;
                q_v((j + 1) % v_count, j) += delta;
            }
            const ConfusionModel perturbed = ConfusionModel::build(Matrix::identity(m_count), q_v);
            const LipschitzReport report = lipschitz_probe(inst, base, perturbed);
            if (report.delta_u > prev_delta + 1e-9) pass = false;
            if (report.ratio > report.bound_estimate) pass = false;
            worst_ratio = std::max(worst_ratio, report.bound_estimate > 0 ? report.ratio / report.bound_estimate : 0.0);
            prev_delta = report.delta_u;
        }
    }
    return {"continuity-probe", pass, fmt("max ratio/bound %.3g (must be <= 1)", worst_ratio)};
}

}  // namespace

std::vector<PropertyResult> run_verification(const Instance& scenario_instance, uint64_t seed, int trials) {
    const int m_count = scenario_instance.space.m_count;
    const int v_count = scenario_instance.space.v_count;

    std::vector<PropertyResult> results;
    {
        Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
        results.push_back(bayes_plausibility_suite(rng, m_count, v_count, trials));
    }
    {
        Rng rng(seed ^ 0xc2b2ae3d27d4eb4full);
        results.push_back(persuasiveness_suite(rng, m_count, v_count, trials));
    }
    {
        Rng rng(seed ^ 0x165667b19e3779f9ull);
        results.push_back(welfare_suite(rng, m_count, v_count, trials));
    }
    {
        Rng rng(seed ^ 0x27d4eb2f165667c5ull);
        results.push_back(oracle_sandwich_suite(rng, m_count, v_count, std::max(1, trials / 5)));
    }
    {
        Rng rng(seed ^ 0x85ebca77c2b2ae63ull);
        results.push_back(stability_bound_suite(rng, m_count, v_count, trials));
    }
    {
        Rng rng(seed ^ 0xff51afd7ed558ccdull);
        results.push_back(geometric_rate_suite(rng, m_count, v_count, trials));
    }
    {
        Rng rng(seed ^ 0x2545f4914f6cdd1dull);
        results.push_back(continuity_probe_suite(rng, m_count, v_count, trials));
    }
    return results;
}

}  // namespace persuasion
