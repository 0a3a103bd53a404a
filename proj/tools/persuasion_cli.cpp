#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "persuasion/analysis.hpp"
#include "persuasion/bayes_core.hpp"
#include "persuasion/csv.hpp"
#include "persuasion/errors.hpp"
#include "persuasion/lp_engine.hpp"
#include "persuasion/performative.hpp"
#include "persuasion/signaling.hpp"
#include "persuasion/state_model.hpp"
#include "persuasion/verify.hpp"

namespace {

using namespace persuasion;

const char* action_name(int a) { return a == 1 ? "share" : "not-share"; }

std::string belief_string(const std::vector<double>& probs) {
    std::string out = "[";
    for (size_t i = 0; i < probs.size(); ++i) {
        if (i) out += ", ";
        out += format_double(probs[i]);
    }
    return out + "]";
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open output file: " + path);
    out << contents;
}

int cmd_solve(const std::string& path, const std::string& csv_path, bool strict) {
    const Scenario scn = load_scenario(path, strict);
    const Instance& inst = scn.instance;
    const PersuasionSolution sol = solve_optimal_scheme(inst, scn.confusion);

    std::printf("scenario: %s\n", path.c_str());
    std::printf("states: |M|=%d |V|=%d |Theta|=%d\n", inst.space.m_count, inst.space.v_count,
                inst.space.theta_count());
    std::printf("confusion condition estimate: %s\n", format_double(scn.confusion.condition_estimate).c_str());
    std::printf("baseline: action=%s platform=%s user=%s\n", action_name(sol.baseline_action),
                format_double(sol.baseline_platform_utility).c_str(),
                format_double(sol.baseline_user_utility).c_str());
    std::printf("optimal scheme, share probability per predicted state:\n");
    for (int t = 0; t < inst.space.theta_count(); ++t) {
        const auto [m, v] = inst.space.unflatten(t);
        std::printf("  theta_hat %d (m=%d v=%d): %s\n", t, m, v, format_double(sol.scheme.share_prob[t]).c_str());
    }
    std::printf("signal probabilities: P(s=0)=%s P(s=1)=%s\n", format_double(sol.signal_probs[0]).c_str(),
                format_double(sol.signal_probs[1]).c_str());
    for (int s = 0; s < 2; ++s) {
        if (!sol.posteriors[s]) {
            std::printf("posterior s=%d: never sent\n", s);
            continue;
        }
        const SignalOutcome& out = *sol.posteriors[s];
        std::printf("posterior s=%d: action=%s%s platform=%s user=%s\n  true=%s\n  predicted=%s\n", s,
                    action_name(out.user_action), out.double_indifferent ? " (double tie, share)" : "",
                    format_double(out.platform_value).c_str(), format_double(out.user_value).c_str(),
                    belief_string(out.true_posterior.probs).c_str(),
                    belief_string(out.predicted_posterior.probs).c_str());
    }
    std::printf("platform utility: %s (baseline %s)\n", format_double(sol.platform_utility).c_str(),
                format_double(sol.baseline_platform_utility).c_str());
    std::printf("user utility: %s (baseline %s)\n", format_double(sol.user_utility).c_str(),
                format_double(sol.baseline_user_utility).c_str());
    std::printf("persuasive: %s\n", sol.persuasive ? "yes" : "no");

    if (!csv_path.empty()) {
        std::string csv =
            "kind,theta_hat,m_hat,v_hat,share_prob,p_noshare,p_share,baseline_platform,baseline_user,"
            "platform_utility,user_utility,persuasive\n";
        for (int t = 0; t < inst.space.theta_count(); ++t) {
            const auto [m, v] = inst.space.unflatten(t);
            csv += "scheme," + std::to_string(t) + "," + std::to_string(m) + "," + std::to_string(v) + "," +
                   format_double(sol.scheme.share_prob[t]) + ",,,,,,,\n";
        }
        csv += "summary,,,,," + format_double(sol.signal_probs[0]) + "," + format_double(sol.signal_probs[1]) + "," +
               format_double(sol.baseline_platform_utility) + "," + format_double(sol.baseline_user_utility) + "," +
               format_double(sol.platform_utility) + "," + format_double(sol.user_utility) + "," +
               (sol.persuasive ? "1" : "0") + "\n";
        write_file(csv_path, csv);
    }
    return 0;
}

int cmd_oracle(const std::string& path, double grid_step, bool strict) {
    const Scenario scn = load_scenario(path, strict);
    const OracleResult oracle = brute_force_value(scn.instance, scn.confusion, grid_step);
    const double lp_value = solve_lp(build_direct_lp(scn.instance, scn.confusion)).objective_value;

    std::printf("scenario: %s\n", path.c_str());
    std::printf("oracle value: %s (grid step %s)\n", format_double(oracle.value).c_str(),
                format_double(grid_step).c_str());
    std::printf("oracle scheme: %s\n", belief_string(oracle.scheme.share_prob).c_str());
    std::printf("lp value: %s\n", format_double(lp_value).c_str());
    std::printf("gap (lp - oracle): %s\n", format_double(lp_value - oracle.value).c_str());
    if (lp_value < oracle.value - 1e-7) {
        std::fprintf(stderr, "error: LP value fell below the enumeration oracle\n");
        return 4;
    }
    return 0;
}

int cmd_performative(const std::string& path, double lambda, bool lambda_set, int rounds, bool rounds_set, double tol,
                     bool tol_set, bool normalize, const std::string& csv_path, bool strict) {
    const Scenario scn = load_scenario(path, strict);

    PerformativeConfig cfg;
    cfg.lambda = lambda_set ? lambda : scn.performative_lambda.value_or(0.0);
    cfg.max_rounds = rounds_set ? rounds : scn.performative_rounds.value_or(32);
    cfg.tolerance = tol_set ? tol : scn.performative_tolerance.value_or(1e-6);
    cfg.normalize = normalize;

    const PerformativeTrace trace = run_performative(scn.instance, scn.confusion, cfg);

    std::printf("scenario: %s\n", path.c_str());
    std::printf("lambda=%s rounds=%d tolerance=%s normalize=%s\n", format_double(cfg.lambda).c_str(), cfg.max_rounds,
                format_double(cfg.tolerance).c_str(), cfg.normalize ? "yes" : "no");
    std::printf("%4s %12s %12s %14s %14s\n", "t", "alpha", "P(s=1)", "platform", "dist-to-target");
    for (size_t t = 0; t < trace.rounds.size(); ++t) {
        const PerformativeRound& r = trace.rounds[t];
        std::printf("%4zu %12.8f %12.8f %14.10f %14.10f\n", t, r.alpha, r.solution.signal_probs[1],
                    r.platform_utility, r.distance_to_target);
    }
    if (trace.target_posterior)
        std::printf("target posterior (true space): %s\n", belief_string(trace.target_posterior->probs).c_str());
    std::printf("converged_at: %s\n", trace.converged_at ? std::to_string(*trace.converged_at).c_str() : "-");
    std::printf("stable_at: %s\n", trace.stable_at ? std::to_string(*trace.stable_at).c_str() : "-");
    std::printf("degenerate_at: %s\n", trace.degenerate_at ? std::to_string(*trace.degenerate_at).c_str() : "-");
    std::printf("segment violation: %s\n",
                trace.segment_violation_at ? std::to_string(*trace.segment_violation_at).c_str() : "none");
    std::printf("monotone utility: %s\n", trace.monotone_utility ? "yes" : "no");

    if (!csv_path.empty()) {
        std::string csv = "t,alpha,p_share,platform_utility,distance_to_target\n";
        for (size_t t = 0; t < trace.rounds.size(); ++t) {
            const PerformativeRound& r = trace.rounds[t];
            csv += std::to_string(t) + "," + format_double(r.alpha) + "," + format_double(r.solution.signal_probs[1]) +
                   "," + format_double(r.platform_utility) + "," + format_double(r.distance_to_target) + "\n";
        }
        write_file(csv_path, csv);
    }
    return 0;
}

int cmd_check_monotone(const std::string& path1, const std::string& path2, bool strict) {
    const Scenario s1 = load_scenario(path1, strict);
    const Scenario s2 = load_scenario(path2, strict);
    const std::vector<HullMembership> report = check_monotone_condition(s1.confusion, s2.confusion);

    bool all_members = true;
    for (const HullMembership& m : report) {
        if (m.is_member) {
            std::printf("column %d: member, weights=%s\n", m.column, belief_string(m.weights).c_str());
        } else {
            all_members = false;
            std::printf("column %d: NOT member, margin=%s, certificate=%s\n", m.column,
                        format_double(m.margin).c_str(), belief_string(m.certificate).c_str());
        }
    }
    std::printf("u*(Q2) >= u*(Q1) guaranteed for all instances: %s\n", all_members ? "yes" : "no");

    auto symmetric = [](const Matrix& q) {
        for (int i = 0; i < q.rows; ++i)
            for (int j = 0; j < i; ++j)
                if (std::abs(q(i, j) - q(j, i)) > 1e-12) return false;
        return true;
    };
    if (!(symmetric(s1.confusion.q_theta) && symmetric(s2.confusion.q_theta)))
        std::printf("note: hull condition is proof-backed only for symmetric confusion matrices\n");
    return 0;
}

int cmd_verify(const std::string& path, uint64_t seed, int trials, bool strict) {
    const Scenario scn = load_scenario(path, strict);
    std::printf("scenario: %s\nseed: %llu trials: %d\n", path.c_str(), static_cast<unsigned long long>(seed), trials);
    const std::vector<PropertyResult> results = run_verification(scn.instance, seed, trials);
    std::string first_fail;
    for (const PropertyResult& r : results) {
        std::printf("%s %s - %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
        if (!r.pass && first_fail.empty()) first_fail = r.name;
    }
    if (!first_fail.empty()) {
        std::fprintf(stderr, "error: property '%s' failed\n", first_fail.c_str());
        return 4;
    }
    std::printf("all properties passed\n");
    return 0;
}

int dispatch(const std::function<int()>& body) {
    const auto start = std::chrono::steady_clock::now();
    int code = 0;
    try {
        code = body();
    } catch (const GridTooLarge& e) {
        std::fprintf(stderr, "error (resource): %s\n", e.what());
        code = 3;
    } catch (const NumericalInstability& e) {
        std::fprintf(stderr, "error (solver): %s\n", e.what());
        code = 2;
    } catch (const ZeroProbabilitySignal& e) {
        std::fprintf(stderr, "error (solver): %s\n", e.what());
        code = 2;
    } catch (const WelfareViolation& e) {
        std::fprintf(stderr, "error (solver): %s\n", e.what());
        code = 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error (input): %s\n", e.what());
        code = 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        code = 2;
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    std::fprintf(stderr, "wall time: %.3f s\n", elapsed.count());
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal signaling under noisy classifier predictions: LP solver, structural checks, "
                 "and performative simulation"};
    app.require_subcommand(1);
    bool strict = false;
    app.add_flag("--strict", strict, "escalate the ill-conditioning warning to an error");

    std::string scenario, scenario2, csv_path;

    CLI::App* solve = app.add_subcommand("solve", "solve the optimal signaling scheme for a scenario");
    solve->add_option("scenario", scenario, "scenario JSON file")->required();
    solve->add_option("--csv", csv_path, "write scheme rows plus a summary row as CSV");

    double grid_step = 0.05;
    CLI::App* oracle = app.add_subcommand("oracle", "compare the LP against the exhaustive grid oracle");
    oracle->add_option("scenario", scenario, "scenario JSON file")->required();
    oracle->add_option("--grid", grid_step, "grid step, a reciprocal 1/k with k <= 40")->required();

    double lambda = 0.0, tol = 1e-6;
    int rounds = 32;
    bool normalize = false;
    CLI::App* perf = app.add_subcommand("performative", "simulate the prior-reshaping process");
    perf->add_option("scenario", scenario, "scenario JSON file")->required();
    CLI::Option* lambda_opt = perf->add_option("--lambda", lambda, "mixing weight of the current prior, in [0,1]");
    CLI::Option* rounds_opt = perf->add_option("--rounds", rounds, "maximum rounds");
    CLI::Option* tol_opt = perf->add_option("--tol", tol, "convergence tolerance on predicted-space distance");
    perf->add_flag("--normalize", normalize, "report utilities shifted by c_n = max_theta u(0, theta)");
    perf->add_option("--csv", csv_path, "write the per-round table as CSV");

    CLI::App* mono = app.add_subcommand("check-monotone", "hull condition for classifier-quality monotonicity");
    mono->add_option("scenario_q1", scenario, "scenario providing Q1")->required();
    mono->add_option("scenario_q2", scenario2, "scenario providing Q2")->required();

    uint64_t seed = 0;
    int trials = 50;
    CLI::App* verify = app.add_subcommand("verify", "run randomized invariant suites");
    verify->add_option("scenario", scenario, "scenario JSON file")->required();
    verify->add_option("--seed", seed, "RNG seed");
    verify->add_option("--trials", trials, "trials per suite")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    if (solve->parsed()) return dispatch([&] { return cmd_solve(scenario, csv_path, strict); });
    if (oracle->parsed()) return dispatch([&] { return cmd_oracle(scenario, grid_step, strict); });
    if (perf->parsed())
        return dispatch([&] {
            return cmd_performative(scenario, lambda, lambda_opt->count() > 0, rounds, rounds_opt->count() > 0, tol,
                                    tol_opt->count() > 0, normalize, csv_path, strict);
        });
    if (mono->parsed()) return dispatch([&] { return cmd_check_monotone(scenario, scenario2, strict); });
    if (verify->parsed()) return dispatch([&] { return cmd_verify(scenario, seed, trials, strict); });
    return 0;
}
