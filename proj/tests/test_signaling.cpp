#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "persuasion/analysis.hpp"
#include "persuasion/errors.hpp"
#include "persuasion/random_instances.hpp"
#include "persuasion/rng.hpp"
#include "persuasion/signaling.hpp"

using namespace persuasion;

TEST_CASE("best response at the worked-example prior is share") {
    const Instance inst = fixtures::worked_example();
    const Belief prior = Belief::make(SpaceTag::TrueSpace, inst.prior);
    CHECK(best_response(inst, prior) == 1);
}

TEST_CASE("indifferent user defers to the platform") {
    const Instance inst = fixtures::worked_example();
    // not-share posterior of the worked example: both actions give the user -0.5,
    // platform prefers not-share (0 over -1.5)
    const Belief post = Belief::make(SpaceTag::TrueSpace, {0.0, 0.0, 0.75, 0.25});
    const BestResponseDetail detail = best_response_detail(inst, post);
    CHECK(detail.action == 0);
    CHECK(detail.user_indifferent);
    CHECK(!detail.double_indifferent);
}

TEST_CASE("point mass on a popular state shares") {
    const Instance inst = fixtures::worked_example();
    const Belief point = Belief::make(SpaceTag::TrueSpace, {0.0, 1.0, 0.0, 0.0});
    CHECK(best_response(inst, point) == 1);
}

TEST_CASE("double indifference resolves to share") {
    Instance inst = fixtures::worked_example();
    inst.platform_utility = Matrix(4, 2);
    inst.user_utility = Matrix(2, 2);
    const Belief prior = Belief::make(SpaceTag::TrueSpace, inst.prior);
    const BestResponseDetail detail = best_response_detail(inst, prior);
    CHECK(detail.action == 1);
    CHECK(detail.double_indifferent);
}

TEST_CASE("no-signal baseline of the worked example") {
    const BaselineResult base = no_signal_baseline(fixtures::worked_example());
    CHECK(base.action == 1);
    CHECK(base.platform_utility == doctest::Approx(0.45).epsilon(1e-12));
    CHECK(base.user_utility == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("zero platform utility gives a zero baseline") {
    Instance inst = fixtures::worked_example();
    inst.platform_utility = Matrix(4, 2);
    CHECK(no_signal_baseline(inst).platform_utility == 0.0);
}

TEST_CASE("baseline at a point-mass prior on an unpopular state") {
    const Instance inst = fixtures::worked_example().with_prior({0.0, 0.0, 1.0, 0.0});
    const BaselineResult base = no_signal_baseline(inst);
    CHECK(base.action == 0);
    CHECK(base.platform_utility == doctest::Approx(inst.u(0, 2)));
    CHECK(base.user_utility == doctest::Approx(inst.w(0, 0)));
}

TEST_CASE("optimal scheme for the worked example under a perfect classifier") {
    const Instance inst = fixtures::worked_example();
    const PersuasionSolution sol = solve_optimal_scheme(inst, fixtures::identity_confusion(inst));
    CHECK(sol.platform_utility == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(sol.signal_probs[1] == doctest::Approx(0.8).epsilon(1e-9));
    REQUIRE(sol.posteriors[1].has_value());
    CHECK(sol.posteriors[1]->platform_value == doctest::Approx(0.9375).epsilon(1e-9));
    CHECK(std::abs(sol.posteriors[1]->platform_value - 0.937) <= 5e-4 + 1e-12);
    CHECK(sol.persuasive);
    CHECK(sol.baseline_platform_utility == doctest::Approx(0.45).epsilon(1e-12));
    // ex-ante user value: 0.8 * 0.125 + 0.2 * (-0.5) = 0
    CHECK(sol.user_utility == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("aligned utilities reach the full-revelation value") {
    // platform utility equals user utility lifted to the joint space
    const std::vector<std::vector<double>> w = {{0.3, -0.2}, {-0.5, 0.8}};
    const Instance inst = fixtures::make_instance(
        2, 2, {0.3, 0.2, 0.25, 0.25},
        {{w[0][0], w[0][1]}, {w[1][0], w[1][1]}, {w[0][0], w[0][1]}, {w[1][0], w[1][1]}}, w);
    const PersuasionSolution sol = solve_optimal_scheme(inst, fixtures::identity_confusion(inst));
    double first_best = 0.0;
    for (int t = 0; t < 4; ++t) first_best += inst.prior[t] * std::max(inst.u(0, t), inst.u(1, t));
    CHECK(sol.platform_utility == doctest::Approx(first_best).epsilon(1e-8));
    CHECK(sol.persuasive);
}

TEST_CASE("noisy classifier lands between baseline and the perfect-classifier value") {
    const Instance inst = fixtures::worked_example();
    const ConfusionModel conf = fixtures::symmetric_binary_confusion(0.75);
    const PersuasionSolution sol = solve_optimal_scheme(inst, conf);
    CHECK(sol.platform_utility >= 0.45 - 1e-9);
    CHECK(sol.platform_utility <= 0.75 + 1e-9);

    // grid oracle sandwich at step 0.05
    const OracleResult oracle = brute_force_value(inst, conf, 0.05);
    CHECK(sol.platform_utility >= oracle.value - 1e-9);
    CHECK(sol.platform_utility - oracle.value <= 0.05 * 5.0 * 4);
}

TEST_CASE("welfare check value for the worked example is zero") {
    const Instance inst = fixtures::worked_example();
    const PersuasionSolution sol = solve_optimal_scheme(inst, fixtures::identity_confusion(inst));
    CHECK(user_welfare_check(sol) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("uninformative scheme changes nothing for the user") {
    const Instance inst = fixtures::worked_example();
    const ConfusionModel conf = fixtures::identity_confusion(inst);
    const PersuasionSolution sol = evaluate_scheme(inst, conf, SignalingScheme::uninformative(4, 1));
    CHECK(user_welfare_check(sol) == doctest::Approx(0.0));
    CHECK(sol.platform_utility == doctest::Approx(sol.baseline_platform_utility));
}

TEST_CASE("full revelation never hurts the user") {
    const Instance inst = fixtures::worked_example();
    const ConfusionModel conf = fixtures::identity_confusion(inst);
    SignalingScheme reveal;  // share exactly on the user-preferred states
    reveal.share_prob.assign(4, 0.0);
    for (int t = 0; t < 4; ++t)
        if (inst.w(1, inst.space.v_of(t)) >= inst.w(0, inst.space.v_of(t))) reveal.share_prob[t] = 1.0;
    const PersuasionSolution sol = evaluate_scheme(inst, conf, reveal);
    CHECK(user_welfare_check(sol) >= -1e-9);
}

TEST_CASE("persuasiveness, improvement, and welfare on random instances") {
    Rng rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        const Instance inst = random_instance(rng, 2, 2);
        const ConfusionModel conf =
            trial % 3 == 0 ? fixtures::identity_confusion(inst) : random_confusion(rng, 2, 2);
        const PersuasionSolution sol = solve_optimal_scheme(inst, conf);
        CHECK(sol.persuasive);
        for (int s = 0; s < 2; ++s)
            if (sol.posteriors[s]) CHECK(sol.posteriors[s]->ic_slack >= -1e-7);
        CHECK(sol.platform_utility >= sol.baseline_platform_utility - 1e-9);
        CHECK(sol.user_utility >= sol.baseline_user_utility - 1e-9);
        CHECK(std::abs(sol.signal_probs[0] + sol.signal_probs[1] - 1.0) <= 1e-9);
    }
}

TEST_CASE("identity-confusion solution matches the two-posterior grid oracle") {
    Rng rng(42);
    for (int trial = 0; trial < 8; ++trial) {
        const Instance inst = random_instance(rng, 2, 2);
        const ConfusionModel conf = fixtures::identity_confusion(inst);
        const PersuasionSolution sol = solve_optimal_scheme(inst, conf);
        const double cl = concavification_value(inst, conf, 0.05);
        double u_lo = 1e300, u_hi = -1e300;
        for (double u : inst.platform_utility.data) {
            u_lo = std::min(u_lo, u);
            u_hi = std::max(u_hi, u);
        }
        CHECK(std::abs(sol.platform_utility - cl) <= 0.05 * (u_hi - u_lo) * 4 + 1e-9);
    }
}
