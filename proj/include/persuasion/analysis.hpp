#pragma once
#include <vector>

#include "persuasion/bayes_core.hpp"
#include "persuasion/signaling.hpp"
#include "persuasion/state_model.hpp"

namespace persuasion {

struct OracleResult {
    double value = 0.0;
    SignalingScheme scheme;
};

// Exhaustive grid oracle for the optimal-signaling value: enumerates
// pi(1|theta_hat) over {0, step, ..., 1}^theta_count, keeps points whose two
// incentive constraints hold within 1e-9, and returns the best ex-ante value.
// Serves as the independent reference for the LP. Guarded by GridTooLarge when
// theta_count > 6 or the grid exceeds 1e8 points.
//
// The parallel entry point and the serial reference evaluate grid points
// through the same arithmetic and break value ties toward the smallest grid
// index, so their results are bit-identical.
OracleResult brute_force_value(const Instance& instance, const ConfusionModel& confusion, double grid_step);
OracleResult brute_force_value_serial(const Instance& instance, const ConfusionModel& confusion, double grid_step);

// Expected platform utility at a predicted-space belief under the user's best
// response at the corresponding true belief.
double posterior_value(const Instance& instance, const ConfusionModel& confusion, const std::vector<double>& rho_hat);

// Concave-closure estimate at the noisy prior: best value over Bayes-plausible
// posterior pairs sampled on a simplex grid in predicted-belief space (one
// grid posterior, the second swept along the ray through the prior).
double concavification_value(const Instance& instance, const ConfusionModel& confusion, double grid_step = 0.02);
double concavification_value_serial(const Instance& instance, const ConfusionModel& confusion,
                                    double grid_step = 0.02);

// w_1 - w_0 at the true belief corresponding to a predicted-space belief;
// zero identifies the indifference plane.
double indifference_gap(const Instance& instance, const ConfusionModel& confusion, const Belief& belief);

struct HullMembership {
    int column = 0;
    bool is_member = false;
    std::vector<double> weights;      // convex coefficients when member
    std::vector<double> certificate;  // separating functional when not
    double margin = 0.0;              // separation margin (0 for members)
};

// For each column of Q1^Theta, decides membership in the convex hull of the
// columns of Q2^Theta via a separation LP; members carry recovered convex
// weights, non-members a separating certificate. An all-member result
// certifies weak monotonicity of optimal platform utility (sufficiency
// direction; the equivalence is proof-backed for symmetric matrices).
std::vector<HullMembership> check_monotone_condition(const ConfusionModel& q1, const ConfusionModel& q2);

struct LipschitzReport {
    double delta_q = 0.0;  // ||Q1 - Q2||_inf
    double delta_u = 0.0;  // |u*(Q1) - u*(Q2)|
    double ratio = 0.0;    // delta_u / delta_q, 0 when delta_q == 0
    double bound_estimate = 0.0;
    double value_q1 = 0.0;
    double value_q2 = 0.0;
};

// Solves the instance under both confusion models and reports the utility
// change against a conservative Lipschitz-style bound
// |Theta| (3 c_hat + M^2 u_max) with M the larger inverse norm and c_hat a
// sampled slope estimate from the indifference plane.
LipschitzReport lipschitz_probe(const Instance& instance, const ConfusionModel& q1, const ConfusionModel& q2);

}  // namespace persuasion
