#pragma once
#include <vector>

#include "persuasion/state_model.hpp"

namespace persuasion {

enum class LPStatus { Optimal, Infeasible, Unbounded };

// maximize objective . x + objective_constant
// subject to inequality_matrix . x >= inequality_rhs
//            lower_bounds <= x <= upper_bounds
//
// The constant carries the dropped prior term so reported optima match the
// ex-ante utility rather than the shifted reformulation objective.
struct LPStandardForm {
    std::vector<double> objective;
    Matrix inequality_matrix;
    std::vector<double> inequality_rhs;
    std::vector<double> lower_bounds;
    std::vector<double> upper_bounds;
    double objective_constant = 0.0;

    int num_vars() const { return static_cast<int>(objective.size()); }
    int num_rows() const { return inequality_matrix.rows; }
    void validate() const;
};

struct LPSolution {
    LPStatus status = LPStatus::Infeasible;
    std::vector<double> variables;
    double objective_value = 0.0;  // includes objective_constant
    std::vector<int> active_constraints;
};

// Direct optimal-signaling LP. Decision variables are pi(1 | theta_hat); the
// objective coefficient for theta_hat is sum_theta (u(1,theta) - u(0,theta)) *
// mu(theta) * Q[theta_hat, theta], with the constant sum_theta mu u(0,theta)
// carried separately. Two incentive rows: one per recommended action.
LPStandardForm build_direct_lp(const Instance& instance, const ConfusionModel& confusion);

// Equivalent joint formulation with explicit variables (pi, pitilde) and
// linking rows Q^T pi = pitilde; the incentive rows and objective touch only
// pitilde. Kept as a second algebraic route for equivalence testing.
LPStandardForm build_reformulated_lp(const Instance& instance, const ConfusionModel& confusion);

// Bounded-variable two-phase primal simplex with Bland's rule. Deterministic:
// identical inputs give bit-identical solutions.
LPSolution solve_lp(const LPStandardForm& lp);

// Optimizes secondary_objective over the optimal face
// { x feasible : objective . x + constant >= primary_value - 1e-9 }.
// The returned objective_value is the primary objective at the solution.
LPSolution solve_lp_with_secondary(const LPStandardForm& lp, double primary_value,
                                   const std::vector<double>& secondary_objective);

}  // namespace persuasion
