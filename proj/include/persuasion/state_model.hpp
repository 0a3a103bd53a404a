#pragma once
#include <optional>
#include <string>
#include <vector>

#include "persuasion/linalg.hpp"

namespace persuasion {

// Joint state space over misinformation states M and validation/popularity
// states V. A joint state (m, v) is flattened m-major: index = m * v_count + v.
struct StateSpace {
    int m_count = 0;
    int v_count = 0;

    int theta_count() const { return m_count * v_count; }
    int flatten(int m, int v) const { return m * v_count + v; }
    std::pair<int, int> unflatten(int theta) const { return {theta / v_count, theta % v_count}; }
    int v_of(int theta) const { return theta % v_count; }

    void validate() const;
};

// A problem instance: prior over joint states, platform utility u(a, theta)
// and user utility w(a, v), actions a in {0 = not-share, 1 = share}.
struct Instance {
    StateSpace space;
    std::vector<double> prior;  // length theta_count, m-major
    Matrix platform_utility;    // theta_count x 2, column a
    Matrix user_utility;        // v_count x 2, column a

    double u(int a, int theta) const { return platform_utility(theta, a); }
    double w(int a, int v) const { return user_utility(v, a); }

    // Checks simplex/finiteness invariants; renormalizes priors whose sum is
    // within 1e-6 of one. When warn is set, prints a note if there is no state
    // where user and platform agree on an action (the model stays well-posed,
    // only the posterior-location result depends on that assumption).
    void validate(bool warn = false);

    Instance with_prior(std::vector<double> new_prior) const;

    // True whether, for each action, some state exists where both user and
    // platform strictly prefer that action.
    bool aligned_somewhere() const;
};

// Classifier confusion model. q_m, q_v, and their Kronecker product q_theta
// are column-stochastic with entry (predicted, true) = P(predicted | true).
// v_theta is the inverse of q_theta.
struct ConfusionModel {
    Matrix q_m;
    Matrix q_v;
    Matrix q_theta;
    Matrix v_theta;
    double condition_estimate = 0.0;
    bool ill_conditioned = false;

    static ConfusionModel build(const Matrix& q_m, const Matrix& q_v, bool strict = false);
    static ConfusionModel identity(const StateSpace& space);

    int theta_count() const { return q_theta.rows; }
};

enum class SpaceTag { TrueSpace, PredictedSpace };

// A belief over joint states, tagged with the space it lives in. Beliefs from
// ordinary Bayes arithmetic are proper distributions; mapping a predicted
// belief back through the inverse confusion matrix can leave the simplex, in
// which case the belief is flagged rather than clamped.
struct Belief {
    SpaceTag tag = SpaceTag::TrueSpace;
    std::vector<double> probs;

    // Validates entries >= 0 and sum == 1 (within 1e-9).
    static Belief make(SpaceTag tag, std::vector<double> probs);
    // Validates only the sum; negative coordinates allowed.
    static Belief make_signed(SpaceTag tag, std::vector<double> probs);

    bool in_simplex() const;
    int size() const { return static_cast<int>(probs.size()); }
};

struct PerformativeConfig;  // defined in performative.hpp

struct Scenario {
    Instance instance;
    ConfusionModel confusion;
    std::optional<double> performative_lambda;
    std::optional<int> performative_rounds;
    std::optional<double> performative_tolerance;
};

// Column-stochastic check helper: entries >= 0, columns sum to 1 within tol.
void require_column_stochastic(const Matrix& m, double tol, const std::string& what);

// Q_theta = Q_M (x) Q_V with the m-major index layout of StateSpace.
Matrix kronecker_confusion(const Matrix& q_m, const Matrix& q_v);

// Inverts a column-stochastic joint confusion matrix. Returns the inverse and
// an infinity-norm condition estimate. Throws SingularConfusion when the
// matrix is numerically singular and IllConditioned when the estimate exceeds
// 1e8 under strict mode (a warning otherwise, reported by the caller).
std::pair<Matrix, double> invert_confusion(const Matrix& q_theta);

// Loads and validates a scenario file (JSON; see README for the schema).
Scenario load_scenario(const std::string& path, bool strict = false);

}  // namespace persuasion
