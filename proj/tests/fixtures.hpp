#pragma once
#include <vector>

#include "persuasion/bayes_core.hpp"
#include "persuasion/state_model.hpp"

namespace fixtures {

using namespace persuasion;

inline Instance make_instance(int m_count, int v_count, std::vector<double> prior,
                              const std::vector<std::vector<double>>& platform_u,
                              const std::vector<std::vector<double>>& user_w) {
    Instance inst;
    inst.space = StateSpace{m_count, v_count};
    inst.prior = std::move(prior);
    inst.platform_utility = Matrix(inst.space.theta_count(), 2);
    for (int t = 0; t < inst.space.theta_count(); ++t) {
        inst.platform_utility(t, 0) = platform_u[t][0];
        inst.platform_utility(t, 1) = platform_u[t][1];
    }
    inst.user_utility = Matrix(v_count, 2);
    for (int v = 0; v < v_count; ++v) {
        inst.user_utility(v, 0) = user_w[v][0];
        inst.user_utility(v, 1) = user_w[v][1];
    }
    inst.validate(false);
    return inst;
}

// Worked misinformation example: two binary features, prior concentrated on
// accurate content, user motivated by popularity only.
inline Instance worked_example() {
    return make_instance(2, 2, {0.35, 0.35, 0.15, 0.15},
                         {{0, 1}, {-1, 2}, {0, -1}, {0, -3}},
                         {{0, -1}, {-2, 1}});
}

inline SignalingScheme worked_example_scheme() {
    SignalingScheme s;
    s.share_prob = {1.0, 1.0, 0.0, 2.0 / 3.0};
    return s;
}

inline ConfusionModel identity_confusion(const Instance& inst) { return ConfusionModel::identity(inst.space); }

inline ConfusionModel symmetric_binary_confusion(double diag) {
    Matrix q(2, 2);
    q(0, 0) = diag;
    q(1, 1) = diag;
    q(0, 1) = 1.0 - diag;
    q(1, 0) = 1.0 - diag;
    return ConfusionModel::build(q, q);
}

}  // namespace fixtures
