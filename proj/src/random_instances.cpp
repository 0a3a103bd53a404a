#include "persuasion/random_instances.hpp"

#include <algorithm>
#include <numeric>

#include "persuasion/errors.hpp"

namespace persuasion {

Instance random_instance(Rng& rng, int m_count, int v_count, bool require_alignment) {
    Instance inst;
    inst.space = StateSpace{m_count, v_count};
    const int n = inst.space.theta_count();
    for (int attempt = 0; attempt < 1000; ++attempt) {
        inst.prior = rng.simplex(n);
        inst.platform_utility = Matrix(n, 2);
        inst.user_utility = Matrix(v_count, 2);
        for (double& x : inst.platform_utility.data) x = rng.uniform(-1.0, 1.0);
        for (double& x : inst.user_utility.data) x = rng.uniform(-1.0, 1.0);
        if (!require_alignment || inst.aligned_somewhere()) {
            inst.validate(false);
            return inst;
        }
    }
    throw NumericalInstability("failed to sample an aligned instance");
}

Matrix random_confusion_factor(Rng& rng, int size, double max_noise) {
    const double eps = rng.uniform(0.0, max_noise);
    Matrix m(size, size);
    for (int j = 0; j < size; ++j) {
        std::vector<double> col = rng.simplex(size);
        for (int i = 0; i < size; ++i) m(i, j) = eps * col[i] + (i == j ? 1.0 - eps : 0.0);
    }
    return m;
}

ConfusionModel random_confusion(Rng& rng, int m_count, int v_count, double max_noise) {
    return ConfusionModel::build(random_confusion_factor(rng, m_count, max_noise),
                                 random_confusion_factor(rng, v_count, max_noise));
}

Matrix random_doubly_stochastic(Rng& rng, int size, int num_permutations) {
    std::vector<double> weights = rng.simplex(num_permutations);
    Matrix m(size, size);
    std::vector<int> perm(size);
    for (int p = 0; p < num_permutations; ++p) {
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = size - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);
        for (int j = 0; j < size; ++j) m(perm[j], j) += weights[p];
    }
    return m;
}

std::vector<double> random_scheme(Rng& rng, int theta_count) {
    std::vector<double> s(theta_count);
    for (double& x : s) x = rng.uniform();
    return s;
}

}  // namespace persuasion
