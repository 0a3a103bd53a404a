#pragma once
#include "persuasion/rng.hpp"
#include "persuasion/state_model.hpp"

namespace persuasion {

// Random problem generators shared by the property tests and the verify
// command. All draws are deterministic given the Rng state.

// Utilities uniform in [-1, 1], Dirichlet prior. Resamples until, for each
// action, some state exists where user and platform strictly agree (the
// default modeling assumption).
Instance random_instance(Rng& rng, int m_count, int v_count, bool require_alignment = true);

// Column-stochastic, diagonally dominant: (1 - eps) I + eps S with S random
// column-stochastic and eps in (0, max_noise].
Matrix random_confusion_factor(Rng& rng, int size, double max_noise = 0.4);

ConfusionModel random_confusion(Rng& rng, int m_count, int v_count, double max_noise = 0.4);

// Doubly stochastic via a convex mixture of random permutation matrices.
Matrix random_doubly_stochastic(Rng& rng, int size, int num_permutations = 6);

// Random scheme with entries uniform in [0, 1].
std::vector<double> random_scheme(Rng& rng, int theta_count);

}  // namespace persuasion
