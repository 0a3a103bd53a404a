#include <doctest.h>

#include <cmath>
#include <fstream>

#include "fixtures.hpp"
#include "persuasion/errors.hpp"
#include "persuasion/random_instances.hpp"
#include "persuasion/rng.hpp"
#include "persuasion/state_model.hpp"

using namespace persuasion;

namespace {

Matrix random_column_stochastic(Rng& rng, int n) {
    Matrix m(n, n);
    for (int j = 0; j < n; ++j) {
        const std::vector<double> col = rng.simplex(n);
        for (int i = 0; i < n; ++i) m(i, j) = col[i];
    }
    return m;
}

void write_temp(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    out << body;
}

const char* kScenarioTemplate = R"({
  "m_count": 2, "v_count": 2,
  "prior": %s,
  "platform_utility": [[0,1],[-1,2],[0,-1],[0,-3]],
  "user_utility": [[0,-1],[-2,1]],
  "q_m": [[1,0],[0,1]],
  "q_v": %s
})";

std::string scenario_body(const std::string& prior, const std::string& q_v) {
    char buf[1024];
    std::snprintf(buf, sizeof(buf), kScenarioTemplate, prior.c_str(), q_v.c_str());
    return buf;
}

}  // namespace

TEST_CASE("flat index round trip covers the whole space") {
    for (int mc = 1; mc <= 4; ++mc)
        for (int vc = 1; vc <= 4; ++vc) {
            const StateSpace space{mc, vc};
            for (int m = 0; m < mc; ++m)
                for (int v = 0; v < vc; ++v) {
                    const auto [m2, v2] = space.unflatten(space.flatten(m, v));
                    CHECK(m2 == m);
                    CHECK(v2 == v);
                }
            CHECK(space.theta_count() == mc * vc);
        }
}

TEST_CASE("kronecker of identities is identity") {
    const Matrix k = kronecker_confusion(Matrix::identity(2), Matrix::identity(2));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(k(i, j) == (i == j ? 1.0 : 0.0));
}

TEST_CASE("kronecker entry is the product of factor entries") {
    Matrix q_m(2, 2), q_v(2, 2);
    q_m(0, 0) = 0.9;
    q_m(0, 1) = 0.1;
    q_m(1, 0) = 0.1;
    q_m(1, 1) = 0.9;
    q_v(0, 0) = 0.8;
    q_v(0, 1) = 0.2;
    q_v(1, 0) = 0.2;
    q_v(1, 1) = 0.8;
    const Matrix k = kronecker_confusion(q_m, q_v);
    CHECK(k(0, 0) == doctest::Approx(0.72).epsilon(1e-15));

    const StateSpace space{2, 2};
    for (int mh = 0; mh < 2; ++mh)
        for (int vh = 0; vh < 2; ++vh)
            for (int m = 0; m < 2; ++m)
                for (int v = 0; v < 2; ++v)
                    CHECK(k(space.flatten(mh, vh), space.flatten(m, v)) == q_m(mh, m) * q_v(vh, v));
}

TEST_CASE("kronecker consistency on random stochastic factors") {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const int a = rng.uniform_int(1, 3);
        const int b = rng.uniform_int(1, 3);
        const Matrix q_m = random_column_stochastic(rng, a);
        const Matrix q_v = random_column_stochastic(rng, b);
        const Matrix k = kronecker_confusion(q_m, q_v);
        const StateSpace space{a, b};
        for (int mh = 0; mh < a; ++mh)
            for (int vh = 0; vh < b; ++vh)
                for (int m = 0; m < a; ++m)
                    for (int v = 0; v < b; ++v)
                        CHECK(k(space.flatten(mh, vh), space.flatten(m, v)) == q_m(mh, m) * q_v(vh, v));
        for (int j = 0; j < k.cols; ++j) {
            double s = 0.0;
            for (int i = 0; i < k.rows; ++i) s += k(i, j);
            CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("invert_confusion on identity and a symmetric binary flip") {
    auto [inv_id, cond_id] = invert_confusion(Matrix::identity(3));
    CHECK(cond_id == doctest::Approx(1.0));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(inv_id(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));

    Matrix q(2, 2);
    q(0, 0) = 0.9;
    q(0, 1) = 0.1;
    q(1, 0) = 0.1;
    q(1, 1) = 0.9;
    auto [inv, cond] = invert_confusion(q);
    // closed-form 2x2 inverse, checked by multiplying back below
    CHECK(inv(0, 0) == doctest::Approx(1.125).epsilon(1e-12));
    CHECK(inv(0, 1) == doctest::Approx(-0.125).epsilon(1e-12));
    CHECK(inv(1, 0) == doctest::Approx(-0.125).epsilon(1e-12));
    CHECK(inv(1, 1) == doctest::Approx(1.125).epsilon(1e-12));
    CHECK(cond > 1.0);
    const Matrix prod = mat_mul(q, inv);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(prod(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
}

TEST_CASE("equal columns are singular") {
    Matrix q(2, 2);
    q(0, 0) = 0.5;
    q(0, 1) = 0.5;
    q(1, 0) = 0.5;
    q(1, 1) = 0.5;
    CHECK_THROWS_AS(invert_confusion(q), SingularConfusion);
}

TEST_CASE("inverse residual on random diagonally dominant matrices") {
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.uniform_int(2, 5);
        const Matrix q = random_confusion_factor(rng, n, 0.45);
        auto [inv, cond] = invert_confusion(q);
        (void)cond;
        Matrix prod = mat_mul(q, inv);
        for (int i = 0; i < n; ++i) prod(i, i) -= 1.0;
        CHECK(inf_norm(prod) <= 1e-8);
    }
}

TEST_CASE("load_scenario parses the worked-example file") {
    const Scenario scn = load_scenario(std::string(SCENARIO_DIR) + "/appendix_a.json");
    CHECK(scn.instance.space.theta_count() == 4);
    CHECK(scn.instance.prior[0] == doctest::Approx(0.35).epsilon(1e-12));
    CHECK(scn.instance.u(1, 3) == -3.0);
    CHECK(scn.instance.w(0, 1) == -2.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(scn.confusion.q_theta(i, j) == (i == j ? 1.0 : 0.0));
    CHECK(scn.confusion.condition_estimate == doctest::Approx(1.0));
    CHECK(scn.performative_lambda.value() == 0.0);
    CHECK(scn.performative_rounds.value() == 10);
}

TEST_CASE("load_scenario rejects bad priors and singular confusion") {
    write_temp("tmp_bad_prior.json", scenario_body("[0.3, 0.3, 0.15, 0.15]", "[[1,0],[0,1]]"));
    CHECK_THROWS_AS(load_scenario("tmp_bad_prior.json"), ValidationError);

    write_temp("tmp_singular.json", scenario_body("[0.35, 0.35, 0.15, 0.15]", "[[0.5,0.5],[0.5,0.5]]"));
    CHECK_THROWS_AS(load_scenario("tmp_singular.json"), SingularConfusion);

    write_temp("tmp_bad_column.json", scenario_body("[0.35, 0.35, 0.15, 0.15]", "[[0.9,0.2],[0.1,0.9]]"));
    CHECK_THROWS_AS(load_scenario("tmp_bad_column.json"), ValidationError);

    CHECK_THROWS_AS(load_scenario("tmp_does_not_exist.json"), ParseError);

    write_temp("tmp_not_json.json", "{ not json");
    CHECK_THROWS_AS(load_scenario("tmp_not_json.json"), ParseError);
}

TEST_CASE("priors within 1e-6 of one are silently renormalized") {
    write_temp("tmp_near_prior.json", scenario_body("[0.3500001, 0.35, 0.15, 0.15]", "[[1,0],[0,1]]"));
    const Scenario scn = load_scenario("tmp_near_prior.json");
    double sum = 0.0;
    for (double p : scn.instance.prior) sum += p;
    CHECK(std::abs(sum - 1.0) <= 1e-12);
}

TEST_CASE("negative probabilities are rejected") {
    write_temp("tmp_neg_prior.json", scenario_body("[0.7, 0.35, -0.1, 0.05]", "[[1,0],[0,1]]"));
    CHECK_THROWS_AS(load_scenario("tmp_neg_prior.json"), ValidationError);
}

TEST_CASE("belief constructors enforce the simplex") {
    CHECK_THROWS_AS(Belief::make(SpaceTag::TrueSpace, {0.5, 0.4}), ValidationError);
    CHECK_THROWS_AS(Belief::make(SpaceTag::TrueSpace, {1.2, -0.2}), ValidationError);
    const Belief signed_b = Belief::make_signed(SpaceTag::TrueSpace, {1.25, -0.25});
    CHECK(!signed_b.in_simplex());
    const Belief proper = Belief::make(SpaceTag::TrueSpace, {0.25, 0.75});
    CHECK(proper.in_simplex());
}
