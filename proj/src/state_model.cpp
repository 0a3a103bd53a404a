#include "persuasion/state_model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "persuasion/errors.hpp"

namespace persuasion {

namespace {

constexpr double kColumnSumTol = 1e-6;
constexpr double kPriorRenormTol = 1e-6;
constexpr double kConditionLimit = 1e8;

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

void StateSpace::validate() const {
    if (m_count <= 0 || v_count <= 0) throw ValidationError("state space counts must be positive");
}

void Instance::validate(bool warn) {
    space.validate();
    const int n = space.theta_count();
    if (static_cast<int>(prior.size()) != n) throw ValidationError("prior length does not match theta_count");
    if (platform_utility.rows != n || platform_utility.cols != 2)
        throw ValidationError("platform_utility must be theta_count x 2");
    if (user_utility.rows != space.v_count || user_utility.cols != 2)
        throw ValidationError("user_utility must be v_count x 2");

    double sum = 0.0;
    for (double p : prior) {
        if (!std::isfinite(p) || p < 0.0) throw ValidationError("prior entries must be nonnegative and finite");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kPriorRenormTol) throw ValidationError("prior sums to " + std::to_string(sum) + ", not 1");
    for (double& p : prior) p /= sum;

    if (!all_finite(platform_utility.data) || !all_finite(user_utility.data))
        throw ValidationError("utilities must be finite");

    if (warn && !aligned_somewhere())
        std::fprintf(stderr,
                     "warning: no state exists where user and platform both strictly prefer each action; "
                     "posterior-location diagnostics may not apply\n");
}

bool Instance::aligned_somewhere() const {
    bool share_agree = false, noshare_agree = false;
    for (int theta = 0; theta < space.theta_count(); ++theta) {
        const int v = space.v_of(theta);
        if (u(1, theta) > u(0, theta) && w(1, v) > w(0, v)) share_agree = true;
        if (u(0, theta) > u(1, theta) && w(0, v) > w(1, v)) noshare_agree = true;
    }
    return share_agree && noshare_agree;
}

Instance Instance::with_prior(std::vector<double> new_prior) const {
    Instance copy = *this;
    copy.prior = std::move(new_prior);
    copy.validate(false);
    return copy;
}

void require_column_stochastic(const Matrix& m, double tol, const std::string& what) {
    if (m.rows != m.cols) throw DimensionError(what + " must be square");
    for (int j = 0; j < m.cols; ++j) {
        double s = 0.0;
        for (int i = 0; i < m.rows; ++i) {
            const double e = m(i, j);
            if (!std::isfinite(e) || e < -1e-15) throw ValidationError(what + " has a negative or non-finite entry");
            s += e;
        }
        if (std::abs(s - 1.0) > tol)
            throw ValidationError(what + " column " + std::to_string(j) + " sums to " + std::to_string(s));
    }
}

Matrix kronecker_confusion(const Matrix& q_m, const Matrix& q_v) {
    if (q_m.rows != q_m.cols || q_v.rows != q_v.cols) throw DimensionError("confusion factors must be square");
    return kronecker(q_m, q_v);
}

std::pair<Matrix, double> invert_confusion(const Matrix& q_theta) {
    if (q_theta.rows != q_theta.cols) throw DimensionError("q_theta must be square");
    Matrix inv;
    if (!invert(q_theta, inv)) throw SingularConfusion("confusion matrix is numerically singular");
    const double cond = inf_norm(q_theta) * inf_norm(inv);

    // Multiply back as a residual check; elimination noise should be far
    // below the 1e-8 contract for well-conditioned inputs.
    Matrix prod = mat_mul(q_theta, inv);
    for (int i = 0; i < prod.rows; ++i) prod(i, i) -= 1.0;
    if (inf_norm(prod) > 1e-8) throw SingularConfusion("confusion inverse failed the residual check");

    return {inv, cond};
}

ConfusionModel ConfusionModel::build(const Matrix& q_m, const Matrix& q_v, bool strict) {
    require_column_stochastic(q_m, kColumnSumTol, "q_m");
    require_column_stochastic(q_v, kColumnSumTol, "q_v");
    ConfusionModel model;
    model.q_m = q_m;
    model.q_v = q_v;
    model.q_theta = kronecker_confusion(q_m, q_v);
    auto [inv, cond] = invert_confusion(model.q_theta);
    model.v_theta = std::move(inv);
    model.condition_estimate = cond;
    model.ill_conditioned = cond > kConditionLimit;
    if (model.ill_conditioned) {
        if (strict) throw IllConditioned("confusion condition estimate " + std::to_string(cond) + " exceeds 1e8");
        std::fprintf(stderr, "warning: confusion condition estimate %.3g exceeds 1e8\n", cond);
    }
    return model;
}

ConfusionModel ConfusionModel::identity(const StateSpace& space) {
    return build(Matrix::identity(space.m_count), Matrix::identity(space.v_count));
}

Belief Belief::make(SpaceTag tag, std::vector<double> probs) {
    Belief b;
    b.tag = tag;
    b.probs = std::move(probs);
    double sum = 0.0;
    for (double p : b.probs) {
        if (!std::isfinite(p) || p < -1e-9) throw ValidationError("belief entry negative beyond tolerance");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("belief does not sum to 1");
    return b;
}

Belief Belief::make_signed(SpaceTag tag, std::vector<double> probs) {
    Belief b;
    b.tag = tag;
    b.probs = std::move(probs);
    double sum = 0.0;
    for (double p : b.probs) {
        if (!std::isfinite(p)) throw ValidationError("belief entry not finite");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("belief does not sum to 1");
    return b;
}

bool Belief::in_simplex() const {
    for (double p : probs)
        if (p < -1e-9) return false;
    return true;
}

namespace {

Matrix parse_matrix(const nlohmann::json& j, const std::string& key, int rows, int cols) {
    if (!j.contains(key)) throw ParseError("scenario missing key '" + key + "'");
    const auto& arr = j.at(key);
    if (!arr.is_array() || static_cast<int>(arr.size()) != rows)
        throw ValidationError("'" + key + "' must have " + std::to_string(rows) + " rows");
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const auto& row = arr.at(i);
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw ValidationError("'" + key + "' row " + std::to_string(i) + " must have " + std::to_string(cols) +
                                  " entries");
        for (int c = 0; c < cols; ++c) m(i, c) = row.at(c).get<double>();
    }
    return m;
}

}  // namespace

Scenario load_scenario(const std::string& path, bool strict) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
    }

    Scenario scn;
    try {
        scn.instance.space.m_count = j.at("m_count").get<int>();
        scn.instance.space.v_count = j.at("v_count").get<int>();
        scn.instance.space.validate();
        const int n = scn.instance.space.theta_count();
        scn.instance.prior = j.at("prior").get<std::vector<double>>();
        scn.instance.platform_utility = parse_matrix(j, "platform_utility", n, 2);
        scn.instance.user_utility = parse_matrix(j, "user_utility", scn.instance.space.v_count, 2);
        const Matrix q_m = parse_matrix(j, "q_m", scn.instance.space.m_count, scn.instance.space.m_count);
        const Matrix q_v = parse_matrix(j, "q_v", scn.instance.space.v_count, scn.instance.space.v_count);
        scn.instance.validate(true);
        scn.confusion = ConfusionModel::build(q_m, q_v, strict);

        if (j.contains("performative")) {
            const auto& p = j.at("performative");
            if (p.contains("lambda")) {
                const double lambda = p.at("lambda").get<double>();
                if (lambda < 0.0 || lambda > 1.0) throw ValidationError("performative.lambda must be in [0,1]");
                scn.performative_lambda = lambda;
            }
            if (p.contains("rounds")) {
                const int rounds = p.at("rounds").get<int>();
                if (rounds <= 0) throw ValidationError("performative.rounds must be positive");
                scn.performative_rounds = rounds;
            }
            if (p.contains("tolerance")) {
                const double tol = p.at("tolerance").get<double>();
                if (tol <= 0.0) throw ValidationError("performative.tolerance must be positive");
                scn.performative_tolerance = tol;
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("scenario schema error: ") + e.what());
    }
    return scn;
}

}  // namespace persuasion
