#include "persuasion/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "persuasion/errors.hpp"
#include "persuasion/lp_engine.hpp"
#include "persuasion/rng.hpp"

namespace persuasion {

namespace {

constexpr double kIcSlackTol = 1e-9;
constexpr long long kMaxGridPoints = 100000000;  // 1e8

int parse_grid_k(double grid_step, int max_k) {
    if (!(grid_step > 0.0) || grid_step > 1.0) throw ValidationError("grid_step must be in (0, 1]");
    const long long k = std::llround(1.0 / grid_step);
    if (k < 1 || k > max_k) throw ValidationError("grid_step must be 1/k with k <= " + std::to_string(max_k));
    if (std::abs(1.0 / static_cast<double>(k) - grid_step) > 1e-3 / static_cast<double>(k))
        throw ValidationError("grid_step must be a reciprocal 1/k");
    return static_cast<int>(k);
}

struct GridBest {
    double value = -std::numeric_limits<double>::infinity();
    long long index = -1;

    // total order: larger value wins, ties go to the smaller grid index so
    // serial and parallel scans agree bit for bit
    bool better_than(const GridBest& other) const {
        if (value != other.value) return value > other.value;
        return other.index < 0 || (index >= 0 && index < other.index);
    }
};

struct OracleWorkspace {
    int n = 0;
    int k = 0;
    long long total = 0;
    std::vector<double> levels;     // grid values 0..1
    std::vector<double> objective;  // per pi(1|theta_hat), confusion folded in
    std::vector<double> ic_row;
    double ic_rhs1 = 0.0;  // not-share recommendation row rhs
    double constant = 0.0;

    GridBest evaluate(long long index) const {
        GridBest point;
        double value = constant;
        double ic = 0.0;
        long long rest = index;
        for (int j = 0; j < n; ++j) {
            const double p = levels[rest % (k + 1)];
            rest /= (k + 1);
            value += objective[j] * p;
            ic += ic_row[j] * p;
        }
        if (ic < -kIcSlackTol || ic < ic_rhs1 - kIcSlackTol) return point;  // index -1 marks infeasible
        point.value = value;
        point.index = index;
        return point;
    }

    SignalingScheme scheme_at(long long index) const {
        SignalingScheme s;
        s.share_prob.resize(n);
        long long rest = index;
        for (int j = 0; j < n; ++j) {
            s.share_prob[j] = levels[rest % (k + 1)];
            rest /= (k + 1);
        }
        return s;
    }
};

OracleWorkspace make_oracle_workspace(const Instance& instance, const ConfusionModel& confusion, double grid_step) {
    const int n = instance.space.theta_count();
    if (confusion.theta_count() != n) throw DimensionError("confusion does not match instance");
    if (n > 6) throw GridTooLarge("brute-force oracle supports at most 6 joint states");

    OracleWorkspace ws;
    ws.n = n;
    ws.k = parse_grid_k(grid_step, 40);
    ws.total = 1;
    for (int j = 0; j < n; ++j) {
        ws.total *= ws.k + 1;
        if (ws.total > kMaxGridPoints) throw GridTooLarge("oracle grid exceeds 1e8 points");
    }
    ws.levels.resize(ws.k + 1);
    for (int i = 0; i <= ws.k; ++i) ws.levels[i] = static_cast<double>(i) / ws.k;

    const LPStandardForm lp = build_direct_lp(instance, confusion);
    ws.objective = lp.objective;
    ws.ic_row.resize(n);
    for (int j = 0; j < n; ++j) ws.ic_row[j] = lp.inequality_matrix(0, j);
    ws.ic_rhs1 = lp.inequality_rhs[1];
    ws.constant = lp.objective_constant;
    return ws;
}

OracleResult oracle_scan(const OracleWorkspace& ws, bool parallel) {
    GridBest best;
    if (parallel) {
#pragma omp parallel
        {
            GridBest local;
#pragma omp for schedule(static)
            for (long long idx = 0; idx < ws.total; ++idx) {
                const GridBest point = ws.evaluate(idx);
                if (point.index >= 0 && point.better_than(local)) local = point;
            }
#pragma omp critical
            {
                if (local.index >= 0 && local.better_than(best)) best = local;
            }
        }
    } else {
        for (long long idx = 0; idx < ws.total; ++idx) {
            const GridBest point = ws.evaluate(idx);
            if (point.index >= 0 && point.better_than(best)) best = point;
        }
    }
    if (best.index < 0) throw NumericalInstability("oracle found no feasible grid point");

    OracleResult res;
    res.value = best.value;
    res.scheme = ws.scheme_at(best.index);
    return res;
}

}  // namespace

OracleResult brute_force_value(const Instance& instance, const ConfusionModel& confusion, double grid_step) {
    return oracle_scan(make_oracle_workspace(instance, confusion, grid_step), true);
}

OracleResult brute_force_value_serial(const Instance& instance, const ConfusionModel& confusion, double grid_step) {
    return oracle_scan(make_oracle_workspace(instance, confusion, grid_step), false);
}

double posterior_value(const Instance& instance, const ConfusionModel& confusion, const std::vector<double>& rho_hat) {
    const Belief predicted = Belief::make_signed(SpaceTag::PredictedSpace, rho_hat);
    const Belief truth = true_from_predicted(predicted, confusion);
    const int action = best_response(instance, truth);
    double s = 0.0;
    for (int theta = 0; theta < instance.space.theta_count(); ++theta)
        s += truth.probs[theta] * instance.u(action, theta);
    return s;
}

namespace {

void enumerate_compositions(int remaining, int slot, int n, int k, std::vector<int>& digits,
                            std::vector<double>& out) {
    if (slot == n - 1) {
        digits[slot] = remaining;
        for (int j = 0; j < n; ++j) out.push_back(static_cast<double>(digits[j]) / k);
        return;
    }
    for (int d = 0; d <= remaining; ++d) {
        digits[slot] = d;
        enumerate_compositions(remaining - d, slot + 1, n, k, digits, out);
    }
}

struct ConcavePoint {
    double value = -std::numeric_limits<double>::infinity();
    long long order = -1;

    bool better_than(const ConcavePoint& other) const {
        if (value != other.value) return value > other.value;
        return other.order < 0 || (order >= 0 && order < other.order);
    }
};

constexpr int kRaySamples = 50;

ConcavePoint concavification_at_point(const Instance& instance, const ConfusionModel& confusion,
                                      const std::vector<double>& mu_hat, const double* p, int n, long long point_idx) {
    ConcavePoint best;
    std::vector<double> direction(n), q(n);
    double moved = 0.0;
    for (int j = 0; j < n; ++j) {
        direction[j] = mu_hat[j] - p[j];
        moved += std::abs(direction[j]);
    }
    if (moved <= 1e-14) return best;  // the prior itself; covered by any ray's s=0 endpoint

    double s_max = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j)
        if (direction[j] < -1e-15) s_max = std::min(s_max, mu_hat[j] / (-direction[j]));
    if (!std::isfinite(s_max)) return best;

    const double value_p = posterior_value(instance, confusion, std::vector<double>(p, p + n));
    for (int r = 0; r <= kRaySamples; ++r) {
        const double s = s_max * r / kRaySamples;
        for (int j = 0; j < n; ++j) q[j] = mu_hat[j] + s * direction[j];
        const double weight_p = s / (1.0 + s);
        const double value = weight_p * value_p + (1.0 - weight_p) * posterior_value(instance, confusion, q);
        const ConcavePoint cand{value, point_idx * (kRaySamples + 1) + r};
        if (cand.better_than(best)) best = cand;
    }
    return best;
}

double concavification_impl(const Instance& instance, const ConfusionModel& confusion, double grid_step,
                            bool parallel) {
    const int n = instance.space.theta_count();
    if (confusion.theta_count() != n) throw DimensionError("confusion does not match instance");
    const int k = parse_grid_k(grid_step, 1000);

    // grid points on the predicted-belief simplex
    std::vector<double> pts;
    {
        double count = 1.0;  // C(k+n-1, n-1)
        for (int i = 1; i < n; ++i) count *= static_cast<double>(k + i) / i;
        if (count * (kRaySamples + 1) > kMaxGridPoints) throw GridTooLarge("concavification grid exceeds 1e8 samples");
        std::vector<int> digits(n, 0);
        pts.reserve(static_cast<size_t>(count) * n);
        enumerate_compositions(k, 0, n, k, digits, pts);
    }
    const long long num_pts = static_cast<long long>(pts.size()) / n;

    const std::vector<double> mu_hat = mat_vec(confusion.q_theta, instance.prior);

    ConcavePoint best;
    if (parallel) {
#pragma omp parallel
        {
            ConcavePoint local;
#pragma omp for schedule(static)
            for (long long i = 0; i < num_pts; ++i) {
                const ConcavePoint cand =
                    concavification_at_point(instance, confusion, mu_hat, &pts[i * n], n, i);
                if (cand.better_than(local)) local = cand;
            }
#pragma omp critical
            {
                if (local.better_than(best)) best = local;
            }
        }
    } else {
        for (long long i = 0; i < num_pts; ++i) {
            const ConcavePoint cand = concavification_at_point(instance, confusion, mu_hat, &pts[i * n], n, i);
            if (cand.better_than(best)) best = cand;
        }
    }

    // no-split value; also the only candidate when the prior sits on a vertex
    const double at_prior = posterior_value(instance, confusion, mu_hat);
    return std::max(best.value, at_prior);
}

}  // namespace

double concavification_value(const Instance& instance, const ConfusionModel& confusion, double grid_step) {
    return concavification_impl(instance, confusion, grid_step, true);
}

double concavification_value_serial(const Instance& instance, const ConfusionModel& confusion, double grid_step) {
    return concavification_impl(instance, confusion, grid_step, false);
}

double indifference_gap(const Instance& instance, const ConfusionModel& confusion, const Belief& belief) {
    if (belief.tag != SpaceTag::PredictedSpace) throw SpaceTagError("indifference_gap expects a predicted-space belief");
    const Belief truth = true_from_predicted(belief, confusion);
    double w1 = 0.0, w0 = 0.0;
    for (int theta = 0; theta < instance.space.theta_count(); ++theta) {
        const int v = instance.space.v_of(theta);
        w1 += truth.probs[theta] * instance.w(1, v);
        w0 += truth.probs[theta] * instance.w(0, v);
    }
    return w1 - w0;
}

std::vector<HullMembership> check_monotone_condition(const ConfusionModel& q1, const ConfusionModel& q2) {
    const int n = q1.theta_count();
    if (q2.theta_count() != n) throw DimensionError("confusion models differ in dimension");

    std::vector<HullMembership> result;
    result.reserve(n);
    for (int col = 0; col < n; ++col) {
        std::vector<double> target(n);
        for (int i = 0; i < n; ++i) target[i] = q1.q_theta(i, col);

        // Separation LP: max <target, b> - s  s.t.  s >= <column_j, b>,
        // b in [-1, 1]^n. Positive optimum separates the target from the hull.
        LPStandardForm sep;
        sep.objective.assign(n + 1, 0.0);
        for (int i = 0; i < n; ++i) sep.objective[i] = target[i];
        sep.objective[n] = -1.0;
        sep.inequality_matrix = Matrix(n, n + 1);
        sep.inequality_rhs.assign(n, 0.0);
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) sep.inequality_matrix(j, i) = -q2.q_theta(i, j);
            sep.inequality_matrix(j, n) = 1.0;
        }
        sep.lower_bounds.assign(n + 1, -1.0);
        sep.upper_bounds.assign(n + 1, 1.0);
        sep.lower_bounds[n] = -static_cast<double>(n) - 1.0;
        sep.upper_bounds[n] = static_cast<double>(n) + 1.0;

        const LPSolution sep_sol = solve_lp(sep);
        if (sep_sol.status != LPStatus::Optimal) throw NumericalInstability("separation LP did not solve");

        HullMembership member;
        member.column = col;
        if (sep_sol.objective_value > 1e-7) {
            member.is_member = false;
            member.margin = sep_sol.objective_value;
            member.certificate.assign(sep_sol.variables.begin(), sep_sol.variables.begin() + n);
            result.push_back(std::move(member));
            continue;
        }

        // Member: recover convex weights by minimizing the L1 reproduction gap
        // over { beta >= 0, sum beta = 1 }.
        LPStandardForm fit;
        fit.objective.assign(2 * n, 0.0);
        for (int i = 0; i < n; ++i) fit.objective[n + i] = -1.0;
        fit.inequality_matrix = Matrix(2 * n + 2, 2 * n);
        fit.inequality_rhs.assign(2 * n + 2, 0.0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                fit.inequality_matrix(2 * i, j) = -q2.q_theta(i, j);
                fit.inequality_matrix(2 * i + 1, j) = q2.q_theta(i, j);
            }
            fit.inequality_matrix(2 * i, n + i) = 1.0;
            fit.inequality_matrix(2 * i + 1, n + i) = 1.0;
            fit.inequality_rhs[2 * i] = -target[i];
            fit.inequality_rhs[2 * i + 1] = target[i];
        }
        for (int j = 0; j < n; ++j) {
            fit.inequality_matrix(2 * n, j) = 1.0;
            fit.inequality_matrix(2 * n + 1, j) = -1.0;
        }
        fit.inequality_rhs[2 * n] = 1.0;
        fit.inequality_rhs[2 * n + 1] = -1.0;
        fit.lower_bounds.assign(2 * n, 0.0);
        fit.upper_bounds.assign(2 * n, 2.0);
        for (int j = 0; j < n; ++j) fit.upper_bounds[j] = 1.0;

        const LPSolution fit_sol = solve_lp(fit);
        if (fit_sol.status != LPStatus::Optimal) throw NumericalInstability("weight-recovery LP did not solve");

        member.is_member = true;
        member.weights.assign(fit_sol.variables.begin(), fit_sol.variables.begin() + n);

        std::vector<double> reproduced = mat_vec(q2.q_theta, member.weights);
        double err = 0.0;
        for (int i = 0; i < n; ++i) err = std::max(err, std::abs(reproduced[i] - target[i]));
        if (err > 1e-7)
            throw NumericalInstability("hull membership weights reproduce the column with error " +
                                       std::to_string(err));
        result.push_back(std::move(member));
    }
    return result;
}

namespace {

// Smallest nonzero coordinate (in either orientation) among sampled points of
// the indifference plane; the gap is linear along segments so sign changes
// locate plane points exactly.
double smallest_plane_coordinate(const Instance& instance, const ConfusionModel& confusion) {
    const int n = instance.space.theta_count();
    Rng rng(20240901u);
    double smallest = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 512; ++trial) {
        const std::vector<double> a = rng.simplex(n);
        const std::vector<double> b = rng.simplex(n);
        const double ga = indifference_gap(instance, confusion, Belief::make(SpaceTag::PredictedSpace, a));
        const double gb = indifference_gap(instance, confusion, Belief::make(SpaceTag::PredictedSpace, b));
        if (!(ga * gb < 0.0)) continue;
        const double t = ga / (ga - gb);
        for (int j = 0; j < n; ++j) {
            const double x = a[j] + t * (b[j] - a[j]);
            if (x > 1e-9) smallest = std::min(smallest, x);
            if (1.0 - x > 1e-9) smallest = std::min(smallest, 1.0 - x);
        }
    }
    return smallest;
}

}  // namespace

LipschitzReport lipschitz_probe(const Instance& instance, const ConfusionModel& q1, const ConfusionModel& q2) {
    const int n = instance.space.theta_count();
    if (q1.theta_count() != n || q2.theta_count() != n) throw DimensionError("confusion models do not match instance");

    LipschitzReport report;
    report.value_q1 = solve_lp(build_direct_lp(instance, q1)).objective_value;
    report.value_q2 = solve_lp(build_direct_lp(instance, q2)).objective_value;
    report.delta_u = std::abs(report.value_q1 - report.value_q2);

    Matrix diff(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) diff(i, j) = q1.q_theta(i, j) - q2.q_theta(i, j);
    report.delta_q = inf_norm(diff);
    report.ratio = report.delta_q > 0.0 ? report.delta_u / report.delta_q : 0.0;

    double u_max = 0.0, u_lo = std::numeric_limits<double>::infinity(), u_hi = -u_lo;
    for (double u : instance.platform_utility.data) {
        u_max = std::max(u_max, std::abs(u));
        u_lo = std::min(u_lo, u);
        u_hi = std::max(u_hi, u);
    }
    const double range = u_hi - u_lo;

    double s_min = std::min(smallest_plane_coordinate(instance, q1), smallest_plane_coordinate(instance, q2));
    const double c_hat = std::isfinite(s_min) ? range / s_min : range * n;
    const double m_norm = std::max(inf_norm(q1.v_theta), inf_norm(q2.v_theta));
    report.bound_estimate = n * (3.0 * c_hat + m_norm * m_norm * u_max);
    return report;
}

}  // namespace persuasion
