#include "persuasion/lp_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "persuasion/errors.hpp"

namespace persuasion {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-11;
constexpr double kPhase1Tol = 1e-8;
constexpr double kResidualTol = 1e-7;
constexpr int kMaxIterations = 50000;

// Tableau-based bounded-variable simplex. Columns are structural variables,
// then one surplus per row (A x - s = b), then one artificial per row for
// phase 1. Nonbasic variables rest at one of their bounds.
class BoundedSimplex {
  public:
    explicit BoundedSimplex(const LPStandardForm& lp)
        : m_(lp.num_rows()), n_(lp.num_vars()), total_(n_ + 2 * m_), lp_(lp) {
        lb_.assign(total_, 0.0);
        ub_.assign(total_, kInf);
        for (int j = 0; j < n_; ++j) {
            lb_[j] = lp.lower_bounds[j];
            ub_[j] = lp.upper_bounds[j];
        }
        // surplus: [0, inf); artificial: [0, inf) until phase 2 pins them to 0
        value_.assign(total_, 0.0);
        at_upper_.assign(total_, false);
        is_basic_.assign(total_, false);
        basis_.assign(m_, -1);
        tab_.assign(m_, std::vector<double>(total_, 0.0));
        rhs_basic_.assign(m_, 0.0);
    }

    LPSolution run() {
        if (!initialize()) return finish(LPStatus::Infeasible);

        // Phase 1: drive artificials to zero.
        std::vector<double> phase1(total_, 0.0);
        for (int i = 0; i < m_; ++i) phase1[artificial(i)] = -1.0;
        const LPStatus p1 = iterate(phase1);
        if (p1 == LPStatus::Unbounded) throw NumericalInstability("phase 1 reported unbounded");
        double infeas = 0.0;
        for (int i = 0; i < m_; ++i) infeas += current_value(artificial(i));
        if (infeas > kPhase1Tol) return finish(LPStatus::Infeasible);

        // Phase 2: artificials frozen at zero.
        for (int i = 0; i < m_; ++i) ub_[artificial(i)] = 0.0;
        std::vector<double> phase2(total_, 0.0);
        for (int j = 0; j < n_; ++j) phase2[j] = lp_.objective[j];
        const LPStatus p2 = iterate(phase2);
        if (p2 == LPStatus::Unbounded) return finish(LPStatus::Unbounded);
        return finish(LPStatus::Optimal);
    }

  private:
    int surplus(int row) const { return n_ + row; }
    int artificial(int row) const { return n_ + m_ + row; }

    double column_entry(int row, int col) const {
        if (col < n_) return lp_.inequality_matrix(row, col);
        if (col < n_ + m_) return col - n_ == row ? -1.0 : 0.0;
        return col - n_ - m_ == row ? art_sign_[row] : 0.0;
    }

    double current_value(int col) const {
        if (is_basic_[col]) {
            for (int i = 0; i < m_; ++i)
                if (basis_[i] == col) return rhs_basic_[i];
        }
        return value_[col];
    }

    bool initialize() {
        // Structural variables start at a finite bound (lower preferred).
        for (int j = 0; j < n_; ++j) {
            if (std::isfinite(lb_[j])) {
                value_[j] = lb_[j];
                at_upper_[j] = false;
            } else if (std::isfinite(ub_[j])) {
                value_[j] = ub_[j];
                at_upper_[j] = true;
            } else {
                throw ValidationError("simplex requires at least one finite bound per variable");
            }
        }
        art_sign_.assign(m_, 1.0);
        for (int i = 0; i < m_; ++i) {
            double r = lp_.inequality_rhs[i];
            for (int j = 0; j < n_; ++j) r -= lp_.inequality_matrix(i, j) * value_[j];
            art_sign_[i] = r >= 0.0 ? 1.0 : -1.0;
            const int a = artificial(i);
            basis_[i] = a;
            is_basic_[a] = true;
            rhs_basic_[i] = std::abs(r);
            // tableau row = B^-1 * columns with B = diag(sign)
            for (int c = 0; c < total_; ++c) tab_[i][c] = art_sign_[i] * column_entry(i, c);
        }
        return true;
    }

    LPStatus iterate(const std::vector<double>& cost) {
        for (int iter = 0; iter < kMaxIterations; ++iter) {
            // reduced costs d_j = c_j - c_B . tab[:, j]
            int entering = -1;
            int direction = 0;
            for (int j = 0; j < total_; ++j) {
                if (is_basic_[j] || lb_[j] == ub_[j]) continue;
                double d = cost[j];
                for (int i = 0; i < m_; ++i) {
                    const double cb = cost[basis_[i]];
                    if (cb != 0.0) d -= cb * tab_[i][j];
                }
                if (!at_upper_[j] && d > kReducedCostTol) {
                    entering = j;
                    direction = +1;
                    break;  // Bland: first eligible index
                }
                if (at_upper_[j] && d < -kReducedCostTol) {
                    entering = j;
                    direction = -1;
                    break;
                }
            }
            if (entering < 0) return LPStatus::Optimal;

            // Ratio test: how far can the entering variable move?
            const double span = ub_[entering] - lb_[entering];
            double limit = span;  // may be inf
            int leave_row = -1;
            int leave_var = -1;
            bool leave_to_upper = false;
            for (int i = 0; i < m_; ++i) {
                const double w = direction * tab_[i][entering];
                const int bvar = basis_[i];
                double cand = kInf;
                bool to_upper = false;
                if (w > kPivotTol) {
                    cand = (rhs_basic_[i] - lb_[bvar]) / w;
                } else if (w < -kPivotTol) {
                    if (std::isfinite(ub_[bvar])) cand = (ub_[bvar] - rhs_basic_[i]) / (-w);
                    to_upper = true;
                } else {
                    continue;
                }
                if (cand < -1e-12) cand = 0.0;
                // Bland on ties: prefer the smallest leaving variable index.
                if (cand < limit - 1e-12 || (cand < limit + 1e-12 && leave_row >= 0 && bvar < leave_var)) {
                    limit = std::max(cand, 0.0);
                    leave_row = i;
                    leave_var = bvar;
                    leave_to_upper = to_upper;
                }
            }

            if (!std::isfinite(limit)) return LPStatus::Unbounded;

            if (leave_row < 0 || span <= limit + 1e-12) {
                // Bound flip: entering moves across its interval, basis unchanged.
                if (!std::isfinite(span)) return LPStatus::Unbounded;
                for (int i = 0; i < m_; ++i) rhs_basic_[i] -= direction * span * tab_[i][entering];
                at_upper_[entering] = !at_upper_[entering];
                value_[entering] = at_upper_[entering] ? ub_[entering] : lb_[entering];
                continue;
            }

            // Pivot: entering becomes basic at its new value.
            const double enter_start = at_upper_[entering] ? ub_[entering] : lb_[entering];
            const double enter_value = enter_start + direction * limit;
            for (int i = 0; i < m_; ++i) rhs_basic_[i] -= direction * limit * tab_[i][entering];

            const double pivot = tab_[leave_row][entering];
            if (std::abs(pivot) < kPivotTol) throw NumericalInstability("vanishing pivot element");

            is_basic_[leave_var] = false;
            at_upper_[leave_var] = leave_to_upper;
            value_[leave_var] = leave_to_upper ? ub_[leave_var] : lb_[leave_var];
            is_basic_[entering] = true;
            basis_[leave_row] = entering;
            rhs_basic_[leave_row] = enter_value;

            const double inv_p = 1.0 / pivot;
            for (int c = 0; c < total_; ++c) tab_[leave_row][c] *= inv_p;
            for (int i = 0; i < m_; ++i) {
                if (i == leave_row) continue;
                const double f = tab_[i][entering];
                if (f == 0.0) continue;
                for (int c = 0; c < total_; ++c) tab_[i][c] -= f * tab_[leave_row][c];
                tab_[i][entering] = 0.0;  // keep the unit column exact
            }
            tab_[leave_row][entering] = 1.0;
        }
        throw NumericalInstability("simplex iteration limit reached");
    }

    LPSolution finish(LPStatus status) {
        LPSolution sol;
        sol.status = status;
        if (status != LPStatus::Optimal) return sol;

        sol.variables.assign(n_, 0.0);
        for (int j = 0; j < n_; ++j) {
            // pivot noise only; bounds are hard
            sol.variables[j] = std::min(std::max(current_value(j), lb_[j]), ub_[j]);
        }
        sol.objective_value = lp_.objective_constant + dot(lp_.objective, sol.variables);

        for (int i = 0; i < m_; ++i) {
            double r = -lp_.inequality_rhs[i];
            for (int j = 0; j < n_; ++j) r += lp_.inequality_matrix(i, j) * sol.variables[j];
            if (r < -kResidualTol)
                throw NumericalInstability("constraint residual " + std::to_string(r) + " at claimed optimum");
            if (std::abs(r) <= 1e-9) sol.active_constraints.push_back(i);
        }
        return sol;
    }

    const int m_;
    const int n_;
    const int total_;
    const LPStandardForm& lp_;
    std::vector<double> lb_, ub_, value_, rhs_basic_, art_sign_;
    std::vector<bool> at_upper_, is_basic_;
    std::vector<int> basis_;
    std::vector<std::vector<double>> tab_;
};

}  // namespace

void LPStandardForm::validate() const {
    const int n = num_vars();
    if (inequality_matrix.rows != num_rows() || (num_rows() > 0 && inequality_matrix.cols != n))
        throw DimensionError("LP matrix dimensions inconsistent");
    if (static_cast<int>(inequality_rhs.size()) != num_rows()) throw DimensionError("LP rhs length mismatch");
    if (static_cast<int>(lower_bounds.size()) != n || static_cast<int>(upper_bounds.size()) != n)
        throw DimensionError("LP bound length mismatch");
    for (int j = 0; j < n; ++j) {
        if (lower_bounds[j] > upper_bounds[j]) throw ValidationError("LP lower bound exceeds upper bound");
        if (!std::isfinite(objective[j])) throw ValidationError("LP objective entry not finite");
    }
    for (double b : inequality_rhs)
        if (!std::isfinite(b)) throw ValidationError("LP rhs entry not finite");
}

LPStandardForm build_direct_lp(const Instance& instance, const ConfusionModel& confusion) {
    const int n = instance.space.theta_count();
    if (confusion.theta_count() != n) throw DimensionError("confusion does not match instance");

    // Per-true-state ingredients: objective gain and the incentive weight
    // h(theta) = (w(1,v) - w(0,v)) mu(theta).
    std::vector<double> gain(n), h(n);
    double constant = 0.0;
    double h_sum = 0.0;
    for (int theta = 0; theta < n; ++theta) {
        const int v = instance.space.v_of(theta);
        gain[theta] = (instance.u(1, theta) - instance.u(0, theta)) * instance.prior[theta];
        h[theta] = (instance.w(1, v) - instance.w(0, v)) * instance.prior[theta];
        constant += instance.prior[theta] * instance.u(0, theta);
        h_sum += h[theta];
    }

    // pitilde = Q^T pi, so a functional <g, pitilde> becomes <Q g, pi>
    LPStandardForm lp;
    lp.objective = mat_vec(confusion.q_theta, gain);
    const std::vector<double> ic_row = mat_vec(confusion.q_theta, h);

    // Row 0: share recommendation incentive, sum_theta h pitilde >= 0.
    // Row 1: not-share recommendation, sum_theta -h (1 - pitilde) >= 0,
    // i.e. the same coefficients with rhs sum_theta h.
    lp.inequality_matrix = Matrix(2, n);
    for (int j = 0; j < n; ++j) {
        lp.inequality_matrix(0, j) = ic_row[j];
        lp.inequality_matrix(1, j) = ic_row[j];
    }
    lp.inequality_rhs = {0.0, h_sum};
    lp.lower_bounds.assign(n, 0.0);
    lp.upper_bounds.assign(n, 1.0);
    lp.objective_constant = constant;
    return lp;
}

LPStandardForm build_reformulated_lp(const Instance& instance, const ConfusionModel& confusion) {
    const int n = instance.space.theta_count();
    if (confusion.theta_count() != n) throw DimensionError("confusion does not match instance");

    std::vector<double> gain(n), h(n);
    double constant = 0.0;
    double h_sum = 0.0;
    for (int theta = 0; theta < n; ++theta) {
        const int v = instance.space.v_of(theta);
        gain[theta] = (instance.u(1, theta) - instance.u(0, theta)) * instance.prior[theta];
        h[theta] = (instance.w(1, v) - instance.w(0, v)) * instance.prior[theta];
        constant += instance.prior[theta] * instance.u(0, theta);
        h_sum += h[theta];
    }

    // Variables: [pi (n) | pitilde (n)]. The incentive rows and the objective
    // depend only on pitilde; 2n linking rows encode Q^T pi = pitilde.
    LPStandardForm lp;
    lp.objective.assign(2 * n, 0.0);
    for (int t = 0; t < n; ++t) lp.objective[n + t] = gain[t];

    lp.inequality_matrix = Matrix(2 + 2 * n, 2 * n);
    lp.inequality_rhs.assign(2 + 2 * n, 0.0);
    for (int t = 0; t < n; ++t) {
        lp.inequality_matrix(0, n + t) = h[t];
        lp.inequality_matrix(1, n + t) = h[t];
    }
    lp.inequality_rhs[1] = h_sum;
    for (int t = 0; t < n; ++t) {
        const int pos = 2 + 2 * t;
        for (int j = 0; j < n; ++j) {
            lp.inequality_matrix(pos, j) = confusion.q_theta(j, t);
            lp.inequality_matrix(pos + 1, j) = -confusion.q_theta(j, t);
        }
        lp.inequality_matrix(pos, n + t) = -1.0;
        lp.inequality_matrix(pos + 1, n + t) = 1.0;
    }
    lp.lower_bounds.assign(2 * n, 0.0);
    lp.upper_bounds.assign(2 * n, 1.0);
    lp.objective_constant = constant;
    return lp;
}

LPSolution solve_lp(const LPStandardForm& lp) {
    lp.validate();
    BoundedSimplex simplex(lp);
    return simplex.run();
}

LPSolution solve_lp_with_secondary(const LPStandardForm& lp, double primary_value,
                                   const std::vector<double>& secondary_objective) {
    lp.validate();
    if (static_cast<int>(secondary_objective.size()) != lp.num_vars())
        throw DimensionError("secondary objective length mismatch");

    LPStandardForm face = lp;
    const int n = lp.num_vars();
    const int m = lp.num_rows();
    Matrix with_face(m + 1, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) with_face(i, j) = lp.inequality_matrix(i, j);
    for (int j = 0; j < n; ++j) with_face(m, j) = lp.objective[j];
    face.inequality_matrix = std::move(with_face);
    face.inequality_rhs.push_back(primary_value - lp.objective_constant - 1e-9);
    face.objective = secondary_objective;

    LPSolution sol = solve_lp(face);
    if (sol.status == LPStatus::Optimal)
        sol.objective_value = lp.objective_constant + dot(lp.objective, sol.variables);
    return sol;
}

}  // namespace persuasion
