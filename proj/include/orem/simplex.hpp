#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "orem/milp.hpp"

namespace orem {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpOptions {
    double feas_tol = 1e-7;
    double opt_tol = 1e-9;
    long iteration_limit = 0;  // 0 -> automatic from problem size
};

struct LpSolution {
    LpStatus status = LpStatus::optimal;
    std::vector<double> x;              // structural variable values
    double objective = 0.0;
    std::vector<double> duals;          // one per row
    std::vector<double> reduced_costs;  // one per structural variable
    long iterations = 0;
    long refactorizations = 0;
};

namespace lp_detail {

struct SparseCol {
    std::vector<int> row;
    std::vector<double> coef;
};

enum class VStatus : uint8_t { basic, at_lower, at_upper, nonbasic_free };

/// Bounded-variable two-phase revised simplex over an explicit basis inverse.
/// Columns: [0, n) structural, [n, n+m) row slacks, [n+m, ...) phase-1
/// artificials. All tie-breaking is by lowest column index.
class Simplex {
public:
    Simplex(const MilpModel& model, const std::vector<double>& lb, const std::vector<double>& ub,
            const LpOptions& opts)
        : opts_(opts), n_(model.num_vars()), m_(model.num_rows()) {
        cols_.resize(n_ + m_);
        for (int r = 0; r < m_; ++r) {
            for (const auto& t : model.rows[r].terms) {
                if (t.coef == 0.0) continue;
                cols_[t.var].row.push_back(r);
                cols_[t.var].coef.push_back(t.coef);
            }
        }
        lo_.assign(n_ + m_, 0.0);
        hi_.assign(n_ + m_, 0.0);
        cost_.assign(n_ + m_, 0.0);
        for (int j = 0; j < n_; ++j) {
            lo_[j] = lb[j];
            hi_[j] = ub[j];
            cost_[j] = model.obj[j];
        }
        b_.resize(m_);
        for (int r = 0; r < m_; ++r) {
            b_[r] = model.rows[r].rhs;
            const int s = n_ + r;
            cols_[s].row.push_back(r);
            cols_[s].coef.push_back(1.0);
            switch (model.rows[r].sense) {
                case Sense::le: lo_[s] = 0.0; hi_[s] = kInf; break;
                case Sense::ge: lo_[s] = -kInf; hi_[s] = 0.0; break;
                case Sense::eq: lo_[s] = 0.0; hi_[s] = 0.0; break;
            }
        }
        obj_constant_ = model.obj_constant;
    }

    LpSolution run() {
        LpSolution sol;
        if (!init_basis()) {  // inconsistent bounds
            sol.status = LpStatus::infeasible;
            return sol;
        }

        if (needs_phase1_) {
            phase_ = 1;
            const LpStatus st = iterate();
            sol.iterations += iters_;
            if (st == LpStatus::iteration_limit) {
                sol.status = st;
                return sol;
            }
            if (phase1_objective() > 1e3 * opts_.feas_tol) {
                sol.status = LpStatus::infeasible;
                sol.iterations = iters_;
                return sol;
            }
            // Pin artificials so they can never carry value again.
            for (int j = total_; j < ncols(); ++j) {
                lo_[j] = 0.0;
                hi_[j] = 0.0;
            }
        }

        phase_ = 2;
        const LpStatus st = iterate();
        sol.status = st;
        sol.iterations = iters_;
        sol.refactorizations = refactor_count_;
        if (st != LpStatus::optimal) return sol;

        sol.x.assign(x_.begin(), x_.begin() + n_);
        sol.objective = obj_constant_;
        for (int j = 0; j < n_; ++j) sol.objective += cost_[j] * x_[j];

        compute_duals();
        sol.duals.assign(y_.data(), y_.data() + m_);
        sol.reduced_costs.resize(n_);
        for (int j = 0; j < n_; ++j)
            sol.reduced_costs[j] = status_[j] == VStatus::basic ? 0.0 : cost_[j] - col_dot(j, y_);
        return sol;
    }

private:
    int ncols() const { return static_cast<int>(cols_.size()); }

    bool init_basis() {
        for (int j = 0; j < ncols(); ++j)
            if (lo_[j] > hi_[j] + opts_.feas_tol) return false;

        total_ = n_ + m_;
        x_.assign(total_, 0.0);
        status_.assign(total_, VStatus::at_lower);
        for (int j = 0; j < n_; ++j) {
            if (std::isfinite(lo_[j])) {
                x_[j] = lo_[j];
                status_[j] = VStatus::at_lower;
            } else if (std::isfinite(hi_[j])) {
                x_[j] = hi_[j];
                status_[j] = VStatus::at_upper;
            } else {
                x_[j] = 0.0;
                status_[j] = VStatus::nonbasic_free;
            }
        }

        // Row residuals with all structurals at their start values.
        Eigen::VectorXd resid = Eigen::Map<const Eigen::VectorXd>(b_.data(), m_);
        for (int j = 0; j < n_; ++j)
            if (x_[j] != 0.0)
                for (size_t k = 0; k < cols_[j].row.size(); ++k) resid[cols_[j].row[k]] -= cols_[j].coef[k] * x_[j];

        basis_.resize(m_);
        in_basis_pos_.assign(total_, -1);
        Binv_ = Eigen::MatrixXd::Zero(m_, m_);
        needs_phase1_ = false;

        for (int r = 0; r < m_; ++r) {
            const int s = n_ + r;
            if (resid[r] >= lo_[s] - opts_.feas_tol && resid[r] <= hi_[s] + opts_.feas_tol) {
                basis_[r] = s;
                status_[s] = VStatus::basic;
                x_[s] = resid[r];
                Binv_(r, r) = 1.0;
            } else {
                // Slack parked at its nearest bound; artificial absorbs the rest.
                const double sv = std::clamp(resid[r], lo_[s], hi_[s]);
                x_[s] = sv;
                status_[s] = sv <= lo_[s] ? VStatus::at_lower : VStatus::at_upper;
                const double gap = resid[r] - sv;
                const int a = ncols();
                cols_.push_back({{r}, {gap >= 0 ? 1.0 : -1.0}});
                lo_.push_back(0.0);
                hi_.push_back(kInf);
                cost_.push_back(0.0);
                x_.push_back(std::abs(gap));
                status_.push_back(VStatus::basic);
                in_basis_pos_.push_back(-1);
                basis_[r] = a;
                Binv_(r, r) = gap >= 0 ? 1.0 : -1.0;
                needs_phase1_ = true;
            }
        }
        for (int r = 0; r < m_; ++r) in_basis_pos_[basis_[r]] = r;
        return true;
    }

    double phase1_objective() const {
        double v = 0.0;
        for (int j = total_; j < ncols(); ++j) v += x_[j];
        return v;
    }

    double current_cost(int j) const {
        if (phase_ == 1) return j >= total_ ? 1.0 : 0.0;
        return j >= total_ ? 0.0 : cost_[j];
    }

    void compute_duals() {
        Eigen::VectorXd cb(m_);
        for (int r = 0; r < m_; ++r) cb[r] = current_cost(basis_[r]);
        y_ = Binv_.transpose() * cb;
    }

    double col_dot(int j, const Eigen::VectorXd& y) const {
        double v = 0.0;
        for (size_t k = 0; k < cols_[j].row.size(); ++k) v += cols_[j].coef[k] * y[cols_[j].row[k]];
        return v;
    }

    /// Entering-variable choice: Dantzig by default, Bland while stalled.
    int price(bool bland, int& dir_out) {
        compute_duals();
        int best = -1;
        double best_score = opts_.opt_tol;
        for (int j = 0; j < ncols(); ++j) {
            if (status_[j] == VStatus::basic) continue;
            if (lo_[j] == hi_[j]) continue;       // fixed, never enters
            if (phase_ == 1 && j >= total_) continue;  // artificials never re-enter
            const double d = current_cost(j) - col_dot(j, y_);
            int dir = 0;
            if (status_[j] == VStatus::at_lower && d < -opts_.opt_tol) dir = +1;
            else if (status_[j] == VStatus::at_upper && d > opts_.opt_tol) dir = -1;
            else if (status_[j] == VStatus::nonbasic_free && std::abs(d) > opts_.opt_tol) dir = d < 0 ? +1 : -1;
            if (dir == 0) continue;
            if (bland) {
                dir_out = dir;
                return j;  // lowest index wins
            }
            if (std::abs(d) > best_score) {
                best_score = std::abs(d);
                best = j;
                dir_out = dir;
            }
        }
        return best;
    }

    LpStatus iterate() {
        const long limit = opts_.iteration_limit > 0 ? opts_.iteration_limit
                                                     : 20000L + 60L * static_cast<long>(m_ + n_);
        long stalled = 0;
        bool bland = false;
        double last_obj = objective_now();

        while (true) {
            if (iters_ >= limit) return LpStatus::iteration_limit;
            ++iters_;

            int dir = 0;
            const int enter = price(bland, dir);
            if (enter < 0) return LpStatus::optimal;

            // FTRAN: basis representation of the entering column.
            Eigen::VectorXd w = Eigen::VectorXd::Zero(m_);
            for (size_t k = 0; k < cols_[enter].row.size(); ++k)
                w += cols_[enter].coef[k] * Binv_.col(cols_[enter].row[k]);

            // Ratio test: smallest step that drives a basic variable (or the
            // entering variable itself) to a bound.
            double best_step = kInf;
            int leave_pos = -1;       // position in basis, -1 -> bound flip
            int leave_to_upper = 0;
            const double span = hi_[enter] - lo_[enter];
            if (std::isfinite(span)) best_step = span;

            for (int r = 0; r < m_; ++r) {
                const double wr = dir * w[r];
                if (std::abs(wr) < 1e-9) continue;
                const int bj = basis_[r];
                double step;
                int to_upper;
                if (wr > 0) {  // basic value decreases toward its lower bound
                    if (!std::isfinite(lo_[bj])) continue;
                    step = (x_[bj] - lo_[bj]) / wr;
                    to_upper = 0;
                } else {  // basic value increases toward its upper bound
                    if (!std::isfinite(hi_[bj])) continue;
                    step = (x_[bj] - hi_[bj]) / wr;
                    to_upper = 1;
                }
                if (step < -1e-9) step = 0.0;
                if (step < best_step - 1e-12 ||
                    (leave_pos >= 0 && step < best_step + 1e-12 && bj < basis_[leave_pos])) {
                    best_step = std::max(step, 0.0);
                    leave_pos = r;
                    leave_to_upper = to_upper;
                }
            }

            if (!std::isfinite(best_step)) return LpStatus::unbounded;

            if (leave_pos < 0) {
                // Entering variable travels the full distance to its other bound.
                apply_step(enter, dir, best_step, w);
                status_[enter] = dir > 0 ? VStatus::at_upper : VStatus::at_lower;
                x_[enter] = dir > 0 ? hi_[enter] : lo_[enter];
            } else {
                const int leave = basis_[leave_pos];
                apply_step(enter, dir, best_step, w);
                x_[leave] = leave_to_upper ? hi_[leave] : lo_[leave];
                status_[leave] = leave_to_upper ? VStatus::at_upper : VStatus::at_lower;
                status_[enter] = VStatus::basic;
                basis_[leave_pos] = enter;
                in_basis_pos_[leave] = -1;
                in_basis_pos_[enter] = leave_pos;
                update_inverse(w, leave_pos);
            }

            if (++since_refresh_ >= 120) refresh_basics();

            // Anti-cycling: fall back to Bland's rule during long stalls.
            const double obj = objective_now();
            if (obj < last_obj - 1e-10 * (1.0 + std::abs(last_obj))) {
                stalled = 0;
                bland = false;
                last_obj = obj;
            } else if (++stalled > 2L * (m_ + 16L)) {
                bland = true;
            }
        }
    }

    double objective_now() const {
        double v = 0.0;
        if (phase_ == 1) {
            for (int j = total_; j < ncols(); ++j) v += x_[j];
        } else {
            for (int j = 0; j < total_; ++j)
                if (cost_[j] != 0.0) v += cost_[j] * x_[j];
        }
        return v;
    }

    void apply_step(int enter, int dir, double step, const Eigen::VectorXd& w) {
        if (step != 0.0) {
            for (int r = 0; r < m_; ++r) x_[basis_[r]] -= step * dir * w[r];
            x_[enter] += step * dir;
        }
    }

    /// Product-form update of the explicit inverse for the pivot (w, r).
    void update_inverse(const Eigen::VectorXd& w, int r) {
        const double wr = w[r];
        pivot_row_ = Binv_.row(r) / wr;
        w_adj_ = w;
        w_adj_[r] = wr - 1.0;
        Binv_.noalias() -= w_adj_ * pivot_row_.transpose();
    }

    /// Recomputes basic values from the inverse to shed accumulated drift;
    /// falls back to full refactorization when the residual is too large.
    void refresh_basics() {
        since_refresh_ = 0;
        Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b_.data(), m_);
        for (int j = 0; j < ncols(); ++j) {
            if (status_[j] == VStatus::basic || x_[j] == 0.0) continue;
            for (size_t k = 0; k < cols_[j].row.size(); ++k) rhs[cols_[j].row[k]] -= cols_[j].coef[k] * x_[j];
        }
        Eigen::VectorXd xb = Binv_ * rhs;

        // Drift check: does B * xb reproduce the reduced rhs?
        Eigen::VectorXd check = Eigen::VectorXd::Zero(m_);
        for (int r = 0; r < m_; ++r) {
            const int j = basis_[r];
            for (size_t k = 0; k < cols_[j].row.size(); ++k) check[cols_[j].row[k]] += cols_[j].coef[k] * xb[r];
        }
        if ((check - rhs).lpNorm<Eigen::Infinity>() > 1e-7 * (1.0 + rhs.lpNorm<Eigen::Infinity>())) {
            refactorize();
            xb = Binv_ * rhs;
        }
        for (int r = 0; r < m_; ++r) x_[basis_[r]] = xb[r];
    }

    void refactorize() {
        ++refactor_count_;
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m_, m_);
        for (int r = 0; r < m_; ++r) {
            const int j = basis_[r];
            for (size_t k = 0; k < cols_[j].row.size(); ++k) B(cols_[j].row[k], r) += cols_[j].coef[k];
        }
        Binv_ = B.partialPivLu().inverse();
    }

    LpOptions opts_;
    int n_ = 0, m_ = 0, total_ = 0;
    int phase_ = 2;
    bool needs_phase1_ = false;
    long iters_ = 0;
    long refactor_count_ = 0;
    int since_refresh_ = 0;
    double obj_constant_ = 0.0;

    std::vector<SparseCol> cols_;
    std::vector<double> lo_, hi_, cost_, b_, x_;
    std::vector<VStatus> status_;
    std::vector<int> basis_, in_basis_pos_;
    Eigen::MatrixXd Binv_;
    Eigen::VectorXd y_;
    Eigen::RowVectorXd pivot_row_;
    Eigen::VectorXd w_adj_;
};

}  // namespace lp_detail

/// Solves the LP relaxation (integrality dropped) with optional bound overrides.
inline LpSolution solve_lp_with_bounds(const MilpModel& model, const std::vector<double>& lb,
                                       const std::vector<double>& ub, const LpOptions& opts = {}) {
    if (model.num_vars() < 1) throw SolverError("model has no variables");
    lp_detail::Simplex s(model, lb, ub, opts);
    return s.run();
}

inline LpSolution solve_lp(const MilpModel& model, const LpOptions& opts = {}) {
    std::vector<double> lb(model.num_vars()), ub(model.num_vars());
    for (int j = 0; j < model.num_vars(); ++j) {
        lb[j] = model.vars[j].lb;
        ub[j] = model.vars[j].ub;
    }
    return solve_lp_with_bounds(model, lb, ub, opts);
}

}  // namespace orem
