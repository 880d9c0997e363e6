#pragma once

#include <chrono>
#include <cstdint>
#include <queue>
#include <vector>

#include "orem/simplex.hpp"

namespace orem {

struct BnbOptions {
    double abs_gap = 0.0;
    double rel_gap = 1e-6;
    double int_tol = 1e-6;
    long node_limit = 200000;
    double time_limit_s = 3600.0;
    std::string branching = "most-fractional";      // ties by lowest index
    std::string node_selection = "best-bound";      // ties by lowest node id
    LpOptions lp;
};

enum class MilpStatus { optimal, infeasible, unbounded, limit_reached };

struct BnbLogRow {
    long node = 0;
    int depth = 0;
    double lp_objective = 0.0;
    double best_bound = 0.0;
    double incumbent = 0.0;
    bool has_incumbent = false;
};

struct MilpSolution {
    MilpStatus status = MilpStatus::infeasible;
    std::vector<double> x;
    double objective = 0.0;
    double best_bound = -kInf;
    long nodes = 0;
    bool limit_hit = false;
    std::vector<BnbLogRow> log;

    double gap() const {
        if (status != MilpStatus::optimal && x.empty()) return kInf;
        return std::abs(objective - best_bound) / std::max(1.0, std::abs(objective));
    }
};

inline void emit_solve_log_csv(const MilpSolution& sol, std::ostream& out) {
    out << "node,depth,lp_objective,best_bound,incumbent\n";
    for (const auto& r : sol.log) {
        out << r.node << ',' << r.depth << ',' << csv::format_double(r.lp_objective) << ','
            << csv::format_double(r.best_bound) << ',';
        if (r.has_incumbent) out << csv::format_double(r.incumbent);
        out << '\n';
    }
}

namespace bnb_detail {

struct Node {
    long id = 0;
    int depth = 0;
    double bound = -kInf;  // parent LP objective (lower bound for minimization)
    std::vector<double> lb, ub;
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;  // smaller bound first
        return a.id > b.id;                                // then older node
    }
};

inline bool is_int_kind(VarKind k) { return k != VarKind::continuous; }

inline double fractionality(double v) { return std::abs(v - std::round(v)); }

/// Sets mode binaries implied by their power variables; returns false when a
/// group has both powers active (no exact completion exists at this point).
inline bool complete_mode_binaries(const MilpModel& model, std::vector<double>& x, double int_tol) {
    for (const auto& g : model.bess_mode_groups) {
        const bool charging = x[g.p_char] > int_tol;
        const bool discharging = x[g.p_disc] > int_tol;
        if (charging && discharging) return false;
        x[g.u_char] = charging ? 1.0 : 0.0;
        x[g.u_disc] = discharging ? 1.0 : 0.0;
    }
    return true;
}

/// Chooses a mode binary to branch on when the completion fails: the most
/// fractional one, otherwise the group with the largest simultaneous flow.
inline int pick_mode_branch(const MilpModel& model, const std::vector<double>& x,
                            const std::vector<double>& lb, const std::vector<double>& ub,
                            double int_tol) {
    int best = -1;
    double best_frac = int_tol;
    for (const auto& g : model.bess_mode_groups)
        for (int u : {g.u_char, g.u_disc}) {
            if (lb[u] == ub[u]) continue;
            const double f = fractionality(x[u]);
            if (f > best_frac) {
                best_frac = f;
                best = u;
            }
        }
    if (best >= 0) return best;
    double best_flow = 0.0;
    for (const auto& g : model.bess_mode_groups) {
        const double flow = std::min(x[g.p_char], x[g.p_disc]);
        if (flow <= int_tol) continue;
        const int u = lb[g.u_char] != ub[g.u_char] ? g.u_char : (lb[g.u_disc] != ub[g.u_disc] ? g.u_disc : -1);
        if (u >= 0 && flow > best_flow) {
            best_flow = flow;
            best = u;
        }
    }
    return best;
}

}  // namespace bnb_detail

/// Exact branch-and-bound over the simplex relaxation. Deterministic for a
/// fixed model and options: best-bound node selection with node-id
/// tie-breaks, most-fractional branching with index tie-breaks.
inline MilpSolution solve_milp(const MilpModel& model, const BnbOptions& opts = {}) {
    using namespace bnb_detail;

    for (int j = 0; j < model.num_vars(); ++j)
        if (is_int_kind(model.vars[j].kind) &&
            (!std::isfinite(model.vars[j].lb) || !std::isfinite(model.vars[j].ub)))
            throw ModelError("integer variable '" + model.vars[j].name + "' must have finite bounds");

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

    std::vector<char> in_mode_group(model.num_vars(), 0);
    for (const auto& g : model.bess_mode_groups) {
        in_mode_group[g.u_char] = 1;
        in_mode_group[g.u_disc] = 1;
    }

    MilpSolution sol;
    sol.best_bound = kInf;  // tightened to min over open nodes below

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    Node root;
    root.id = 0;
    root.bound = -kInf;
    root.lb.resize(model.num_vars());
    root.ub.resize(model.num_vars());
    for (int j = 0; j < model.num_vars(); ++j) {
        root.lb[j] = model.vars[j].lb;
        root.ub[j] = model.vars[j].ub;
    }
    open.push(std::move(root));

    long next_id = 1;
    bool have_incumbent = false;
    std::vector<double> best_x;
    double best_obj = kInf;
    double proven_bound = -kInf;

    auto prune_threshold = [&] {
        return best_obj - std::max(opts.abs_gap, opts.rel_gap * std::abs(best_obj));
    };

    while (!open.empty()) {
        if (sol.nodes >= opts.node_limit || elapsed() > opts.time_limit_s) {
            sol.limit_hit = true;
            break;
        }
        Node node = open.top();
        open.pop();

        if (have_incumbent && node.bound >= prune_threshold()) {
            // Best-bound order: every remaining node is at least as deep.
            proven_bound = std::max(proven_bound, node.bound);
            break;
        }

        ++sol.nodes;
        LpSolution lp = solve_lp_with_bounds(model, node.lb, node.ub, opts.lp);
        if (lp.status == LpStatus::unbounded) {
            if (sol.nodes == 1) {
                sol.status = MilpStatus::unbounded;
                return sol;
            }
            continue;  // cannot happen with bounded integers; defensive prune
        }
        if (lp.status == LpStatus::iteration_limit) throw SolverError("LP iteration limit inside branch and bound");
        if (lp.status == LpStatus::infeasible) continue;

        BnbLogRow row;
        row.node = sol.nodes;
        row.depth = node.depth;
        row.lp_objective = lp.objective;
        row.best_bound = std::max(proven_bound, node.bound == -kInf ? lp.objective : node.bound);
        row.incumbent = best_obj;
        row.has_incumbent = have_incumbent;
        sol.log.push_back(row);

        if (have_incumbent && lp.objective >= prune_threshold()) continue;

        // Pick the branching variable among fractional integers, leaving mode
        // binaries to the exact completion below where possible.
        int branch_var = -1;
        double branch_frac = opts.int_tol;
        for (int j = 0; j < model.num_vars(); ++j) {
            if (!is_int_kind(model.vars[j].kind) || in_mode_group[j]) continue;
            const double f = fractionality(lp.x[j]);
            if (f > branch_frac) {
                branch_frac = f;
                branch_var = j;
            }
        }

        if (branch_var < 0) {
            // General integers are integral. Mode binaries carry no objective
            // cost, so setting them from their power variables preserves the
            // LP bound exactly; the node is fathomed when that assignment is
            // feasible.
            std::vector<double> candidate = lp.x;
            const bool settled = complete_mode_binaries(model, candidate, opts.int_tol);
            bool fathomed = false;
            if (settled && model.max_violation(candidate) <= 10 * opts.lp.feas_tol) {
                bool integral = true;
                for (int j = 0; j < model.num_vars() && integral; ++j)
                    if (is_int_kind(model.vars[j].kind) && fractionality(candidate[j]) > opts.int_tol)
                        integral = false;
                if (integral) {
                    const double cand_obj = model.objective_value(candidate);
                    for (int j = 0; j < model.num_vars(); ++j)
                        if (is_int_kind(model.vars[j].kind)) candidate[j] = std::round(candidate[j]);
                    if (!have_incumbent || cand_obj < best_obj - 1e-12) {
                        have_incumbent = true;
                        best_obj = cand_obj;
                        best_x = candidate;
                    }
                    fathomed = cand_obj <= lp.objective + 1e-9 * (1.0 + std::abs(lp.objective));
                }
            }
            if (fathomed) continue;

            // Simultaneous charge/discharge (or a binary the completion could
            // not settle): branch on a mode binary that is not yet fixed.
            branch_var = pick_mode_branch(model, lp.x, node.lb, node.ub, opts.int_tol);
            if (branch_var < 0) continue;  // all mode binaries fixed; nothing left to split
        }

        const double v = lp.x[branch_var];
        Node down;
        down.id = next_id++;
        down.depth = node.depth + 1;
        down.bound = lp.objective;
        down.lb = node.lb;
        down.ub = node.ub;
        down.ub[branch_var] = std::floor(v + opts.int_tol);
        Node up;
        up.id = next_id++;
        up.depth = node.depth + 1;
        up.bound = lp.objective;
        up.lb = node.lb;
        up.ub = node.ub;
        up.lb[branch_var] = std::ceil(v - opts.int_tol);
        if (down.ub[branch_var] >= down.lb[branch_var] - 1e-12) open.push(std::move(down));
        if (up.lb[branch_var] <= up.ub[branch_var] + 1e-12) open.push(std::move(up));
    }

    if (!open.empty() && !sol.limit_hit) {
        // Loop exited via the bound cutoff; remaining nodes cannot improve.
        proven_bound = std::max(proven_bound, open.top().bound);
    } else if (open.empty()) {
        proven_bound = have_incumbent ? best_obj : kInf;
    } else {
        proven_bound = std::max(proven_bound, open.top().bound);
    }

    if (!have_incumbent) {
        sol.status = sol.limit_hit ? MilpStatus::limit_reached : MilpStatus::infeasible;
        sol.best_bound = proven_bound;
        return sol;
    }
    sol.status = sol.limit_hit ? MilpStatus::limit_reached : MilpStatus::optimal;
    sol.x = best_x;
    sol.objective = best_obj;
    sol.best_bound = std::min(proven_bound, best_obj);
    return sol;
}

/// Exhaustive verification oracle: enumerates every integer combination and
/// resolves BESS mode binaries either by a relaxed LP (when no simultaneous
/// charge/discharge shows up) or by enumerating the 2^groups on/off patterns.
inline MilpSolution enumerate_oracle(const MilpModel& model, const LpOptions& lp_opts = {},
                                     double int_tol = 1e-6) {
    std::vector<int> int_vars;
    double combos = 1.0;
    std::vector<char> in_mode_group(model.num_vars(), 0);
    for (const auto& g : model.bess_mode_groups) {
        in_mode_group[g.u_char] = 1;
        in_mode_group[g.u_disc] = 1;
    }
    for (int j = 0; j < model.num_vars(); ++j) {
        if (!bnb_detail::is_int_kind(model.vars[j].kind) || in_mode_group[j]) continue;
        if (!std::isfinite(model.vars[j].lb) || !std::isfinite(model.vars[j].ub))
            throw ModelError("enumeration requires finite integer bounds");
        combos *= std::floor(model.vars[j].ub) - std::ceil(model.vars[j].lb) + 1.0;
        int_vars.push_back(j);
        if (combos > 1e5) throw SolverError("enumeration refused: integer space exceeds 1e5 combinations");
    }
    const size_t groups = model.bess_mode_groups.size();

    std::vector<double> lb(model.num_vars()), ub(model.num_vars());
    for (int j = 0; j < model.num_vars(); ++j) {
        lb[j] = model.vars[j].lb;
        ub[j] = model.vars[j].ub;
    }

    MilpSolution best;
    best.status = MilpStatus::infeasible;
    double best_obj = kInf;

    std::vector<long> counter(int_vars.size());
    for (size_t i = 0; i < int_vars.size(); ++i)
        counter[i] = static_cast<long>(std::ceil(model.vars[int_vars[i]].lb));

    auto consider = [&](const LpSolution& lp) {
        std::vector<double> x = lp.x;
        if (!bnb_detail::complete_mode_binaries(model, x, int_tol)) return false;
        if (model.max_violation(x) > 10 * lp_opts.feas_tol) return false;
        const double obj = model.objective_value(x);
        if (obj < best_obj - 1e-12) {
            best_obj = obj;
            best.status = MilpStatus::optimal;
            best.x = x;
            best.objective = obj;
        }
        return true;
    };

    while (true) {
        ++best.nodes;
        for (size_t i = 0; i < int_vars.size(); ++i) {
            lb[int_vars[i]] = static_cast<double>(counter[i]);
            ub[int_vars[i]] = static_cast<double>(counter[i]);
        }

        LpSolution lp = solve_lp_with_bounds(model, lb, ub, lp_opts);
        if (lp.status == LpStatus::optimal && !consider(lp)) {
            // Simultaneous charge/discharge: fall back to explicit patterns.
            if (groups > 12) throw SolverError("enumeration refused: more than 2^12 binary patterns required");
            for (uint32_t pat = 0; pat < (1u << groups); ++pat) {
                for (size_t gi = 0; gi < groups; ++gi) {
                    const auto& g = model.bess_mode_groups[gi];
                    const bool charge_mode = (pat >> gi) & 1u;
                    lb[g.u_char] = ub[g.u_char] = charge_mode ? 1.0 : 0.0;
                    lb[g.u_disc] = ub[g.u_disc] = charge_mode ? 0.0 : 1.0;
                }
                LpSolution plp = solve_lp_with_bounds(model, lb, ub, lp_opts);
                if (plp.status == LpStatus::optimal) {
                    std::vector<double> x = plp.x;
                    if (model.max_violation(x) <= 10 * lp_opts.feas_tol) {
                        const double obj = model.objective_value(x);
                        if (obj < best_obj - 1e-12) {
                            best_obj = obj;
                            best.status = MilpStatus::optimal;
                            best.x = x;
                            best.objective = obj;
                        }
                    }
                }
            }
            for (const auto& g : model.bess_mode_groups) {
                lb[g.u_char] = model.vars[g.u_char].lb;
                ub[g.u_char] = model.vars[g.u_char].ub;
                lb[g.u_disc] = model.vars[g.u_disc].lb;
                ub[g.u_disc] = model.vars[g.u_disc].ub;
            }
        }

        // Advance the mixed-radix counter.
        if (int_vars.empty()) break;
        size_t i = 0;
        for (; i < int_vars.size(); ++i) {
            if (counter[i] + 1 <= static_cast<long>(std::floor(model.vars[int_vars[i]].ub))) {
                ++counter[i];
                break;
            }
            counter[i] = static_cast<long>(std::ceil(model.vars[int_vars[i]].lb));
        }
        if (i == int_vars.size()) break;
    }

    if (best.status == MilpStatus::optimal) best.best_bound = best.objective;
    return best;
}

}  // namespace orem
