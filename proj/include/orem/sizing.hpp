#pragma once

#include <cmath>
#include <map>
#include <optional>

#include "orem/cost_model.hpp"
#include "orem/milp.hpp"

namespace orem {

/// Battery pack parameters; commercial packs come in 3900 kWh modules, so the
/// installed energy is always unit_energy_kwh * N_BESS.
struct BessParams {
    double unit_energy_kwh = 3900.0;
    double soc_min = 0.1;
    double soc_max = 0.9;
    double charge_eff = 0.95;
    double discharge_eff = 0.95;
    double rate_limit_per_hour = 0.5;  // max power as a fraction of installed energy

    void validate() const {
        if (unit_energy_kwh <= 0.0) throw InputError("BESS unit energy must be positive");
        if (!(soc_min >= 0.0 && soc_min < soc_max && soc_max <= 1.0))
            throw InputError("BESS SOC window must satisfy 0 <= soc_min < soc_max <= 1");
        if (!(charge_eff > 0.0 && charge_eff <= 1.0 && discharge_eff > 0.0 && discharge_eff <= 1.0))
            throw InputError("BESS efficiencies must lie in (0, 1]");
        if (rate_limit_per_hour <= 0.0) throw InputError("BESS rate limit must be positive");
    }
};

/// Geometric usage throttle applied from the second heuristic iteration on.
struct IterationConstraintSet {
    int iteration = 2;                    // i >= 1; factor (1-alpha)^(i-1)
    double usage_control_factor = 0.001;  // alpha
    double previous_throughput_kwh = 0.0; // annualized charge+discharge of iteration i-1
    double previous_charge_cap_kw = 0.0;  // informational, for reports
    double previous_discharge_cap_kw = 0.0;

    void validate() const {
        if (iteration < 1) throw InputError("iteration index must be >= 1");
        if (!(usage_control_factor > 0.0 && usage_control_factor < 1.0))
            throw InputError("usage control factor must lie in (0, 1)");
        if (previous_throughput_kwh < 0.0) throw InputError("previous throughput must be non-negative");
    }

    double power_factor() const { return std::pow(1.0 - usage_control_factor, iteration - 1); }
};

enum class ModelVariant { classic, simplified };

struct BuildOptions {
    /// Replaces the hard power balance with a penalized shortfall so
    /// infeasible hours can be localized. Off by default.
    bool load_shedding_slack = false;
    double load_shedding_penalty = 1e9;  // $ per kWh
};

/// Integer search box implied by the scenario, shared with the enumeration
/// oracle through the model bounds: ceil(peak/rated)+2 units per candidate,
/// ceil(2 * peak daily energy / unit energy) BESS modules.
inline int unit_count_upper_bound(double peak_load_kw, double rated_kw) {
    return static_cast<int>(std::ceil(peak_load_kw / rated_kw)) + 2;
}

inline int bess_count_upper_bound(double max_daily_energy_kwh, double unit_energy_kwh) {
    return static_cast<int>(std::ceil(2.0 * max_daily_energy_kwh / unit_energy_kwh));
}

/// Assembles the sizing MILP: per-cell power balance with curtailment, SOC
/// recursion with cyclic closure, SOC window against installed energy,
/// charge/discharge exclusion binaries with big-M and rate caps, modular
/// storage sizing, and the four-part lifetime cost objective.
inline MilpModel build_milp(const ScenarioConfig& scenario, const BessParams& bess,
                            ModelVariant variant, const IterationConstraintSet* iter_cons = nullptr,
                            const BuildOptions& build = {}) {
    scenario.validate();
    bess.validate();
    if (iter_cons) iter_cons->validate();

    if (variant == ModelVariant::simplified)
        for (const auto& c : scenario.candidates)
            if (c.technology == Technology::WEC || c.technology == Technology::TEC)
                throw ModelError("simplified variant requires a pruned candidate list (found " + c.name + ")");

    const TimeGrid& grid = scenario.load.grid;
    for (const auto& c : scenario.candidates)
        if (!c.profile.grid.same_shape(grid)) throw ModelError("candidate grid does not match load grid");

    const int P = grid.periods();
    const int C = static_cast<int>(scenario.candidates.size());

    double peak_load = scenario.load.demand_kw.max_value();
    double max_daily = 0.0;
    for (int p = 0; p < P; ++p) {
        double d = 0.0;
        for (int h = 0; h < kHoursPerDay; ++h) d += scenario.load.demand_kw.at(p, h);
        max_daily = std::max(max_daily, d);
    }

    const int n_bess_ub = bess_count_upper_bound(max_daily, bess.unit_energy_kwh);
    const double big_m_power = bess.rate_limit_per_hour * bess.unit_energy_kwh * n_bess_ub;
    const double power_factor = iter_cons ? iter_cons->power_factor() : 1.0;
    const double e_ub = bess.soc_max * bess.unit_energy_kwh * n_bess_ub;

    MilpModel m;

    std::vector<int> n_var(C);
    for (int c = 0; c < C; ++c) {
        const auto& cand = scenario.candidates[c];
        const int ub = unit_count_upper_bound(peak_load, cand.rated_kw);
        n_var[c] = m.add_var("N_" + cand.name, VarKind::integer, 0.0, ub);
        m.bind_role(Role::unit_count, c, 0, n_var[c]);
        m.obj[n_var[c]] = lifetime_cost_per_unit(cand.cost, scenario.lifetime_years);
    }
    const int n_bess = m.add_var("N_BESS", VarKind::integer, 0.0, n_bess_ub);
    m.bind_role(Role::n_bess, 0, 0, n_bess);
    m.obj[n_bess] = bess.unit_energy_kwh * lifetime_cost_per_unit(scenario.bess_cost_per_kwh, scenario.lifetime_years);

    struct CellVars {
        int p_char, p_disc, p_curt, e, u_char, u_disc, shed;
    };
    std::vector<CellVars> cell(static_cast<size_t>(P) * kHoursPerDay);

    auto tag = [](int p, int h) { return std::to_string(p + 1) + "_" + std::to_string(h); };

    for (int p = 0; p < P; ++p) {
        for (int h = 0; h < kHoursPerDay; ++h) {
            CellVars cv;
            cv.p_char = m.add_var("Pchar_" + tag(p, h), VarKind::continuous, 0.0, big_m_power * power_factor);
            cv.p_disc = m.add_var("Pdisc_" + tag(p, h), VarKind::continuous, 0.0, big_m_power * power_factor);
            cv.p_curt = m.add_var("Pcurt_" + tag(p, h), VarKind::continuous, 0.0, kInf);
            cv.e = m.add_var("Ebess_" + tag(p, h), VarKind::continuous, 0.0, e_ub);
            cv.u_char = m.add_var("Uchar_" + tag(p, h), VarKind::binary, 0.0, 1.0);
            cv.u_disc = m.add_var("Udisc_" + tag(p, h), VarKind::binary, 0.0, 1.0);
            cv.shed = -1;
            if (build.load_shedding_slack) {
                cv.shed = m.add_var("Shed_" + tag(p, h), VarKind::continuous, 0.0, kInf);
                m.obj[cv.shed] = build.load_shedding_penalty * grid.day_weight[p];
            }
            m.bind_role(Role::p_char, p, h, cv.p_char);
            m.bind_role(Role::p_disc, p, h, cv.p_disc);
            m.bind_role(Role::p_curt, p, h, cv.p_curt);
            m.bind_role(Role::e_bess, p, h, cv.e);
            m.bind_role(Role::u_char, p, h, cv.u_char);
            m.bind_role(Role::u_disc, p, h, cv.u_disc);
            m.bess_mode_groups.push_back({cv.u_char, cv.p_char, cv.u_disc, cv.p_disc});
            cell[static_cast<size_t>(p) * kHoursPerDay + h] = cv;
        }
    }

    auto cell_at = [&](int p, int h) -> const CellVars& { return cell[static_cast<size_t>(p) * kHoursPerDay + h]; };

    for (int p = 0; p < P; ++p) {
        for (int h = 0; h < kHoursPerDay; ++h) {
            const CellVars& cv = cell_at(p, h);

            // Power balance: generation + discharge - charge - curtailment = load.
            std::vector<LinTerm> bal;
            for (int c = 0; c < C; ++c) {
                const double pu = scenario.candidates[c].profile.per_unit_kw.at(p, h);
                if (pu != 0.0) bal.push_back({n_var[c], pu});
            }
            bal.push_back({cv.p_disc, 1.0});
            bal.push_back({cv.p_char, -1.0});
            bal.push_back({cv.p_curt, -1.0});
            if (cv.shed >= 0) bal.push_back({cv.shed, 1.0});
            m.add_row("bal_" + tag(p, h), std::move(bal), Sense::eq, scenario.load.demand_kw.at(p, h));

            // Stored-energy recursion. Representative days close cyclically;
            // full-year mode chains hours across the whole year, also cyclically.
            int pp, ph;
            if (grid.mode == GridMode::typical_day) {
                pp = p;
                ph = (h + kHoursPerDay - 1) % kHoursPerDay;
            } else {
                if (h > 0) {
                    pp = p;
                    ph = h - 1;
                } else {
                    pp = (p + P - 1) % P;
                    ph = kHoursPerDay - 1;
                }
            }
            const CellVars& pv = cell_at(pp, ph);
            m.add_row("soc_" + tag(p, h),
                      {{cv.e, 1.0}, {pv.e, -1.0}, {cv.p_char, -bess.charge_eff}, {cv.p_disc, 1.0 / bess.discharge_eff}},
                      Sense::eq, 0.0);

            // SOC window scales with the number of installed modules.
            m.add_row("socmax_" + tag(p, h), {{cv.e, 1.0}, {n_bess, -bess.soc_max * bess.unit_energy_kwh}},
                      Sense::le, 0.0);
            m.add_row("socmin_" + tag(p, h), {{cv.e, 1.0}, {n_bess, -bess.soc_min * bess.unit_energy_kwh}},
                      Sense::ge, 0.0);

            // No simultaneous charging and discharging.
            m.add_row("excl_" + tag(p, h), {{cv.u_char, 1.0}, {cv.u_disc, 1.0}}, Sense::le, 1.0);

            // Power caps: binary big-M row plus installed-capacity rate row,
            // both throttled by (1-alpha)^(i-1) under iteration constraints.
            m.add_row("charcap_" + tag(p, h), {{cv.p_char, 1.0}, {cv.u_char, -big_m_power * power_factor}},
                      Sense::le, 0.0);
            m.add_row("charrate_" + tag(p, h),
                      {{cv.p_char, 1.0}, {n_bess, -bess.rate_limit_per_hour * bess.unit_energy_kwh * power_factor}},
                      Sense::le, 0.0);
            m.add_row("disccap_" + tag(p, h), {{cv.p_disc, 1.0}, {cv.u_disc, -big_m_power * power_factor}},
                      Sense::le, 0.0);
            m.add_row("discrate_" + tag(p, h),
                      {{cv.p_disc, 1.0}, {n_bess, -bess.rate_limit_per_hour * bess.unit_energy_kwh * power_factor}},
                      Sense::le, 0.0);
        }
    }

    // Annualized throughput may not exceed (1-alpha) times the previous pass.
    if (iter_cons) {
        std::vector<LinTerm> tp;
        for (int p = 0; p < P; ++p)
            for (int h = 0; h < kHoursPerDay; ++h) {
                const CellVars& cv = cell_at(p, h);
                tp.push_back({cv.p_char, grid.day_weight[p]});
                tp.push_back({cv.p_disc, grid.day_weight[p]});
            }
        m.add_row("throughput", std::move(tp), Sense::le,
                  (1.0 - iter_cons->usage_control_factor) * iter_cons->previous_throughput_kwh);
    }

    return m;
}

/// Dispatch schedule plus the sized fleet and its cost decomposition.
struct SizingSolution {
    std::vector<int> unit_counts;  // aligned with scenario.candidates
    int n_bess = 0;
    double e_total_kwh = 0.0;
    TimeGrid grid;
    HourTable charge_kw, discharge_kw, curtail_kw, stored_kwh;
    double objective = 0.0;

    // Lifetime cost families (BESS included), and totals per technology.
    double precommissioning = 0.0;
    double capital = 0.0;
    double o_and_m_lifetime = 0.0;
    double decommissioning = 0.0;
    std::map<std::string, double> cost_by_technology;

    double annual_throughput_kwh() const {
        double s = 0.0;
        for (int p = 0; p < grid.periods(); ++p) {
            double day = 0.0;
            for (int h = 0; h < kHoursPerDay; ++h) day += charge_kw.at(p, h) + discharge_kw.at(p, h);
            s += day * grid.day_weight[p];
        }
        return s;
    }

    double max_charge_kw() const { return charge_kw.max_value(); }
    double max_discharge_kw() const { return discharge_kw.max_value(); }
};

/// Reads a raw solver assignment back into domain terms.
inline SizingSolution extract_solution(const MilpModel& model, const std::vector<double>& raw,
                                       const ScenarioConfig& scenario, const BessParams& bess,
                                       double int_tol = 1e-6) {
    if (raw.size() != static_cast<size_t>(model.num_vars()))
        throw ModelError("assignment length does not match model");

    const TimeGrid& grid = scenario.load.grid;
    const int P = grid.periods();
    const int C = static_cast<int>(scenario.candidates.size());

    SizingSolution sol;
    sol.grid = grid;
    sol.unit_counts.resize(C);

    auto as_int = [&](int var) {
        const double v = raw[var];
        if (std::abs(v - std::round(v)) > int_tol)
            throw ModelError("fractional value " + std::to_string(v) + " for integer variable '" +
                             model.vars[var].name + "'");
        return static_cast<int>(std::llround(v));
    };

    for (int c = 0; c < C; ++c) sol.unit_counts[c] = as_int(model.var_of(Role::unit_count, c, 0));
    sol.n_bess = as_int(model.var_of(Role::n_bess, 0, 0));
    sol.e_total_kwh = bess.unit_energy_kwh * sol.n_bess;

    sol.charge_kw = HourTable(P);
    sol.discharge_kw = HourTable(P);
    sol.curtail_kw = HourTable(P);
    sol.stored_kwh = HourTable(P);
    for (int p = 0; p < P; ++p)
        for (int h = 0; h < kHoursPerDay; ++h) {
            sol.charge_kw.at(p, h) = raw[model.var_of(Role::p_char, p, h)];
            sol.discharge_kw.at(p, h) = raw[model.var_of(Role::p_disc, p, h)];
            sol.curtail_kw.at(p, h) = raw[model.var_of(Role::p_curt, p, h)];
            sol.stored_kwh.at(p, h) = raw[model.var_of(Role::e_bess, p, h)];
        }

    const double te = scenario.lifetime_years;
    for (int c = 0; c < C; ++c) {
        const auto& cand = scenario.candidates[c];
        const double n = sol.unit_counts[c];
        sol.precommissioning += n * cand.cost.precommissioning;
        sol.capital += n * cand.cost.capital;
        sol.o_and_m_lifetime += n * cand.cost.o_and_m_annual * te;
        sol.decommissioning += n * cand.cost.decommissioning;
        sol.cost_by_technology[technology_name(cand.technology)] +=
            n * lifetime_cost_per_unit(cand.cost, te);
    }
    const auto& bc = scenario.bess_cost_per_kwh;
    sol.precommissioning += sol.e_total_kwh * bc.precommissioning;
    sol.capital += sol.e_total_kwh * bc.capital;
    sol.o_and_m_lifetime += sol.e_total_kwh * bc.o_and_m_annual * te;
    sol.decommissioning += sol.e_total_kwh * bc.decommissioning;
    sol.cost_by_technology["BESS"] += sol.e_total_kwh * lifetime_cost_per_unit(bc, te);

    sol.objective = model.objective_value(raw);
    return sol;
}

/// Post-hoc re-check of every structural constraint on an extracted solution.
struct DiagnosticsReport {
    double max_balance_residual_kw = 0.0;
    double max_soc_violation_kwh = 0.0;
    double max_recursion_residual_kwh = 0.0;
    int mutual_exclusion_violations = 0;
    bool modularity_ok = true;
    double annual_throughput_kwh = 0.0;
    double max_charge_kw = 0.0;
    double max_discharge_kw = 0.0;
    bool throttle_power_ok = true;
    bool throttle_throughput_ok = true;
    double objective_recomputed = 0.0;
    double objective_relative_error = 0.0;

    bool ok(double tol = 1e-6) const {
        return max_balance_residual_kw <= tol && max_soc_violation_kwh <= tol &&
               max_recursion_residual_kwh <= tol && mutual_exclusion_violations == 0 && modularity_ok &&
               throttle_power_ok && throttle_throughput_ok && objective_relative_error <= tol;
    }
};

inline DiagnosticsReport verify_solution(const SizingSolution& sol, const ScenarioConfig& scenario,
                                         const BessParams& bess,
                                         const IterationConstraintSet* iter_cons = nullptr,
                                         double activity_tol = 1e-6) {
    DiagnosticsReport rep;
    const TimeGrid& grid = scenario.load.grid;
    const int P = grid.periods();
    const int C = static_cast<int>(scenario.candidates.size());

    for (int p = 0; p < P; ++p) {
        for (int h = 0; h < kHoursPerDay; ++h) {
            double gen = 0.0;
            for (int c = 0; c < C; ++c)
                gen += sol.unit_counts[c] * scenario.candidates[c].profile.per_unit_kw.at(p, h);
            const double resid = gen + sol.discharge_kw.at(p, h) - sol.charge_kw.at(p, h) -
                                 sol.curtail_kw.at(p, h) - scenario.load.demand_kw.at(p, h);
            rep.max_balance_residual_kw = std::max(rep.max_balance_residual_kw, std::abs(resid));

            const double e = sol.stored_kwh.at(p, h);
            rep.max_soc_violation_kwh =
                std::max({rep.max_soc_violation_kwh, bess.soc_min * sol.e_total_kwh - e,
                          e - bess.soc_max * sol.e_total_kwh});

            int pp, ph;
            if (grid.mode == GridMode::typical_day) {
                pp = p;
                ph = (h + kHoursPerDay - 1) % kHoursPerDay;
            } else if (h > 0) {
                pp = p;
                ph = h - 1;
            } else {
                pp = (p + P - 1) % P;
                ph = kHoursPerDay - 1;
            }
            const double rec = e - sol.stored_kwh.at(pp, ph) - bess.charge_eff * sol.charge_kw.at(p, h) +
                               sol.discharge_kw.at(p, h) / bess.discharge_eff;
            rep.max_recursion_residual_kwh = std::max(rep.max_recursion_residual_kwh, std::abs(rec));

            if (sol.charge_kw.at(p, h) > activity_tol && sol.discharge_kw.at(p, h) > activity_tol)
                ++rep.mutual_exclusion_violations;
        }
    }

    const double mod = std::fmod(sol.e_total_kwh, bess.unit_energy_kwh);
    rep.modularity_ok = std::min(mod, bess.unit_energy_kwh - mod) <= 1e-6;

    rep.annual_throughput_kwh = sol.annual_throughput_kwh();
    rep.max_charge_kw = sol.max_charge_kw();
    rep.max_discharge_kw = sol.max_discharge_kw();

    if (iter_cons) {
        const double cap = bess.rate_limit_per_hour * sol.e_total_kwh * iter_cons->power_factor();
        rep.throttle_power_ok =
            rep.max_charge_kw <= cap + activity_tol && rep.max_discharge_kw <= cap + activity_tol;
        rep.throttle_throughput_ok =
            rep.annual_throughput_kwh <=
            (1.0 - iter_cons->usage_control_factor) * iter_cons->previous_throughput_kwh + activity_tol;
    }

    double obj = 0.0;
    for (int c = 0; c < C; ++c)
        obj += sol.unit_counts[c] *
               lifetime_cost_per_unit(scenario.candidates[c].cost, scenario.lifetime_years);
    obj += sol.e_total_kwh * lifetime_cost_per_unit(scenario.bess_cost_per_kwh, scenario.lifetime_years);
    rep.objective_recomputed = obj;
    rep.objective_relative_error = std::abs(obj - sol.objective) / std::max(1.0, std::abs(sol.objective));

    return rep;
}

}  // namespace orem
