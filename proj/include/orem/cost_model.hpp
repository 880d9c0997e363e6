#pragma once

#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "orem/devices.hpp"

namespace orem {

/// Four-part lifetime cost breakdown of one unit (or one kWh for storage).
struct CostQuad {
    double precommissioning = 0.0;  // $ per unit
    double capital = 0.0;           // $ per unit
    double o_and_m_annual = 0.0;    // $ per unit per year
    double decommissioning = 0.0;   // $ per unit

    void validate() const {
        if (precommissioning < 0 || capital < 0 || o_and_m_annual < 0 || decommissioning < 0)
            throw InputError("cost components must be non-negative");
    }

    CostQuad scaled(double k) const {
        return {precommissioning * k, capital * k, o_and_m_annual * k, decommissioning * k};
    }
};

/// Undiscounted lifetime cost of one unit over T_e years.
inline double lifetime_cost_per_unit(const CostQuad& cost, double lifetime_years) {
    if (lifetime_years <= 0.0) throw DomainError("lifetime must be positive");
    return cost.precommissioning + cost.capital + cost.o_and_m_annual * lifetime_years + cost.decommissioning;
}

/// One candidate device size available to the sizing model.
struct ResourceCandidate {
    Technology technology = Technology::OWT;
    std::string name;
    double rated_kw = 0.0;
    DeviceSpec spec;
    CostQuad cost;
    GenerationProfile profile;
};

/// Levelized cost of energy in cents/kWh. Candidates that never generate
/// have no defined LCOE and throw.
inline double lcoe_cents_per_kwh(const ResourceCandidate& candidate, double lifetime_years) {
    const double annual_kwh = candidate.profile.annual_energy_kwh();
    if (annual_kwh <= 0.0)
        throw DomainError("LCOE undefined for non-generating candidate '" + candidate.name + "'");
    return 100.0 * lifetime_cost_per_unit(candidate.cost, lifetime_years) / (annual_kwh * lifetime_years);
}

struct LcoeRow {
    std::string technology;
    std::string name;
    double rated_kw = 0.0;
    double lcoe_cents = 0.0;  // NaN when undefined
    bool generating = true;
    bool kept = false;
};

struct PruneResult {
    std::vector<ResourceCandidate> kept;
    std::vector<LcoeRow> report;
};

/// Keeps candidates whose LCOE is at or below the threshold; non-generating
/// candidates are always removed. The report covers every input candidate.
inline PruneResult prune_candidates(const std::vector<ResourceCandidate>& candidates,
                                    double lifetime_years, double threshold_cents_per_kwh) {
    PruneResult out;
    for (const auto& c : candidates) {
        LcoeRow row;
        row.technology = technology_name(c.technology);
        row.name = c.name;
        row.rated_kw = c.rated_kw;
        if (c.profile.annual_energy_kwh() <= 0.0) {
            row.generating = false;
            row.lcoe_cents = std::numeric_limits<double>::quiet_NaN();
            row.kept = false;
        } else {
            row.lcoe_cents = lcoe_cents_per_kwh(c, lifetime_years);
            row.kept = row.lcoe_cents <= threshold_cents_per_kwh;
        }
        if (row.kept) out.kept.push_back(c);
        out.report.push_back(row);
    }
    return out;
}

enum class DegEvaluatorKind { oracle, surrogate };

/// Controls for the iterative degradation-pricing loop.
struct HeuristicConfig {
    double usage_control_factor = 0.001;  // alpha
    int max_iterations = 6;
    int patience = 2;  // consecutive total-cost increases before stopping
    DegEvaluatorKind evaluator = DegEvaluatorKind::surrogate;

    void validate() const {
        if (!(usage_control_factor > 0.0 && usage_control_factor < 1.0))
            throw InputError("usage control factor must lie in (0, 1)");
        if (max_iterations < 1) throw InputError("max_iterations must be >= 1");
        if (patience < 1) throw InputError("patience must be >= 1");
    }
};

/// Everything the sizing model needs about one planning case.
struct ScenarioConfig {
    std::string name;
    double lifetime_years = 20.0;
    std::vector<ResourceCandidate> candidates;
    CostQuad bess_cost_per_kwh;
    LoadProfile load;
    HourTable ambient_temperature;  // same grid as load; drives degradation
    HeuristicConfig heuristic;

    void validate() const {
        if (lifetime_years <= 0.0) throw InputError("scenario lifetime must be positive");
        for (const auto& c : candidates) {
            c.cost.validate();
            if (c.rated_kw <= 0.0) throw InputError("candidate '" + c.name + "' must have positive rated power");
            if (!c.profile.grid.same_shape(load.grid))
                throw InputError("candidate '" + c.name + "' profile grid does not match the load grid");
        }
        bess_cost_per_kwh.validate();
        heuristic.validate();
    }
};

inline void emit_lcoe_report_csv(const std::vector<LcoeRow>& report, std::ostream& out) {
    out << "technology,rated_kw,lcoe_cents_per_kwh,kept\n";
    for (const auto& r : report) {
        out << r.technology << ',' << csv::format_double(r.rated_kw) << ',';
        if (r.generating)
            out << csv::format_double(r.lcoe_cents);
        else
            out << "undefined";
        out << ',' << (r.kept ? 1 : 0) << '\n';
    }
}

}  // namespace orem
