#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "orem/core.hpp"
#include "orem/ingest.hpp"

namespace orem {

enum class Technology { WEC, TEC, OWT, FPV };

inline const char* technology_name(Technology t) {
    switch (t) {
        case Technology::WEC: return "WEC";
        case Technology::TEC: return "TEC";
        case Technology::OWT: return "OWT";
        case Technology::FPV: return "FPV";
    }
    return "?";
}

inline Technology technology_from_name(const std::string& s) {
    if (s == "WEC") return Technology::WEC;
    if (s == "TEC") return Technology::TEC;
    if (s == "OWT") return Technology::OWT;
    if (s == "FPV") return Technology::FPV;
    throw InputError("unknown technology tag: " + s);
}

/// Wave converter described by its published power matrix.
/// Bins are inclusive-lower / exclusive-upper; conditions outside the table
/// mean survival shutdown (0 kW).
struct WecSpec {
    double rated_kw = 0.0;
    std::vector<double> hs_edges;                 // m, strictly increasing, size R+1
    std::vector<double> te_edges;                 // s, strictly increasing, size C+1
    std::vector<std::vector<double>> matrix_kw;   // R x C

    void validate() const {
        if (hs_edges.size() < 2 || te_edges.size() < 2) throw InputError("WEC power matrix needs at least one bin per axis");
        for (size_t i = 1; i < hs_edges.size(); ++i)
            if (hs_edges[i] <= hs_edges[i - 1]) throw InputError("WEC hs bin edges must be strictly increasing");
        for (size_t i = 1; i < te_edges.size(); ++i)
            if (te_edges[i] <= te_edges[i - 1]) throw InputError("WEC te bin edges must be strictly increasing");
        if (matrix_kw.size() != hs_edges.size() - 1) throw InputError("WEC matrix row count does not match hs bins");
        for (const auto& row : matrix_kw) {
            if (row.size() != te_edges.size() - 1) throw InputError("WEC matrix column count does not match te bins");
            for (double v : row)
                if (v < 0.0 || v > rated_kw) throw InputError("WEC matrix entry outside [0, rated]");
        }
    }
};

struct TecSpec {
    double rated_kw = 0.0;
    double water_density = 1025.0;      // kg/m^3
    double rotor_area_m2 = 0.0;
    double power_coefficient = 0.4;
    double electrical_efficiency = 0.95;
    double cut_in_ms = 0.5;
    double cut_out_ms = 5.0;

    void validate() const {
        if (!(power_coefficient > 0.0 && power_coefficient < 0.593))
            throw InputError("TEC power coefficient must lie in (0, 0.593)");
        if (!(electrical_efficiency > 0.0 && electrical_efficiency <= 1.0))
            throw InputError("TEC electrical efficiency must lie in (0, 1]");
        if (rotor_area_m2 <= 0.0 || water_density <= 0.0) throw InputError("TEC area and density must be positive");
    }
};

struct OwtSpec {
    double rated_kw = 0.0;
    double air_density = 1.225;         // kg/m^3 at hub height
    double rotor_area_m2 = 0.0;
    double power_coefficient = 0.45;
    double electrical_efficiency = 0.95;
    double hub_height_m = 80.0;
    double roughness_length_m = 0.0002; // open sea
    double cut_in_ms = 3.0;
    double cut_out_ms = 25.0;

    void validate() const {
        if (!(power_coefficient > 0.0 && power_coefficient < 0.593))
            throw InputError("OWT power coefficient must lie in (0, 0.593)");
        if (!(electrical_efficiency > 0.0 && electrical_efficiency <= 1.0))
            throw InputError("OWT electrical efficiency must lie in (0, 1]");
        if (hub_height_m <= 0.0 || roughness_length_m <= 0.0)
            throw InputError("OWT hub height and roughness length must be positive");
        if (rotor_area_m2 <= 0.0 || air_density <= 0.0) throw InputError("OWT area and density must be positive");
    }
};

/// Irradiance x temperature-derate photovoltaic model. Rated power is defined
/// at 1000 W/m^2 and 25 degC cell temperature.
struct FpvSpec {
    double rated_kw = 0.0;
    double temperature_coefficient = -0.004;  // 1/degC
    double system_derate = 0.9;
    double thermal_coefficient = 0.025;       // degC per W/m^2 of cell-temp rise

    void validate() const {
        if (!(system_derate > 0.0 && system_derate <= 1.0)) throw InputError("FPV system derate must lie in (0, 1]");
        if (temperature_coefficient < -0.01 || temperature_coefficient > 0.0)
            throw InputError("FPV temperature coefficient must lie in [-0.01, 0]");
    }
};

using DeviceSpec = std::variant<WecSpec, TecSpec, OwtSpec, FpvSpec>;

inline double rated_kw(const DeviceSpec& spec) {
    return std::visit([](const auto& s) { return s.rated_kw; }, spec);
}

inline Technology technology_of(const DeviceSpec& spec) {
    if (std::holds_alternative<WecSpec>(spec)) return Technology::WEC;
    if (std::holds_alternative<TecSpec>(spec)) return Technology::TEC;
    if (std::holds_alternative<OwtSpec>(spec)) return Technology::OWT;
    return Technology::FPV;
}

/// Power-matrix lookup; (hs, te) outside the binned range returns 0.
inline double wec_power(const WecSpec& spec, double hs, double te) {
    auto bin = [](const std::vector<double>& edges, double v) -> int {
        if (v < edges.front() || v >= edges.back()) return -1;
        auto it = std::upper_bound(edges.begin(), edges.end(), v);
        return static_cast<int>(it - edges.begin()) - 1;
    };
    const int r = bin(spec.hs_edges, hs);
    const int c = bin(spec.te_edges, te);
    if (r < 0 || c < 0) return 0.0;
    return spec.matrix_kw[r][c];
}

/// Cubic tidal power law with cut-in/cut-out envelope and rated clip.
inline double tec_power(const TecSpec& spec, double v) {
    if (v < spec.cut_in_ms || v > spec.cut_out_ms) return 0.0;
    const double p = 0.5 * spec.water_density * spec.rotor_area_m2 * v * v * v *
                     spec.power_coefficient * spec.electrical_efficiency / 1000.0;
    return std::min(spec.rated_kw, p);
}

/// Log wind profile between two heights above the sea surface.
inline double shear_extrapolate(double v_h1, double h1, double h2, double z0) {
    if (z0 <= 0.0 || h1 <= z0 || h2 <= z0)
        throw DomainError("shear_extrapolate requires h1, h2 > z0 > 0");
    return v_h1 * std::log(h2 / z0) / std::log(h1 / z0);
}

/// Cubic wind power law with cut-in/cut-out envelope and rated clip.
inline double owt_power(const OwtSpec& spec, double v_hub) {
    if (v_hub < spec.cut_in_ms || v_hub > spec.cut_out_ms) return 0.0;
    const double p = 0.5 * spec.air_density * spec.rotor_area_m2 * v_hub * v_hub * v_hub *
                     spec.power_coefficient * spec.electrical_efficiency / 1000.0;
    return std::min(spec.rated_kw, p);
}

/// Irradiance scaling with cell-temperature derate, clipped to [0, rated].
inline double fpv_power(const FpvSpec& spec, double ghi, double t_amb) {
    const double cell_temp = t_amb + spec.thermal_coefficient * ghi;
    const double p = spec.rated_kw * (ghi / 1000.0) *
                     (1.0 + spec.temperature_coefficient * (cell_temp - 25.0)) * spec.system_derate;
    return std::clamp(p, 0.0, spec.rated_kw);
}

/// Per-unit electrical output of one device on the scenario's time grid.
struct GenerationProfile {
    TimeGrid grid;
    HourTable per_unit_kw;
    double capacity_factor = 0.0;

    double annual_energy_kwh() const {
        double e = 0.0;
        for (int p = 0; p < grid.periods(); ++p) {
            double day = 0.0;
            for (int h = 0; h < kHoursPerDay; ++h) day += per_unit_kw.at(p, h);
            e += day * grid.day_weight[p];
        }
        return e;
    }
};

/// Evaluates a device spec against every (period, hour) cell of the grid.
/// OWT wind speeds are shear-extrapolated from the anemometer height to hub
/// height cell by cell.
inline GenerationProfile build_generation_profile(const DeviceSpec& spec, const TypicalYear& ty) {
    GenerationProfile gp;
    gp.grid = ty.grid;
    gp.per_unit_kw = HourTable(ty.grid.periods());

    const int P = ty.grid.periods();
    for (int p = 0; p < P; ++p) {
        for (int h = 0; h < kHoursPerDay; ++h) {
            double kw = 0.0;
            if (const auto* wec = std::get_if<WecSpec>(&spec)) {
                kw = wec_power(*wec, ty.significant_wave_height.at(p, h), ty.wave_energy_period.at(p, h));
            } else if (const auto* tec = std::get_if<TecSpec>(&spec)) {
                kw = tec_power(*tec, ty.current_speed.at(p, h));
            } else if (const auto* owt = std::get_if<OwtSpec>(&spec)) {
                const double h1 = ty.anemometer_height.at(p, h);
                if (h1 <= owt->roughness_length_m)
                    throw InputError("anemometer height channel missing or not above roughness length");
                const double v_hub =
                    shear_extrapolate(ty.wind_speed.at(p, h), h1, owt->hub_height_m, owt->roughness_length_m);
                kw = owt_power(*owt, v_hub);
            } else {
                const auto& fpv = std::get<FpvSpec>(spec);
                kw = fpv_power(fpv, ty.irradiance.at(p, h), ty.ambient_temperature.at(p, h));
            }
            gp.per_unit_kw.at(p, h) = kw;
        }
    }

    const double rated = rated_kw(spec);
    gp.capacity_factor = rated > 0.0 ? gp.annual_energy_kwh() / (rated * kHoursPerYear) : 0.0;
    return gp;
}

}  // namespace orem
