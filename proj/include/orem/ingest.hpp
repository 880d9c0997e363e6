#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <tuple>

#include "orem/core.hpp"
#include "orem/csv.hpp"

namespace orem {

struct Timestamp {
    int year = 0;
    int month = 1;  // 1..12
    int day = 1;    // 1..31
    int hour = 0;   // 0..23
    int minute = 0;

    auto key() const { return std::tie(year, month, day, hour, minute); }
    bool operator<(const Timestamp& o) const { return key() < o.key(); }
};

/// Accepts "YYYY-MM-DD HH:MM[:SS]" with ' ' or 'T' separator, optional 'Z'.
inline std::optional<Timestamp> parse_timestamp(const std::string& text) {
    Timestamp ts;
    int sec = 0;
    char sep = 0;
    int n = std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d:%d", &ts.year, &ts.month, &ts.day, &sep,
                        &ts.hour, &ts.minute, &sec);
    if (n < 6 || (sep != ' ' && sep != 'T')) return std::nullopt;
    if (ts.month < 1 || ts.month > 12 || ts.day < 1 || ts.day > 31) return std::nullopt;
    if (ts.hour < 0 || ts.hour > 23 || ts.minute < 0 || ts.minute > 59) return std::nullopt;
    return ts;
}

/// Day-of-year index 0..364 on a fixed non-leap calendar; Feb 29 folds onto Feb 28.
inline int day_of_year_index(const Timestamp& ts) {
    int doy = 0;
    for (int m = 0; m < ts.month - 1; ++m) doy += kStandardDaysPerMonth[m];
    int day = ts.day;
    if (ts.month == 2 && day > 28) day = 28;
    day = std::min(day, kStandardDaysPerMonth[ts.month - 1]);
    return doy + day - 1;
}

struct MetOceanRecord {
    Timestamp timestamp;
    double significant_wave_height = 0.0;  // m
    double wave_energy_period = 0.0;       // s
    double current_speed = 0.0;            // m/s
    double wind_speed = 0.0;               // m/s, at anemometer height
    double anemometer_height = 0.0;        // m
    double irradiance = 0.0;               // W/m^2
    double ambient_temperature = 0.0;      // degC, may be negative
};

struct ParseWarning {
    int line = 0;
    std::string message;
};

struct MetOceanSeries {
    std::vector<MetOceanRecord> records;
    std::vector<ParseWarning> warnings;
};

/// Month x hour (or day x hour) averages of every met-ocean channel.
struct TypicalYear {
    TimeGrid grid;
    HourTable significant_wave_height;
    HourTable wave_energy_period;
    HourTable current_speed;
    HourTable wind_speed;
    HourTable anemometer_height;
    HourTable irradiance;
    HourTable ambient_temperature;

    bool operator==(const TypicalYear& o) const {
        return grid.mode == o.grid.mode && grid.day_weight == o.grid.day_weight &&
               significant_wave_height == o.significant_wave_height &&
               wave_energy_period == o.wave_energy_period && current_speed == o.current_speed &&
               wind_speed == o.wind_speed && anemometer_height == o.anemometer_height &&
               irradiance == o.irradiance && ambient_temperature == o.ambient_temperature;
    }
};

struct LoadProfile {
    TimeGrid grid;
    HourTable demand_kw;
};

namespace detail {

inline const char* kMetOceanColumns[] = {"timestamp", "hs_m",          "te_s",    "current_ms",
                                         "wind_ms",   "anemo_height_m", "ghi_wm2", "tamb_c"};

struct CellAccumulator {
    double sum = 0.0;
    long count = 0;
    void add(double v) {
        sum += v;
        ++count;
    }
    double mean() const { return sum / static_cast<double>(count); }
};

}  // namespace detail

/// Parses the hourly met-ocean CSV. Malformed or physically impossible rows
/// are dropped and reported as warnings; structural problems throw.
inline MetOceanSeries parse_metocean_csv(const std::string& path) {
    csv::Table t = csv::read_file(path);

    std::array<int, 8> col{};
    for (int i = 0; i < 8; ++i) {
        col[i] = t.column(detail::kMetOceanColumns[i]);
        if (col[i] < 0)
            throw InputError(std::string("missing required column '") + detail::kMetOceanColumns[i] +
                             "' in " + path);
    }

    MetOceanSeries series;
    series.records.reserve(t.rows.size());
    for (size_t r = 0; r < t.rows.size(); ++r) {
        const auto& cells = t.rows[r];
        const int line = t.line_numbers[r];
        if (cells.size() < t.header.size()) {
            series.warnings.push_back({line, "row has too few cells"});
            continue;
        }
        auto ts = parse_timestamp(cells[col[0]]);
        if (!ts) {
            series.warnings.push_back({line, "unparseable timestamp '" + cells[col[0]] + "'"});
            continue;
        }
        double v[7];
        bool numeric = true;
        for (int i = 0; i < 7; ++i) {
            if (!csv::parse_double(cells[col[i + 1]], v[i])) {
                series.warnings.push_back({line, std::string("non-numeric cell in column '") +
                                                     detail::kMetOceanColumns[i + 1] + "'"});
                numeric = false;
                break;
            }
        }
        if (!numeric) continue;

        MetOceanRecord rec;
        rec.timestamp = *ts;
        rec.significant_wave_height = v[0];
        rec.wave_energy_period = v[1];
        rec.current_speed = v[2];
        rec.wind_speed = v[3];
        rec.anemometer_height = v[4];
        rec.irradiance = v[5];
        rec.ambient_temperature = v[6];

        // Physically impossible rows are dropped, not clamped, so they cannot
        // bias the per-cell means.
        const char* bad = nullptr;
        if (rec.significant_wave_height < 0) bad = "hs_m";
        else if (rec.wave_energy_period < 0) bad = "te_s";
        else if (rec.current_speed < 0) bad = "current_ms";
        else if (rec.wind_speed < 0) bad = "wind_ms";
        else if (rec.anemometer_height <= 0) bad = "anemo_height_m";
        else if (rec.irradiance < 0) bad = "ghi_wm2";
        if (bad) {
            series.warnings.push_back({line, std::string("impossible value in column '") + bad + "', row dropped"});
            continue;
        }
        series.records.push_back(rec);
    }

    std::stable_sort(series.records.begin(), series.records.end(),
                     [](const MetOceanRecord& a, const MetOceanRecord& b) { return a.timestamp < b.timestamp; });
    return series;
}

namespace detail {

template <typename CellIndexFn>
TypicalYear aggregate(const MetOceanSeries& series, const TimeGrid& grid, CellIndexFn cell_of) {
    const int P = grid.periods();
    std::vector<std::array<CellAccumulator, 7>> acc(static_cast<size_t>(P) * kHoursPerDay);

    for (const auto& rec : series.records) {
        const int p = cell_of(rec);
        auto& a = acc[static_cast<size_t>(p) * kHoursPerDay + rec.timestamp.hour];
        a[0].add(rec.significant_wave_height);
        a[1].add(rec.wave_energy_period);
        a[2].add(rec.current_speed);
        a[3].add(rec.wind_speed);
        a[4].add(rec.anemometer_height);
        a[5].add(rec.irradiance);
        a[6].add(rec.ambient_temperature);
    }

    std::string gaps;
    int gap_count = 0;
    for (int p = 0; p < P; ++p)
        for (int h = 0; h < kHoursPerDay; ++h)
            if (acc[static_cast<size_t>(p) * kHoursPerDay + h][0].count == 0) {
                if (gap_count < 12) {
                    gaps += (gaps.empty() ? "" : ", ");
                    gaps += "(" + std::to_string(p + 1) + "," + std::to_string(h) + ")";
                }
                ++gap_count;
            }
    if (gap_count > 0)
        throw InputError("aggregation gaps: " + std::to_string(gap_count) +
                         " empty (period,hour) cells: " + gaps + (gap_count > 12 ? ", ..." : ""));

    TypicalYear ty;
    ty.grid = grid;
    HourTable* tables[7] = {&ty.significant_wave_height, &ty.wave_energy_period, &ty.current_speed,
                            &ty.wind_speed,              &ty.anemometer_height,  &ty.irradiance,
                            &ty.ambient_temperature};
    for (auto* tp : tables) *tp = HourTable(P);
    for (int p = 0; p < P; ++p)
        for (int h = 0; h < kHoursPerDay; ++h)
            for (int c = 0; c < 7; ++c)
                tables[c]->at(p, h) = acc[static_cast<size_t>(p) * kHoursPerDay + h][c].mean();
    return ty;
}

}  // namespace detail

/// Pools every sample falling in (month, hour) and takes the arithmetic mean.
inline TypicalYear aggregate_typical_days(const MetOceanSeries& series) {
    return detail::aggregate(series, TimeGrid::typical(),
                             [](const MetOceanRecord& r) { return r.timestamp.month - 1; });
}

/// Day-of-year resolution variant: 365 x 24 cells, leap days folded into Feb 28.
inline TypicalYear aggregate_full_year(const MetOceanSeries& series) {
    return detail::aggregate(series, TimeGrid::full_year(),
                             [](const MetOceanRecord& r) { return day_of_year_index(r.timestamp); });
}

/// Load CSV in either "month,hour,load_kw" (typical-day) or
/// "timestamp,load_kw" (full-year) form; negative demand rows are dropped.
inline LoadProfile parse_load_csv(const std::string& path, std::vector<ParseWarning>* warnings_out = nullptr) {
    csv::Table t = csv::read_file(path);
    std::vector<ParseWarning> warnings;

    const int c_load = t.column("load_kw");
    if (c_load < 0) throw InputError("missing required column 'load_kw' in " + path);

    LoadProfile lp;
    const int c_month = t.column("month");
    const int c_hour = t.column("hour");
    const int c_ts = t.column("timestamp");

    if (c_month >= 0 && c_hour >= 0) {
        lp.grid = TimeGrid::typical();
        std::vector<detail::CellAccumulator> acc(static_cast<size_t>(lp.grid.cells()));
        for (size_t r = 0; r < t.rows.size(); ++r) {
            const int line = t.line_numbers[r];
            double m, h, v;
            if (!csv::parse_double(t.rows[r][c_month], m) || !csv::parse_double(t.rows[r][c_hour], h) ||
                !csv::parse_double(t.rows[r][c_load], v)) {
                warnings.push_back({line, "non-numeric cell"});
                continue;
            }
            const int mi = static_cast<int>(m) - 1;
            const int hi = static_cast<int>(h);
            if (mi < 0 || mi >= kMonthsPerYear || hi < 0 || hi >= kHoursPerDay) {
                warnings.push_back({line, "month/hour out of range"});
                continue;
            }
            if (v < 0) {
                warnings.push_back({line, "negative demand, row dropped"});
                continue;
            }
            acc[static_cast<size_t>(mi) * kHoursPerDay + hi].add(v);
        }
        lp.demand_kw = HourTable(lp.grid.periods());
        std::string gaps;
        int gap_count = 0;
        for (int p = 0; p < lp.grid.periods(); ++p)
            for (int h = 0; h < kHoursPerDay; ++h) {
                const auto& a = acc[static_cast<size_t>(p) * kHoursPerDay + h];
                if (a.count == 0) {
                    if (gap_count < 12)
                        gaps += (gaps.empty() ? "" : ", ") + ("(" + std::to_string(p + 1) + "," + std::to_string(h) + ")");
                    ++gap_count;
                    continue;
                }
                lp.demand_kw.at(p, h) = a.mean();
            }
        if (gap_count > 0)
            throw InputError("load profile gaps: " + std::to_string(gap_count) + " empty cells: " + gaps +
                             (gap_count > 12 ? ", ..." : ""));
    } else if (c_ts >= 0) {
        lp.grid = TimeGrid::full_year();
        std::vector<detail::CellAccumulator> acc(static_cast<size_t>(lp.grid.cells()));
        for (size_t r = 0; r < t.rows.size(); ++r) {
            const int line = t.line_numbers[r];
            auto ts = parse_timestamp(t.rows[r][c_ts]);
            double v;
            if (!ts || !csv::parse_double(t.rows[r][c_load], v)) {
                warnings.push_back({line, "unparseable row"});
                continue;
            }
            if (v < 0) {
                warnings.push_back({line, "negative demand, row dropped"});
                continue;
            }
            acc[static_cast<size_t>(day_of_year_index(*ts)) * kHoursPerDay + ts->hour].add(v);
        }
        lp.demand_kw = HourTable(lp.grid.periods());
        int gap_count = 0;
        for (int p = 0; p < lp.grid.periods(); ++p)
            for (int h = 0; h < kHoursPerDay; ++h) {
                const auto& a = acc[static_cast<size_t>(p) * kHoursPerDay + h];
                if (a.count == 0) { ++gap_count; continue; }
                lp.demand_kw.at(p, h) = a.mean();
            }
        if (gap_count > 0)
            throw InputError("load profile gaps: " + std::to_string(gap_count) + " empty (day,hour) cells");
    } else {
        throw InputError("load CSV must have either month,hour or timestamp columns: " + path);
    }

    if (warnings_out) *warnings_out = std::move(warnings);
    return lp;
}

/// Writes a TypicalYear as CSV with full round-trip precision.
inline void emit_typical_csv(const TypicalYear& ty, std::ostream& out) {
    const bool typical = ty.grid.mode == GridMode::typical_day;
    out << (typical ? "month" : "day") << ",hour,hs_m,te_s,current_ms,wind_ms,anemo_height_m,ghi_wm2,tamb_c\n";
    for (int p = 0; p < ty.grid.periods(); ++p)
        for (int h = 0; h < kHoursPerDay; ++h) {
            out << (p + 1) << ',' << h << ',' << csv::format_double(ty.significant_wave_height.at(p, h)) << ','
                << csv::format_double(ty.wave_energy_period.at(p, h)) << ','
                << csv::format_double(ty.current_speed.at(p, h)) << ','
                << csv::format_double(ty.wind_speed.at(p, h)) << ','
                << csv::format_double(ty.anemometer_height.at(p, h)) << ','
                << csv::format_double(ty.irradiance.at(p, h)) << ','
                << csv::format_double(ty.ambient_temperature.at(p, h)) << '\n';
        }
}

/// Parses CSVs produced by emit_typical_csv (also accepted as pre-aggregated input).
inline TypicalYear parse_typical_csv(const std::string& path) {
    csv::Table t = csv::read_file(path);

    const bool typical = t.column("month") >= 0;
    const int c_p = typical ? t.column("month") : t.column("day");
    if (c_p < 0) throw InputError("missing 'month' or 'day' column in " + path);

    std::array<int, 8> col{};
    col[0] = t.column("hour");
    if (col[0] < 0) throw InputError("missing required column 'hour' in " + path);
    for (int i = 1; i < 8; ++i) {
        col[i] = t.column(detail::kMetOceanColumns[i]);
        if (col[i] < 0)
            throw InputError(std::string("missing required column '") + detail::kMetOceanColumns[i] + "' in " + path);
    }

    TypicalYear ty;
    ty.grid = typical ? TimeGrid::typical() : TimeGrid::full_year();
    const int P = ty.grid.periods();
    HourTable* tables[7] = {&ty.significant_wave_height, &ty.wave_energy_period, &ty.current_speed,
                            &ty.wind_speed,              &ty.anemometer_height,  &ty.irradiance,
                            &ty.ambient_temperature};
    for (auto* tp : tables) *tp = HourTable(P);
    std::vector<char> seen(static_cast<size_t>(P) * kHoursPerDay, 0);

    for (size_t r = 0; r < t.rows.size(); ++r) {
        double pv, hv;
        if (!csv::parse_double(t.rows[r][c_p], pv) || !csv::parse_double(t.rows[r][col[0]], hv))
            throw InputError("non-numeric period/hour at line " + std::to_string(t.line_numbers[r]) + " in " + path);
        const int p = static_cast<int>(pv) - 1;
        const int h = static_cast<int>(hv);
        if (p < 0 || p >= P || h < 0 || h >= kHoursPerDay)
            throw InputError("period/hour out of range at line " + std::to_string(t.line_numbers[r]) + " in " + path);
        for (int c = 0; c < 7; ++c) {
            double v;
            if (!csv::parse_double(t.rows[r][col[c + 1]], v))
                throw InputError("non-numeric cell at line " + std::to_string(t.line_numbers[r]) + " in " + path);
            tables[c]->at(p, h) = v;
        }
        seen[static_cast<size_t>(p) * kHoursPerDay + h] = 1;
    }
    for (size_t i = 0; i < seen.size(); ++i)
        if (!seen[i])
            throw InputError("incomplete typical-year CSV, missing cells in " + path);
    return ty;
}

}  // namespace orem
