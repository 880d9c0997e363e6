#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace orem {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad or inconsistent input data (files, schemas, scenario definitions).
class InputError : public Error {
public:
    using Error::Error;
};

/// Input file contained no data rows at all.
class EmptyInputError : public InputError {
public:
    using InputError::InputError;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Inconsistent model assembly (grid mismatch, bad variant, bad extraction).
class ModelError : public Error {
public:
    using Error::Error;
};

/// Numerical failure or resource-limit refusal inside the solver.
class SolverError : public Error {
public:
    using Error::Error;
};

inline constexpr int kHoursPerDay = 24;
inline constexpr int kMonthsPerYear = 12;
inline constexpr int kDaysPerYear = 365;
inline constexpr double kHoursPerYear = 8760.0;

/// Non-leap day counts per month; leap days fold into February.
inline constexpr std::array<int, 12> kStandardDaysPerMonth = {31, 28, 31, 30, 31, 30,
                                                              31, 31, 30, 31, 30, 31};

enum class GridMode { typical_day, full_year };

/// Time axis shared by met-ocean channels, load and dispatch schedules.
/// typical_day: 12 periods (months), each weighted by its day count.
/// full_year: 365 periods (days), each weighted 1.
struct TimeGrid {
    GridMode mode = GridMode::typical_day;
    std::vector<double> day_weight;  // annual occurrences of each period

    int periods() const { return static_cast<int>(day_weight.size()); }
    int cells() const { return periods() * kHoursPerDay; }
    double annual_days() const { return std::accumulate(day_weight.begin(), day_weight.end(), 0.0); }

    /// Month index of a period (identity for typical mode, day->month lookup otherwise).
    int month_of(int period) const {
        if (mode == GridMode::typical_day) return period;
        int d = period;
        for (int m = 0; m < kMonthsPerYear; ++m) {
            if (d < kStandardDaysPerMonth[m]) return m;
            d -= kStandardDaysPerMonth[m];
        }
        return kMonthsPerYear - 1;
    }

    static TimeGrid typical(const std::array<int, 12>& days_per_month = kStandardDaysPerMonth) {
        TimeGrid g;
        g.mode = GridMode::typical_day;
        g.day_weight.assign(days_per_month.begin(), days_per_month.end());
        return g;
    }

    static TimeGrid full_year() {
        TimeGrid g;
        g.mode = GridMode::full_year;
        g.day_weight.assign(kDaysPerYear, 1.0);
        return g;
    }

    bool same_shape(const TimeGrid& other) const {
        return mode == other.mode && day_weight.size() == other.day_weight.size();
    }
};

/// Dense period x hour table of one physical channel.
class HourTable {
public:
    HourTable() = default;
    HourTable(int periods, double fill = 0.0) : periods_(periods), v_(static_cast<size_t>(periods) * kHoursPerDay, fill) {}

    int periods() const { return periods_; }
    double& at(int period, int hour) { return v_[static_cast<size_t>(period) * kHoursPerDay + hour]; }
    double at(int period, int hour) const { return v_[static_cast<size_t>(period) * kHoursPerDay + hour]; }
    const std::vector<double>& raw() const { return v_; }
    std::vector<double>& raw() { return v_; }

    double max_value() const {
        double m = 0.0;
        for (double x : v_) m = std::max(m, x);
        return m;
    }

    bool operator==(const HourTable& o) const = default;

private:
    int periods_ = 0;
    std::vector<double> v_;
};

}  // namespace orem
