#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <sstream>

#include "orem/ingest.hpp"
#include "test_util.hpp"

using namespace orem;
using Catch::Approx;

namespace {

std::string metocean_header() {
    return "timestamp,hs_m,te_s,current_ms,wind_ms,anemo_height_m,ghi_wm2,tamb_c\n";
}

std::string metocean_row(int year, int month, int day, int hour, double hs, double te, double cur,
                         double wind, double anemo, double ghi, double tamb) {
    std::ostringstream os;
    os << testutil::timestamp(year, month, day, hour) << ',' << hs << ',' << te << ',' << cur << ','
       << wind << ',' << anemo << ',' << ghi << ',' << tamb << '\n';
    return os.str();
}

/// One record for every (month, hour) cell, constant values.
std::string full_typical_coverage(double wind) {
    std::string s = metocean_header();
    for (int m = 1; m <= 12; ++m)
        for (int h = 0; h < 24; ++h) s += metocean_row(2020, m, 15, h, 1.0, 7.0, 0.5, wind, 4.0, 500.0, 15.0);
    return s;
}

}  // namespace

TEST_CASE("well-formed met-ocean file parses with no warnings") {
    std::string content = metocean_header();
    for (int h = 0; h < 24; ++h) content += metocean_row(2021, 6, 1, h, 1.5, 8.0, 0.6, 9.0, 4.0, 300.0, 20.0);
    auto path = testutil::write_temp("metocean24", content);

    auto series = parse_metocean_csv(path);
    REQUIRE(series.records.size() == 24);
    CHECK(series.warnings.empty());
    CHECK(series.records.front().timestamp.hour == 0);
    CHECK(series.records.back().timestamp.hour == 23);
    CHECK(series.records[3].wind_speed == 9.0);
}

TEST_CASE("records come back chronologically sorted") {
    std::string content = metocean_header();
    content += metocean_row(2021, 6, 2, 5, 1, 7, 0.5, 8, 4, 0, 20);
    content += metocean_row(2021, 6, 1, 3, 1, 7, 0.5, 8, 4, 0, 20);
    content += metocean_row(2021, 5, 30, 22, 1, 7, 0.5, 8, 4, 0, 20);
    auto series = parse_metocean_csv(testutil::write_temp("unsorted", content));
    REQUIRE(series.records.size() == 3);
    CHECK(series.records[0].timestamp.month == 5);
    CHECK(series.records[1].timestamp.day == 1);
    CHECK(series.records[2].timestamp.day == 2);
}

TEST_CASE("missing column is a schema error naming the column") {
    std::string content = "timestamp,hs_m,te_s,current_ms,wind_ms,anemo_height_m,tamb_c\n";
    content += "2021-06-01 00:00:00,1,7,0.5,8,4,20\n";
    auto path = testutil::write_temp("missingcol", content);
    REQUIRE_THROWS_WITH(parse_metocean_csv(path), Catch::Matchers::ContainsSubstring("ghi_wm2"));
}

TEST_CASE("empty file raises the dedicated empty-input error") {
    auto path = testutil::write_temp("empty", "");
    REQUIRE_THROWS_AS(parse_metocean_csv(path), EmptyInputError);
    auto header_only = testutil::write_temp("header_only", metocean_header());
    REQUIRE_THROWS_AS(parse_metocean_csv(header_only), EmptyInputError);
}

TEST_CASE("negative wind row is rejected with one warning") {
    std::string content = metocean_header();
    for (int h = 0; h < 3; ++h) content += metocean_row(2021, 6, 1, h, 1, 7, 0.5, 8, 4, 0, 20);
    content += "2021-06-01 03:00:00,1,7,0.5,-3,4,0,20\n";
    auto series = parse_metocean_csv(testutil::write_temp("negwind", content));
    CHECK(series.records.size() == 3);
    REQUIRE(series.warnings.size() == 1);
    CHECK(series.warnings[0].line == 5);
    CHECK(series.warnings[0].message.find("wind_ms") != std::string::npos);
}

TEST_CASE("non-numeric cell is reported with its line number") {
    std::string content = metocean_header();
    content += metocean_row(2021, 6, 1, 0, 1, 7, 0.5, 8, 4, 0, 20);
    content += "2021-06-01 01:00:00,1,7,abc,8,4,0,20\n";
    auto series = parse_metocean_csv(testutil::write_temp("nonnumeric", content));
    CHECK(series.records.size() == 1);
    REQUIRE(series.warnings.size() == 1);
    CHECK(series.warnings[0].line == 3);
}

TEST_CASE("negative ambient temperature is allowed") {
    std::string content = metocean_header();
    content += metocean_row(2021, 1, 1, 0, 1, 7, 0.5, 8, 4, 0, -12.5);
    auto series = parse_metocean_csv(testutil::write_temp("negtemp", content));
    REQUIRE(series.records.size() == 1);
    CHECK(series.records[0].ambient_temperature == -12.5);
}

TEST_CASE("constant series aggregates to constant cells") {
    auto series = parse_metocean_csv(testutil::write_temp("const", full_typical_coverage(10.0)));
    auto ty = aggregate_typical_days(series);
    REQUIRE(ty.grid.mode == GridMode::typical_day);
    for (int m = 0; m < 12; ++m)
        for (int h = 0; h < 24; ++h) CHECK(ty.wind_speed.at(m, h) == 10.0);
    CHECK(ty.grid.annual_days() == 365.0);
}

TEST_CASE("two Januaries average per cell") {
    std::string content = full_typical_coverage(10.0);
    // Replace nothing; add two January hour-0 samples in different years.
    content += metocean_row(2021, 1, 10, 0, 1, 7, 0.5, 8.0, 4, 500, 15);
    content += metocean_row(2022, 1, 11, 0, 1, 7, 0.5, 12.0, 4, 500, 15);
    auto series = parse_metocean_csv(testutil::write_temp("twojan", content));
    auto ty = aggregate_typical_days(series);
    // Cell (Jan, 0) pools the base 10.0 with the extra 8 and 12.
    CHECK(ty.wind_speed.at(0, 0) == Approx((10.0 + 8.0 + 12.0) / 3.0).margin(1e-12));
    // An untouched cell stays at the base value.
    CHECK(ty.wind_speed.at(0, 1) == 10.0);
}

TEST_CASE("five-year synthetic aggregation matches a scalar recomputation") {
    // Deterministic synthetic values; the oracle below re-averages with an
    // entirely separate accumulation pass over the raw rows.
    std::string content = metocean_header();
    std::map<std::pair<int, int>, std::pair<double, long>> oracle_wind;
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> jitter(0.0, 2.0);
    for (int year = 2019; year <= 2023; ++year)
        for (int m = 1; m <= 12; ++m)
            for (int day = 1; day <= 28; day += 9)
                for (int h = 0; h < 24; ++h) {
                    const double wind = 5.0 + m * 0.3 + h * 0.05 + jitter(rng);
                    content += metocean_row(year, m, day, h, 1.0, 7.0, 0.5, wind, 4.0, 100.0, 10.0);
                    auto& acc = oracle_wind[{m, h}];
                    acc.first += wind;
                    acc.second += 1;
                }
    auto series = parse_metocean_csv(testutil::write_temp("fiveyear", content));
    auto ty = aggregate_typical_days(series);
    for (int m = 1; m <= 12; ++m)
        for (int h = 0; h < 24; ++h) {
            const auto& acc = oracle_wind.at({m, h});
            REQUIRE(ty.wind_speed.at(m - 1, h) == Approx(acc.first / acc.second).margin(1e-9));
        }
}

TEST_CASE("aggregation gap raises an error listing missing cells") {
    std::string content = metocean_header();
    for (int h = 0; h < 24; ++h) content += metocean_row(2021, 3, 5, h, 1, 7, 0.5, 8, 4, 0, 20);
    auto path = testutil::write_temp("gaps", content);
    REQUIRE_THROWS_WITH(aggregate_typical_days(parse_metocean_csv(path)),
                        Catch::Matchers::ContainsSubstring("empty (period,hour) cells"));
}

TEST_CASE("aggregating an already typical series is the identity") {
    auto series = parse_metocean_csv(testutil::write_temp("ident", full_typical_coverage(9.5)));
    auto once = aggregate_typical_days(series);

    // Re-materialize one record per cell from the aggregate and re-run.
    std::string content = metocean_header();
    for (int m = 1; m <= 12; ++m)
        for (int h = 0; h < 24; ++h) {
            std::ostringstream os;
            os << testutil::timestamp(2020, m, 15, h) << ',' << csv::format_double(once.significant_wave_height.at(m - 1, h))
               << ',' << csv::format_double(once.wave_energy_period.at(m - 1, h)) << ','
               << csv::format_double(once.current_speed.at(m - 1, h)) << ','
               << csv::format_double(once.wind_speed.at(m - 1, h)) << ','
               << csv::format_double(once.anemometer_height.at(m - 1, h)) << ','
               << csv::format_double(once.irradiance.at(m - 1, h)) << ','
               << csv::format_double(once.ambient_temperature.at(m - 1, h)) << '\n';
            content += os.str();
        }
    auto twice = aggregate_typical_days(parse_metocean_csv(testutil::write_temp("ident2", content)));
    CHECK(twice == once);
}

TEST_CASE("cell means stay within the sample range") {
    std::mt19937 rng(123);
    std::uniform_real_distribution<double> wind(2.0, 18.0);
    std::string content = metocean_header();
    double lo = 1e9, hi = -1e9;
    for (int year = 2020; year <= 2022; ++year)
        for (int m = 1; m <= 12; ++m)
            for (int h = 0; h < 24; ++h) {
                const double w = wind(rng);
                lo = std::min(lo, w);
                hi = std::max(hi, w);
                content += metocean_row(year, m, 3, h, 1, 7, 0.5, w, 4, 100, 15);
            }
    auto ty = aggregate_typical_days(parse_metocean_csv(testutil::write_temp("range", content)));
    for (int m = 0; m < 12; ++m)
        for (int h = 0; h < 24; ++h) {
            CHECK(ty.wind_speed.at(m, h) >= lo);
            CHECK(ty.wind_speed.at(m, h) <= hi);
        }
}

TEST_CASE("typical year CSV round-trips bit-exactly") {
    auto series = parse_metocean_csv(testutil::write_temp("rt", full_typical_coverage(7.7)));
    auto ty = aggregate_typical_days(series);
    ty.wind_speed.at(4, 13) = 9.123456789012345;  // exercise full precision
    ty.ambient_temperature.at(0, 0) = -3.25;

    std::ostringstream os;
    emit_typical_csv(ty, os);
    auto path = testutil::write_temp("rt_csv", os.str());
    auto back = parse_typical_csv(path);
    CHECK(back == ty);
}

TEST_CASE("typical-day load CSV parses to typical mode") {
    std::string content = "month,hour,load_kw\n";
    for (int m = 1; m <= 12; ++m)
        for (int h = 0; h < 24; ++h)
            content += std::to_string(m) + "," + std::to_string(h) + ",5000\n";
    auto lp = parse_load_csv(testutil::write_temp("load288", content));
    CHECK(lp.grid.mode == GridMode::typical_day);
    CHECK(lp.demand_kw.at(6, 12) == 5000.0);
}

TEST_CASE("hourly load CSV parses to full-year mode") {
    std::string content = "timestamp,load_kw\n";
    for (int m = 1; m <= 12; ++m)
        for (int d = 1; d <= kStandardDaysPerMonth[m - 1]; ++d)
            for (int h = 0; h < 24; ++h)
                content += testutil::timestamp(2021, m, d, h) + ",4000\n";
    auto lp = parse_load_csv(testutil::write_temp("load8760", content));
    CHECK(lp.grid.mode == GridMode::full_year);
    CHECK(lp.grid.periods() == 365);
    CHECK(lp.demand_kw.at(200, 10) == 4000.0);
}

TEST_CASE("negative demand row is dropped with a warning") {
    std::string content = "month,hour,load_kw\n";
    for (int m = 1; m <= 12; ++m)
        for (int h = 0; h < 24; ++h) {
            const bool bad = (m == 2 && h == 3);
            content += std::to_string(m) + "," + std::to_string(h) + (bad ? ",-10\n" : ",100\n");
            if (bad) content += "2,3,200\n";  // replacement sample keeps the grid full
        }
    std::vector<ParseWarning> warnings;
    auto lp = parse_load_csv(testutil::write_temp("negload", content), &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].message.find("negative demand") != std::string::npos);
    CHECK(lp.demand_kw.at(1, 3) == 200.0);
}
