#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "orem/simplex.hpp"

using namespace orem;
using Catch::Approx;

namespace {

/// Dual objective for the bounded form: y'b plus reduced-cost contributions
/// of nonbasic structurals resting on finite bounds.
double dual_objective(const MilpModel& m, const LpSolution& sol) {
    double v = m.obj_constant;
    for (int r = 0; r < m.num_rows(); ++r) v += sol.duals[r] * m.rows[r].rhs;
    for (int j = 0; j < m.num_vars(); ++j) {
        const double d = sol.reduced_costs[j];
        if (d == 0.0) continue;
        const double at = std::abs(sol.x[j] - m.vars[j].lb) <= std::abs(sol.x[j] - m.vars[j].ub)
                              ? m.vars[j].lb
                              : m.vars[j].ub;
        v += d * at;
    }
    return v;
}

}  // namespace

TEST_CASE("minimal one-variable lp") {
    MilpModel m;
    int x = m.add_var("x", VarKind::continuous, 0.0, kInf);
    m.obj[x] = 1.0;
    m.add_row("c", {{x, 1.0}}, Sense::ge, 3.0);
    auto sol = solve_lp(m);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.x[0] == Approx(3.0));
    CHECK(sol.objective == Approx(3.0));
}

TEST_CASE("two-variable facet optimum") {
    MilpModel m;
    int x = m.add_var("x", VarKind::continuous, 0.0, kInf);
    int y = m.add_var("y", VarKind::continuous, 0.0, kInf);
    m.obj[x] = -1.0;
    m.obj[y] = -1.0;
    m.add_row("cap", {{x, 1.0}, {y, 1.0}}, Sense::le, 1.0);
    auto sol = solve_lp(m);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == Approx(-1.0));
    CHECK(sol.x[0] + sol.x[1] == Approx(1.0));
}

TEST_CASE("contradictory rows are infeasible") {
    MilpModel m;
    int x = m.add_var("x", VarKind::continuous, 0.0, kInf);
    m.add_row("lo", {{x, 1.0}}, Sense::ge, 2.0);
    m.add_row("hi", {{x, 1.0}}, Sense::le, 1.0);
    auto sol = solve_lp(m);
    CHECK(sol.status == LpStatus::infeasible);
}

TEST_CASE("unbounded direction is detected") {
    MilpModel m;
    int x = m.add_var("x", VarKind::continuous, 0.0, kInf);
    int y = m.add_var("y", VarKind::continuous, 0.0, kInf);
    m.obj[x] = -1.0;
    m.add_row("tie", {{x, 1.0}, {y, -1.0}}, Sense::le, 0.0);
    auto sol = solve_lp(m);
    CHECK(sol.status == LpStatus::unbounded);
}

TEST_CASE("pure bound flips reach the optimum without rows") {
    MilpModel m;
    int x = m.add_var("x", VarKind::continuous, 0.0, 5.0);
    m.obj[x] = -2.0;
    auto sol = solve_lp(m);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.x[0] == Approx(5.0));
    CHECK(sol.objective == Approx(-10.0));
}

TEST_CASE("negative lower bounds and upper-bounded starts") {
    MilpModel m;
    int x = m.add_var("x", VarKind::continuous, -4.0, 4.0);
    int y = m.add_var("y", VarKind::continuous, -kInf, 2.0);
    m.obj[x] = 1.0;
    m.obj[y] = 1.0;
    m.add_row("link", {{x, 1.0}, {y, 1.0}}, Sense::ge, -3.0);
    auto sol = solve_lp(m);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == Approx(-3.0));
}

TEST_CASE("equality with artificials") {
    MilpModel m;
    int x = m.add_var("x", VarKind::continuous, 0.0, 3.0);
    int y = m.add_var("y", VarKind::continuous, 0.0, 3.0);
    m.obj[x] = 1.0;
    m.obj[y] = 2.0;
    m.add_row("eq", {{x, 1.0}, {y, 1.0}}, Sense::eq, 2.0);
    auto sol = solve_lp(m);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == Approx(2.0));
    CHECK(sol.x[0] == Approx(2.0));
}

TEST_CASE("free variable enters in either direction") {
    MilpModel m;
    int x = m.add_var("x", VarKind::continuous, -kInf, kInf);
    int s = m.add_var("s", VarKind::continuous, 0.0, kInf);
    m.obj[x] = 1.0;
    m.add_row("eq", {{x, 1.0}, {s, -1.0}}, Sense::eq, -7.0);
    auto sol = solve_lp(m);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == Approx(-7.0));
}

TEST_CASE("weak duality audit on random bounded lps") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    std::uniform_real_distribution<double> pos(0.5, 4.0);
    std::uniform_int_distribution<int> sense_pick(0, 2);

    int optimal_count = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 4 + trial % 5;
        const int rows = 3 + trial % 4;
        MilpModel m;
        for (int j = 0; j < n; ++j) {
            const double lb = (trial + j) % 3 == 0 ? -pos(rng) : 0.0;
            m.add_var("x" + std::to_string(j), VarKind::continuous, lb, lb + 2.0 * pos(rng));
            m.obj[j] = coef(rng);
        }
        // Feasibility by construction: rhs from a random interior point.
        std::vector<double> x0(n);
        for (int j = 0; j < n; ++j)
            x0[j] = 0.5 * (m.vars[j].lb + m.vars[j].ub);
        for (int r = 0; r < rows; ++r) {
            std::vector<LinTerm> terms;
            double act = 0.0;
            for (int j = 0; j < n; ++j) {
                const double a = coef(rng);
                if (std::abs(a) < 0.3) continue;
                terms.push_back({j, a});
                act += a * x0[j];
            }
            if (terms.empty()) continue;
            const int s = sense_pick(rng);
            if (s == 0) m.add_row("r" + std::to_string(r), std::move(terms), Sense::le, act + pos(rng));
            else if (s == 1) m.add_row("r" + std::to_string(r), std::move(terms), Sense::ge, act - pos(rng));
            else m.add_row("r" + std::to_string(r), std::move(terms), Sense::eq, act);
        }

        auto sol = solve_lp(m);
        REQUIRE(sol.status == LpStatus::optimal);
        ++optimal_count;

        // Primal feasibility of the reported point.
        CHECK(m.max_violation(sol.x) <= 1e-6);
        // Strong duality at the reported basis.
        CHECK(dual_objective(m, sol) == Approx(sol.objective).margin(1e-6 * (1.0 + std::abs(sol.objective))));
        // Dual feasibility: reduced-cost signs consistent with resting bounds.
        for (int j = 0; j < n; ++j) {
            const double d = sol.reduced_costs[j];
            if (std::abs(sol.x[j] - m.vars[j].lb) < 1e-7 && std::abs(sol.x[j] - m.vars[j].ub) > 1e-7)
                CHECK(d >= -1e-6);
            if (std::abs(sol.x[j] - m.vars[j].ub) < 1e-7 && std::abs(sol.x[j] - m.vars[j].lb) > 1e-7)
                CHECK(d <= 1e-6);
        }
    }
    CHECK(optimal_count == 40);
}

TEST_CASE("degenerate rows do not cycle") {
    MilpModel m;
    const int n = 6;
    for (int j = 0; j < n; ++j) {
        m.add_var("x" + std::to_string(j), VarKind::continuous, 0.0, kInf);
        m.obj[j] = j % 2 == 0 ? 1.0 : -1.0;
    }
    // Many zero-rhs ties.
    for (int r = 0; r < 8; ++r) {
        std::vector<LinTerm> t;
        for (int j = 0; j < n; ++j)
            if ((r + j) % 2 == 0) t.push_back({j, (j % 3 == 0 ? 1.0 : -1.0)});
        m.add_row("z" + std::to_string(r), std::move(t), Sense::le, 0.0);
    }
    m.add_row("cap", {{1, 1.0}, {3, 1.0}, {5, 1.0}}, Sense::le, 5.0);
    auto sol = solve_lp(m);
    CHECK((sol.status == LpStatus::optimal || sol.status == LpStatus::unbounded));
}

TEST_CASE("determinism across repeated solves") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    MilpModel m;
    for (int j = 0; j < 8; ++j) {
        m.add_var("x" + std::to_string(j), VarKind::continuous, 0.0, 10.0);
        m.obj[j] = coef(rng);
    }
    for (int r = 0; r < 6; ++r) {
        std::vector<LinTerm> t;
        for (int j = 0; j < 8; ++j) t.push_back({j, coef(rng)});
        m.add_row("r" + std::to_string(r), std::move(t), Sense::le, 5.0);
    }
    auto a = solve_lp(m);
    auto b = solve_lp(m);
    REQUIRE(a.status == b.status);
    CHECK(a.objective == b.objective);
    CHECK(a.x == b.x);
}
