#pragma once

#include <random>

#include "orem/milp.hpp"

// Small randomized sizing-shaped MILPs shared by the unit suite and the
// acceptance suite: two candidate technologies with unit bounds <= 3, a
// 4-step cyclic storage chain, charge/discharge exclusion binaries.
namespace testutil {

struct TinyInstance {
    orem::MilpModel model;
    int steps = 4;
};

inline TinyInstance make_tiny_sizing_instance(unsigned seed) {
    using namespace orem;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> gen_dist(0.0, 10.0);
    std::uniform_real_distribution<double> load_dist(2.0, 9.0);
    std::uniform_real_distribution<double> cost_dist(50.0, 150.0);
    std::uniform_real_distribution<double> bess_cost_dist(2.0, 8.0);

    const int T = 4;
    const double e_unit = 10.0;       // kWh per storage module
    const int n_bess_ub = 2;
    const double eta_c = 0.9, eta_d = 0.9;
    const double soc_min = 0.1, soc_max = 0.9;
    const double rate = 0.5;
    const double big_m = rate * e_unit * n_bess_ub;

    TinyInstance out;
    MilpModel& m = out.model;

    const int n1 = m.add_var("N_tech1", VarKind::integer, 0.0, 3.0);
    const int n2 = m.add_var("N_tech2", VarKind::integer, 0.0, 3.0);
    const int nb = m.add_var("N_BESS", VarKind::integer, 0.0, n_bess_ub);
    m.obj[n1] = cost_dist(rng);
    m.obj[n2] = cost_dist(rng);
    m.obj[nb] = bess_cost_dist(rng) * e_unit;

    std::vector<double> g1(T), g2(T), load(T);
    for (int t = 0; t < T; ++t) {
        g1[t] = gen_dist(rng);
        g2[t] = gen_dist(rng);
        load[t] = load_dist(rng);
    }

    std::vector<int> pc(T), pd(T), cu(T), e(T), uc(T), ud(T);
    for (int t = 0; t < T; ++t) {
        pc[t] = m.add_var("pc" + std::to_string(t), VarKind::continuous, 0.0, big_m);
        pd[t] = m.add_var("pd" + std::to_string(t), VarKind::continuous, 0.0, big_m);
        cu[t] = m.add_var("cu" + std::to_string(t), VarKind::continuous, 0.0, kInf);
        e[t] = m.add_var("e" + std::to_string(t), VarKind::continuous, 0.0, soc_max * e_unit * n_bess_ub);
        uc[t] = m.add_var("uc" + std::to_string(t), VarKind::binary, 0.0, 1.0);
        ud[t] = m.add_var("ud" + std::to_string(t), VarKind::binary, 0.0, 1.0);
        m.bess_mode_groups.push_back({uc[t], pc[t], ud[t], pd[t]});
    }
    for (int t = 0; t < T; ++t) {
        const int tp = (t + T - 1) % T;
        m.add_row("bal" + std::to_string(t),
                  {{n1, g1[t]}, {n2, g2[t]}, {pd[t], 1.0}, {pc[t], -1.0}, {cu[t], -1.0}},
                  Sense::eq, load[t]);
        m.add_row("soc" + std::to_string(t),
                  {{e[t], 1.0}, {e[tp], -1.0}, {pc[t], -eta_c}, {pd[t], 1.0 / eta_d}}, Sense::eq, 0.0);
        m.add_row("socmax" + std::to_string(t), {{e[t], 1.0}, {nb, -soc_max * e_unit}}, Sense::le, 0.0);
        m.add_row("socmin" + std::to_string(t), {{e[t], 1.0}, {nb, -soc_min * e_unit}}, Sense::ge, 0.0);
        m.add_row("excl" + std::to_string(t), {{uc[t], 1.0}, {ud[t], 1.0}}, Sense::le, 1.0);
        m.add_row("ccap" + std::to_string(t), {{pc[t], 1.0}, {uc[t], -big_m}}, Sense::le, 0.0);
        m.add_row("crate" + std::to_string(t), {{pc[t], 1.0}, {nb, -rate * e_unit}}, Sense::le, 0.0);
        m.add_row("dcap" + std::to_string(t), {{pd[t], 1.0}, {ud[t], -big_m}}, Sense::le, 0.0);
        m.add_row("drate" + std::to_string(t), {{pd[t], 1.0}, {nb, -rate * e_unit}}, Sense::le, 0.0);
    }
    return out;
}

}  // namespace testutil
