#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "gctec/datasets.hpp"
#include "gctec/path_impedance.hpp"

using namespace gctec;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

TissueTable human() { return load_tissue_table("human_forearm"); }

ChannelGeometry base_geom() {
    ChannelGeometry g;
    g.d = 0.1;
    g.e_st = 0.05;
    g.e_sr = 0.05;
    return g;
}

ElectrodeConfig base_elec() { return ElectrodeConfig::with_side(0.01); }

double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST_CASE("tissue_admittance DC reduction") {
    auto t = human().at("muscle");
    // at low frequency the displacement part vanishes but the conduction part
    // of the membrane branch survives: gc -> sigma*M2, so
    // Y -> F_W * sigma * M1 * (1 + kappa*M2/(kappa*M1 + M2))
    const double m1 = 1e-3, m2 = 1e-2;
    const auto y = tissue_admittance(t, m1, m2, 2 * PI * 1e-3);
    const double k = t.kappa;
    const double expected =
        t.f_w * t.dispersion.sigma_s * m1 * (1.0 + k * m2 / (k * m1 + m2));
    CHECK_THAT(std::abs(y), WithinRel(expected, 1e-4));
}

TEST_CASE("tissue_admittance F_W scaling") {
    auto t = human().at("muscle");
    auto t2 = t;
    t2.f_w = 2.0 * t.f_w;
    const auto y1 = tissue_admittance(t, 1e-3, 1e-2, 2 * PI * 1e5);
    const auto y2 = tissue_admittance(t2, 1e-3, 1e-2, 2 * PI * 1e5);
    CHECK_THAT(std::abs(y2 / y1), WithinRel(2.0, 1e-12));
}

TEST_CASE("tissue_admittance degree-1 scaling in (M1, M2)") {
    for (const char* name : {"skin", "fat", "muscle", "cortical_bone"}) {
        auto t = human().at(name);
        for (double lambda : {0.5, 2.0, 7.3, 1e3}) {
            const auto y = tissue_admittance(t, 1e-3, 1e-2, 2 * PI * 1e5);
            const auto ys = tissue_admittance(t, lambda * 1e-3, lambda * 1e-2, 2 * PI * 1e5);
            CHECK(rel_err(ys, lambda * y) < 1e-9);
        }
    }
}

TEST_CASE("tissue_admittance domain errors") {
    auto t = human().at("skin");
    CHECK_THROWS_AS(tissue_admittance(t, 0.0, 1e-2, 1e5), DomainError);
    CHECK_THROWS_AS(tissue_admittance(t, 1e-3, -1.0, 1e5), DomainError);
    CHECK_THROWS_AS(tissue_admittance(t, 1e-3, 1e-2, 0.0), DomainError);
}

TEST_CASE("direct impedance symmetry and E_S scaling") {
    auto tab = human();
    auto g = base_geom();
    auto e = base_elec();
    const double w = 2 * PI * 1e5;
    const auto zt = direct_impedance(tab.at("skin"), g, e, w, Side::tx);
    const auto zr = direct_impedance(tab.at("skin"), g, e, w, Side::rx);
    CHECK(zt == zr);  // e_st == e_sr, same layer

    // halving E_S halves the conduction geometry factor for this path
    auto g2 = g;
    g2.e_st = g.e_st / 2.0;
    auto t = tab.at("skin");
    const double m1 = e.e_l * t.thickness / g.e_st;
    const auto za = tissue_admittance(t, m1, e.e_l, w);
    const auto zb = tissue_admittance(t, 2.0 * m1, e.e_l, w);
    CHECK(rel_err(1.0 / direct_impedance(t, g2, e, w, Side::tx), zb) < 1e-12);
    CHECK(rel_err(1.0 / direct_impedance(t, g, e, w, Side::tx), za) < 1e-12);
}

TEST_CASE("longitudinal impedance misalignment") {
    auto tab = human();
    auto g = base_geom();
    auto e = base_elec();
    const double w = 2 * PI * 1e5;
    auto g0 = g;
    g0.delta_l = 0.0;
    const auto z0 = longitudinal_impedance(tab.at("muscle"), g0, e, w);
    auto gd = g;
    gd.delta_l = 0.0;
    gd.d = std::hypot(g.d, 0.0);
    CHECK(z0 == longitudinal_impedance(tab.at("muscle"), gd, e, w));
    for (double a : {0.005, 0.02, 0.05}) {
        auto ga = g;
        ga.delta_l = a;
        CHECK(std::abs(longitudinal_impedance(tab.at("muscle"), ga, e, w)) >=
              std::abs(z0));
    }
}

TEST_CASE("cross impedance geometry") {
    auto g = base_geom();
    CHECK_THAT(std::hypot(g.d, g.e_st), WithinRel(0.1118033988749895, 1e-12));
}

TEST_CASE("transverse impedance symmetry and thickness trend") {
    auto tab = human();
    auto e = base_elec();
    const double w = 2 * PI * 1e5;
    auto skin = tab.at("skin");
    CHECK(transverse_impedance(skin, skin, e, w) ==
          transverse_impedance(skin, skin, e, w));

    // |Z_T| grows with the thickness of the crossed layer
    auto fat = tab.at("fat");
    auto fat_thicker = fat;
    fat_thicker.thickness = fat.thickness * 1.5;
    CHECK(std::abs(transverse_impedance(skin, fat_thicker, e, w)) >
          std::abs(transverse_impedance(skin, fat, e, w)));
}

TEST_CASE("coupling impedance") {
    auto e = base_elec();
    const double w1 = 2 * PI * 1e5, w2 = 2 * PI * 1e6;

    // negative exponents: |Z_Co| falls with frequency
    CHECK(std::abs(coupling_impedance(e, w2)) < std::abs(coupling_impedance(e, w1)));

    // with m = m' = 0 magnitude is frequency independent
    auto e0 = e;
    e0.m = 0.0;
    e0.m_prime = 0.0;
    CHECK_THAT(std::abs(coupling_impedance(e0, w1)),
               WithinRel(std::abs(coupling_impedance(e0, w2)), 1e-12));

    CHECK_THROWS_AS(coupling_impedance(e, 0.0), DomainError);
}

TEST_CASE("path impedances have positive real part in band") {
    auto tab = human();
    auto g = base_geom();
    auto e = base_elec();
    for (double f : {50e3, 100e3, 300e3, 1e6, 2e6}) {
        const double w = 2 * PI * f;
        for (const char* name : {"skin", "fat", "muscle", "cortical_bone"}) {
            auto t = tab.at(name);
            CHECK(direct_impedance(t, g, e, w, Side::tx).real() > 0.0);
            CHECK(longitudinal_impedance(t, g, e, w).real() > 0.0);
            CHECK(cross_impedance(t, g, e, w).real() > 0.0);
            CHECK(transverse_impedance(t, tab.at("fat"), e, w).real() > 0.0);
        }
        CHECK(coupling_impedance(e, w).real() > 0.0);
    }
}

TEST_CASE("|Z_L| monotone in d, |Z_D| non-increasing in E_L") {
    auto tab = human();
    auto e = base_elec();
    const double w = 2 * PI * 1e5;
    double prev = 0.0;
    for (double d : {0.02, 0.04, 0.08, 0.16}) {
        auto g = base_geom();
        g.d = d;
        const double cur = std::abs(longitudinal_impedance(tab.at("muscle"), g, e, w));
        CHECK(cur >= prev);
        prev = cur;
    }
    prev = 1e300;
    for (double el : {0.005, 0.01, 0.02, 0.04}) {
        auto g = base_geom();
        auto ee = ElectrodeConfig::with_side(el);
        const double cur = std::abs(direct_impedance(tab.at("muscle"), g, ee, w, Side::tx));
        CHECK(cur <= prev);
        prev = cur;
    }
}

TEST_CASE("closed-form trend expressions") {
    ClosedFormParams p;
    p.rho = 1.0 / 0.36;
    p.eps = EPS0 * 8089.2;
    p.omega = 2 * PI * 1e5;
    p.t = 0.015;
    p.e_l = 0.01;
    p.area = 1e-4;
    p.d = 0.1;
    p.e_s = 0.05;

    // Z_L grows when D doubles
    auto zl1 = closed_form_impedance(ClosedFormKind::Z_L, p);
    auto p2 = p;
    p2.d = 2.0 * p.d;
    auto zl2 = closed_form_impedance(ClosedFormKind::Z_L, p2);
    CHECK(std::abs(zl2) > std::abs(zl1));

    // misalignment form reduces to the plain form at delta_l = 0
    auto pm = p;
    pm.delta_l = 0.0;
    CHECK(closed_form_impedance(ClosedFormKind::Z_L, pm) == zl1);
    pm.delta_l = 0.05;
    CHECK(std::abs(closed_form_impedance(ClosedFormKind::Z_L, pm)) > std::abs(zl1));

    // Z_T increases with positive thickness deviation
    auto zt0 = closed_form_impedance(ClosedFormKind::Z_T, p);
    auto pg = p;
    pg.gamma = 0.005;
    CHECK(std::abs(closed_form_impedance(ClosedFormKind::Z_T, pg)) > std::abs(zt0));

    // Z_D at E_S = 0: numerator collapses, value is exactly zero
    auto pz = p;
    pz.e_s = 0.0;
    CHECK(std::abs(closed_form_impedance(ClosedFormKind::Z_D, pz)) == 0.0);

    // trend sign agreement with the solver-path impedances
    auto tab = human();
    auto e = base_elec();
    auto g = base_geom();
    auto g_far = g;
    g_far.d = 0.2;
    const double w = p.omega;
    const bool solver_up = std::abs(longitudinal_impedance(tab.at("muscle"), g_far, e, w)) >
                           std::abs(longitudinal_impedance(tab.at("muscle"), g, e, w));
    CHECK(solver_up == (std::abs(zl2) > std::abs(zl1)));
}
