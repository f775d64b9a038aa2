#include <cmath>
#include <complex>
#include <random>

#include <doctest.h>

#include "vegpat/turing.hpp"

using namespace vegpat;

namespace {

ModelParams th_family() {
    ModelParams p;
    p.theta1 = 5.0;
    p.theta2 = 0.8;
    p.d2 = 0.01;
    p.l = 3.0;
    return p;
}

}  // namespace

TEST_CASE("dispersion eigenvalues match the closed-form 2x2 oracle") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int tested = 0;
    while (tested < 100) {
        ModelParams p = th_family();
        p.R = 1.4 + 0.3 * u(rng);
        p.d1 = 0.01 + 0.08 * u(rng);
        const auto eqs = find_positive_equilibria(p);
        if (eqs.size() != 1) continue;
        const State s{eqs[0].w, eqs[0].b};
        const auto J = jacobian(p, s);
        for (int k = 0; k <= 12; ++k) {
            const double kk = k * k / (p.l * p.l);
            const double a11 = J.a11 - p.d1 * kk;
            const double a22 = J.a22 - p.d2 * kk;
            const double tr = a11 + a22;
            const double det = a11 * a22 - J.a12 * J.a21;
            const auto dp = dispersion(p, s, k);
            CHECK(dp.Tk == doctest::Approx(tr).epsilon(1e-12));
            CHECK(dp.Jk == doctest::Approx(det).epsilon(1e-12));
            const std::complex<double> disc(tr * tr - 4 * det, 0.0);
            const auto sq = std::sqrt(disc);
            const auto lo = 0.5 * (tr - sq.real());
            const auto hi = 0.5 * (tr + sq.real());
            if (disc.real() >= 0) {
                CHECK(std::min(dp.eigs.first.real(), dp.eigs.second.real()) ==
                      doctest::Approx(lo).epsilon(1e-10));
                CHECK(std::max(dp.eigs.first.real(), dp.eigs.second.real()) ==
                      doctest::Approx(hi).epsilon(1e-10));
            } else {
                CHECK(dp.eigs.first.real() == doctest::Approx(0.5 * tr).epsilon(1e-10));
                CHECK(std::abs(dp.eigs.first.imag()) ==
                      doctest::Approx(0.5 * sq.imag()).epsilon(1e-10));
            }
        }
        ++tested;
    }
}

TEST_CASE("d1_critical zeroes the mode determinant") {
    ModelParams p = th_family();
    p.R = 1.5646872;
    const auto eqs = find_positive_equilibria(p);
    REQUIRE(eqs.size() == 1);
    const State s{eqs[0].w, eqs[0].b};
    for (int k = 6; k <= 10; ++k) {
        ModelParams q = p;
        q.d1 = d1_critical(p, s, k);
        const auto dp = dispersion(q, s, k);
        CHECK(std::abs(dp.Jk) < 1e-10);
    }
    CHECK_THROWS_AS((void)d1_critical(p, s, 0), std::domain_error);
}

TEST_CASE("k* selection and the reference switch point") {
    ModelParams p = th_family();
    p.R = 1.40;
    auto eqs = find_positive_equilibria(p);
    REQUIRE(eqs.size() == 1);
    CHECK(select_kstar(p, {eqs[0].w, eqs[0].b}).k_star == 7);

    p.R = 1.50;
    eqs = find_positive_equilibria(p);
    REQUIRE(eqs.size() == 1);
    CHECK(select_kstar(p, {eqs[0].w, eqs[0].b}).k_star == 8);

    const auto sw = kstar_switch_points(th_family(), 1.38, 1.68);
    REQUIRE(sw.size() == 1);
    CHECK(std::abs(sw[0] - 1.42198) < 1e-3);
}

TEST_CASE("no-Turing conditions") {
    ModelParams p = th_family();
    p.R = 1.5646872;
    const auto eqs = find_positive_equilibria(p);
    REQUIRE(eqs.size() == 1);
    const State s{eqs[0].w, eqs[0].b};
    const auto J = jacobian(p, s);
    REQUIRE(J.a22 > 0.0);

    p.d1 = 1e-4;  // below the threshold -d2*a11/a22
    CHECK(no_turing_check(p, s) == TuringCondition::H5);
    p.d1 = 0.06;
    CHECK(no_turing_check(p, s) == TuringCondition::H6);
}

TEST_CASE("Turing curve brackets the reference critical diffusion") {
    const auto curve = turing_curve(th_family(), 1.45, 1.68, 0, 1e-3);
    REQUIRE(!curve.empty());
    double best = 1e300, d1_at = 0.0;
    int k_at = 0;
    for (const auto& pt : curve) {
        const double d = std::abs(pt.R - 1.5646872);
        if (d < best) {
            best = d;
            d1_at = pt.d1_crit;
            k_at = pt.k_star;
        }
    }
    CHECK(best < 2e-3);
    CHECK(std::abs(d1_at - 0.0311414) < 1e-3);
    CHECK(k_at == 8);
}

TEST_CASE("TH points carry verified degeneracies") {
    auto ths = th_points(th_family(), 1.2, 2.0);
    REQUIRE(ths.size() == 2);
    CHECK(std::abs(ths[0].R_star - 1.400362) < 1e-4);
    CHECK(std::abs(ths[0].d1_star - 0.04211) < 1e-3);
    CHECK(ths[0].k_star == 7);
    CHECK(std::abs(ths[1].R_star - 1.564687) < 1e-4);
    CHECK(std::abs(ths[1].d1_star - 0.03114) < 1e-3);
    CHECK(ths[1].k_star == 8);

    for (const auto& th : ths) {
        ModelParams p = th_family();
        p.R = th.R_star;
        p.d1 = th.d1_star;
        const auto J = jacobian(p, th.equilibrium);
        CHECK(std::abs(J.trace()) < 1e-8);          // Hopf pair at mode 0
        CHECK(J.det() > 0.0);
        const auto dk = dispersion(p, th.equilibrium, th.k_star);
        CHECK(std::abs(dk.Jk) < 1e-8);              // zero eigenvalue at k*
        CHECK(dk.Tk < 0.0);
        CHECK(th.omega0 * th.omega0 == doctest::Approx(J.det()).epsilon(1e-8));
    }
}

TEST_CASE("state map boundary column") {
    ModelParams p;
    p.theta1 = 5.0;
    p.R = 0.8;
    p.d2 = 0.01;
    p.l = 3.0;
    const auto sm = theta2_state_map(p, 0.9, 1.4, 11, 0.01, 0.06, 5);
    CHECK(sm.theta2_boundary == doctest::Approx(0.1 * 9.0 / 0.8).epsilon(1e-12));
    REQUIRE(sm.theta2.size() == 11);
    REQUIRE(sm.cells.size() == 11 * 5);
    for (size_t i = 0; i < sm.theta2.size(); ++i) {
        for (size_t j = 0; j < sm.d1.size(); ++j) {
            const auto cell = sm.cells[i * sm.d1.size() + j];
            if (sm.theta2[i] < sm.theta2_boundary - 1e-9)
                CHECK(cell == SteadyStateKind::BareSoilStable);
            else
                CHECK(cell != SteadyStateKind::BareSoilStable);
        }
    }
}
