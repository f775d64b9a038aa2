#include <algorithm>
#include <cmath>
#include <complex>
#include <set>

#include <doctest.h>

#include "vegpat/normal_form.hpp"
#include "vegpat/stability.hpp"

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

THPoint second_th() {
    const auto ths = th_points(th_family(), 1.5, 1.65);
    REQUIRE(ths.size() == 1);
    return ths[0];
}

bool close_rel(double got, double want, double rel) {
    return std::abs(got - want) <= rel * std::abs(want);
}

// amplitude vector field and its finite-difference Jacobian stability
bool fd_stable(const AmplitudeSystem& a, double e1, double e2, double rho,
               double s) {
    const double nu1 = a.nu1_e1 * e1 + a.nu1_e2 * e2;
    const double nu2 = a.nu2_e1 * e1 + a.nu2_e2 * e2;
    auto f = [&](double r, double z, int comp) {
        return comp == 0 ? nu1 * r + a.kappa11 * r * r * r + a.kappa12 * r * z * z
                         : nu2 * z + a.kappa21 * r * r * z + a.kappa22 * z * z * z;
    };
    const double h = 1e-7;
    const double j11 = (f(rho + h, s, 0) - f(rho - h, s, 0)) / (2 * h);
    const double j12 = (f(rho, s + h, 0) - f(rho, s - h, 0)) / (2 * h);
    const double j21 = (f(rho + h, s, 1) - f(rho - h, s, 1)) / (2 * h);
    const double j22 = (f(rho, s + h, 1) - f(rho, s - h, 1)) / (2 * h);
    const double tr = j11 + j22, det = j11 * j22 - j12 * j21;
    return tr < 0 && det > 0;
}

}  // namespace

TEST_CASE("spectral data satisfies the eigen equations") {
    ModelParams p = th_family();
    const THPoint th = second_th();
    p.R = th.R_star;
    p.d1 = th.d1_star;
    const auto sd = spectral(p, th);
    const auto J = jacobian(p, th.equilibrium);

    // mode-0 Hopf pair: (J - i*omega0) p0 = 0
    const std::complex<double> iw(0.0, sd.omega0);
    const auto r1 = J.a11 * sd.p0[0] + J.a12 * sd.p0[1] - iw * sd.p0[0];
    const auto r2 = J.a21 * sd.p0[0] + J.a22 * sd.p0[1] - iw * sd.p0[1];
    CHECK(std::abs(r1) < 1e-10);
    CHECK(std::abs(r2) < 1e-10);

    // mode-k* zero eigenvalue: L_k pk = 0
    const double kk = th.k_star * th.k_star / (p.l * p.l);
    const double a11 = J.a11 - p.d1 * kk, a22 = J.a22 - p.d2 * kk;
    CHECK(std::abs(a11 * sd.pk[0] + J.a12 * sd.pk[1]) < 1e-10);
    CHECK(std::abs(J.a21 * sd.pk[0] + a22 * sd.pk[1]) < 1e-10);

    // bilinear normalization q.p = 1
    CHECK(std::abs(sd.q0[0] * sd.p0[0] + sd.q0[1] * sd.p0[1] - 1.0) < 1e-12);
    CHECK(std::abs(sd.qk[0] * sd.pk[0] + sd.qk[1] * sd.pk[1] - 1.0) < 1e-12);
}

TEST_CASE("resolvent back-substitution residuals below 1e-10") {
    ModelParams p = th_family();
    const THPoint th = second_th();
    const auto nf = nf_coeffs(p, th);
    CHECK(nf.h_residual_max < 1e-10);
    CHECK(std::abs(nf.B21) < 1e-12);
    CHECK(std::abs(nf.B111_im) < 1e-2);
}

TEST_CASE("rescaled amplitude system reproduces the reference coefficients") {
    ModelParams p = th_family();
    const auto nf = nf_coeffs(p, second_th());
    const auto a = amplitude_system(nf);
    CHECK(close_rel(a.nu1_e1, -0.33423, 0.01));
    CHECK(std::abs(a.nu1_e2) < 1e-10);
    CHECK(close_rel(a.nu2_e1, -0.64121, 0.01));
    CHECK(close_rel(a.nu2_e2, 3.76777, 0.01));
    CHECK(a.kappa11 == -1);
    CHECK(a.kappa22 == -1);
    CHECK(close_rel(a.kappa12, -1.11749, 0.01));
    CHECK(close_rel(a.kappa21, -7.43065, 0.01));
}

TEST_CASE("critical line slopes and the mixed-mode maps") {
    ModelParams p = th_family();
    const auto a = amplitude_system(nf_coeffs(p, second_th()));
    const auto cl = critical_lines(a);
    CHECK(close_rel(cl.T_slope, 0.17018, 0.01));
    CHECK(close_rel(cl.T1_slope, 0.09079, 0.01));
    CHECK(close_rel(cl.T2_slope, -0.48898, 0.01));
    CHECK(close_rel(cl.a3_rho2_e1, -0.05234, 0.01));
    CHECK(close_rel(cl.a3_rho2_e2, 0.57648, 0.01));
    // the rho^2 = 0 boundary line reproduces T1
    CHECK(close_rel(-cl.a3_rho2_e1 / cl.a3_rho2_e2, cl.T1_slope, 1e-9));
}

TEST_CASE("amplitude equilibria: D1 sample and stability vs FD Jacobian") {
    ModelParams p = th_family();
    const auto a = amplitude_system(nf_coeffs(p, second_th()));

    const auto d1set = amplitude_equilibria(a, 0.01, -0.005);
    REQUIRE(d1set.size() == 1);
    CHECK(d1set[0].name == AmpEqName::A0);
    CHECK(d1set[0].stable);

    // stability flags agree with a finite-difference planar Jacobian
    for (double e1 : {0.01, -0.01, -0.03, -0.04}) {
        for (double e2 : {-0.005, 0.01, 0.015}) {
            for (const auto& eq : amplitude_equilibria(a, e1, e2)) {
                // skip marginal cases where FD sign is unreliable
                if (eq.rho < 0.0 || eq.s != eq.s) continue;
                const bool fd = fd_stable(a, e1, e2, eq.rho, eq.s);
                CHECK(eq.stable == fd);
            }
        }
    }
}

TEST_CASE("the six sample points classify to D1..D6") {
    ModelParams p = th_family();
    const auto a = amplitude_system(nf_coeffs(p, second_th()));
    const std::pair<double, double> pts[6] = {
        {0.01, -0.005}, {0.01, 0.01},  {-0.01, 0.015},
        {-0.03, 0.01},  {-0.04, -0.005}, {-0.01, -0.005}};
    for (int i = 0; i < 6; ++i) {
        const auto reg = classify_epsilon(a, pts[i].first, pts[i].second);
        CHECK(reg.region == i + 1);
    }
    CHECK_THROWS_AS((void)classify_epsilon(a, 0.0, 0.0), std::domain_error);
}

TEST_CASE("classifier is consistent with the region ledger on a 50x50 grid") {
    ModelParams p = th_family();
    const auto a = amplitude_system(nf_coeffs(p, second_th()));

    // Table rows: per region, {exists, stable} per name A0, A1, A2, A3
    struct Row { bool ex[4]; bool st[4]; };
    const Row ledger[6] = {
        {{1, 0, 0, 0}, {1, 0, 0, 0}},  // D1
        {{1, 0, 1, 0}, {0, 0, 1, 0}},  // D2
        {{1, 1, 1, 0}, {0, 0, 1, 0}},  // D3
        {{1, 1, 1, 1}, {0, 1, 1, 0}},  // D4
        {{1, 1, 1, 0}, {0, 1, 0, 0}},  // D5
        {{1, 1, 0, 0}, {0, 1, 0, 0}},  // D6
    };
    int visited[6] = {};
    for (int i = 0; i < 50; ++i) {
        for (int j = 0; j < 50; ++j) {
            const double e1 = -0.05 + 0.1 * i / 49.0;
            const double e2 = -0.02 + 0.04 * j / 49.0;
            NFRegion reg;
            try {
                reg = classify_epsilon(a, e1, e2);
            } catch (const std::domain_error&) {
                continue;  // on a critical line
            }
            REQUIRE(reg.region >= 1);
            REQUIRE(reg.region <= 6);
            const Row& row = ledger[reg.region - 1];
            bool ex[4] = {}, st[4] = {};
            for (const auto& eq : reg.equilibria) {
                int slot = 0;
                if (eq.name == AmpEqName::A1) slot = 1;
                if (eq.name == AmpEqName::A2p || eq.name == AmpEqName::A2m) slot = 2;
                if (eq.name == AmpEqName::A3p || eq.name == AmpEqName::A3m) slot = 3;
                ex[slot] = true;
                if (eq.stable) st[slot] = true;
            }
            for (int s = 0; s < 4; ++s) {
                CHECK(ex[s] == row.ex[s]);
                CHECK(st[s] == row.st[s]);
            }
            ++visited[reg.region - 1];
        }
    }
    for (int r = 0; r < 6; ++r) CHECK(visited[r] > 0);  // grid covers all six
}

TEST_CASE("PDE interpretation mapping") {
    CHECK(pde_interpretation(AmpEqName::A0) == PdeInterpretation::HomogeneousSteady);
    CHECK(pde_interpretation(AmpEqName::A1) == PdeInterpretation::HomogeneousPeriodic);
    CHECK(pde_interpretation(AmpEqName::A2p) == PdeInterpretation::InhomogeneousSteady);
    CHECK(pde_interpretation(AmpEqName::A2m) == PdeInterpretation::InhomogeneousSteady);
    CHECK(pde_interpretation(AmpEqName::A3p) == PdeInterpretation::InhomogeneousPeriodic);
    CHECK(pde_interpretation(AmpEqName::A3m) == PdeInterpretation::InhomogeneousPeriodic);
}
