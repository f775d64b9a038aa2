// Acceptance harness: one line per criterion, PASS/FAIL with the measured
// values, nonzero exit when anything fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "vegpat/normal_form.hpp"
#include "vegpat/ode.hpp"
#include "vegpat/pde.hpp"
#include "vegpat/stability.hpp"
#include "vegpat/turing.hpp"

using namespace vegpat;

namespace {

int failures = 0;

double now_s() {
    using clk = std::chrono::steady_clock;
    static const clk::time_point t0 = clk::now();
    return std::chrono::duration<double>(clk::now() - t0).count();
}

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion,
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

ModelParams family25(double theta2) {
    ModelParams p;
    p.theta1 = 2.5;
    p.theta2 = theta2;
    return p;
}

ModelParams th_family() {
    ModelParams p;
    p.theta1 = 5.0;
    p.theta2 = 0.8;
    p.d2 = 0.01;
    p.l = 3.0;
    return p;
}

bool near(double got, double want, double tol) {
    return std::abs(got - want) <= tol;
}

bool near_rel(double got, double want, double rel) {
    return std::abs(got - want) <= rel * std::abs(want);
}

// ---- criterion 1: bare-soil thresholds ------------------------------------
void criterion1() {
    const double t0 = now_s();
    const double want[3] = {12.0, 5.0, 4.2857143};
    const double theta2[3] = {0.075, 0.18, 0.21};
    bool ok = true;
    double got[3];
    for (int i = 0; i < 3; ++i) {
        ModelParams p = family25(theta2[i]);
        p.R = 1.0;
        got[i] = bare_soil_stability(p).R_star;
        ok = ok && near(got[i], want[i], 1e-6);
    }
    const double dt = now_s() - t0;
    ok = ok && dt < 1.0;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "bare-soil R* = %.7f, %.7f, %.7f (tol 1e-6, %.2fs)", got[0],
                  got[1], got[2], dt);
    report(1, ok, buf);
}

// ---- criterion 2: Hopf points ----------------------------------------------
void criterion2() {
    bool ok = true;
    std::string detail = "Hopf:";
    char buf[120];

    auto check_pair = [&](ModelParams p, double lo, double hi,
                          std::vector<double> want) {
        const double t0 = now_s();
        const auto hps = hopf_points(p, lo, hi);
        const double dt = now_s() - t0;
        if (hps.size() != want.size()) {
            ok = false;
            std::snprintf(buf, sizeof(buf), " [%zu points, wanted %zu]",
                          hps.size(), want.size());
            detail += buf;
            return;
        }
        for (size_t i = 0; i < want.size(); ++i) {
            ok = ok && near(hps[i].R, want[i], 1e-4) && dt < 5.0;
            std::snprintf(buf, sizeof(buf), " %.7f", hps[i].R);
            detail += buf;
        }
    };
    check_pair(th_family(), 1.2, 2.0, {1.400362, 1.564687});
    check_pair(family25(0.21), 7.0, 7.99, {7.6871373, 7.9351011});
    check_pair(family25(0.18), 8.0, 9.0, {8.5563186});
    detail += " (tol 1e-4)";
    report(2, ok, detail);
}

// ---- criterion 3: fold points ----------------------------------------------
void criterion3() {
    bool ok = true;
    std::string detail = "folds:";
    char buf[120];
    auto check = [&](double theta2, double lo, double hi,
                     std::vector<double> want) {
        auto folds = find_saddle_node_R(family25(theta2), lo, hi);
        if (folds.size() != want.size()) {
            ok = false;
            std::snprintf(buf, sizeof(buf), " [%zu folds, wanted %zu]",
                          folds.size(), want.size());
            detail += buf;
            return;
        }
        for (size_t i = 0; i < want.size(); ++i) {
            ok = ok && near(folds[i].R, want[i], 1e-4);
            std::snprintf(buf, sizeof(buf), " %.7f", folds[i].R);
            detail += buf;
        }
    };
    check(0.18, 8.0, 10.0, {8.5412358, 9.0870371});
    check(0.075, 10.0, 21.0, {10.943899, 20.391003});
    detail += " (tol 1e-4)";
    report(3, ok, detail);
}

// ---- criterion 4: Turing-Hopf points ---------------------------------------
void criterion4() {
    const auto ths = th_points(th_family(), 1.2, 2.0);
    bool ok = ths.size() == 2;
    char buf[300];
    if (ok) {
        ok = ok && near(ths[0].R_star, 1.400362, 1e-4) &&
             near(ths[0].d1_star, 0.04211, 1e-3) && ths[0].k_star == 7;
        ok = ok && near(ths[1].R_star, 1.564687, 1e-4) &&
             near(ths[1].d1_star, 0.03114, 1e-3) && ths[1].k_star == 8;
        ok = ok && near(ths[1].equilibrium.w, 6.91998, 1e-4) &&
             near(ths[1].equilibrium.b, 1.05093, 1e-4);
        std::snprintf(buf, sizeof(buf),
                      "TH (%.6f, %.5f) k=%d and (%.6f, %.5f) k=%d, eq (%.5f, %.5f)",
                      ths[0].R_star, ths[0].d1_star, ths[0].k_star, ths[1].R_star,
                      ths[1].d1_star, ths[1].k_star, ths[1].equilibrium.w,
                      ths[1].equilibrium.b);
    } else {
        std::snprintf(buf, sizeof(buf), "expected 2 TH points, got %zu", ths.size());
    }
    report(4, ok, buf);
}

// ---- criterion 5: wavenumber selection -------------------------------------
void criterion5() {
    ModelParams p = th_family();
    bool ok = true;
    auto kstar_at = [&](double R) {
        p.R = R;
        const auto eqs = find_positive_equilibria(p);
        return eqs.size() == 1 ? select_kstar(p, {eqs[0].w, eqs[0].b}).k_star : -1;
    };
    ok = ok && kstar_at(1.378) == 7 && kstar_at(1.421) == 7;
    ok = ok && kstar_at(1.423) == 8 && kstar_at(1.686) == 8;
    const auto sw = kstar_switch_points(th_family(), 1.38, 1.68);
    double sw_at = 0.0;
    if (sw.size() == 1) {
        sw_at = sw[0];
        ok = ok && near(sw_at, 1.42198, 1e-3);
    } else {
        ok = false;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "k*=7 on [1.37783, 1.42198], k*=8 above; switch at %.5f (tol 1e-3)",
                  sw_at);
    report(5, ok, buf);
}

// ---- criterion 6: normal form end-to-end -----------------------------------
void criterion6() {
    const double t0 = now_s();
    ModelParams p = th_family();
    const auto ths = th_points(p, 1.5, 1.65);
    bool ok = ths.size() == 1;
    char buf[400];
    if (ok) {
        const auto a = amplitude_system(nf_coeffs(p, ths[0]));
        const auto cl = critical_lines(a);
        ok = ok && near_rel(a.nu1_e1, -0.33423, 0.01);
        ok = ok && near_rel(a.kappa12, -1.11749, 0.01);
        ok = ok && near_rel(a.nu2_e1, -0.64121, 0.01);
        ok = ok && near_rel(a.nu2_e2, 3.76777, 0.01);
        ok = ok && near_rel(a.kappa21, -7.43065, 0.01);
        ok = ok && a.kappa11 == -1 && a.kappa22 == -1;
        ok = ok && near_rel(cl.T_slope, 0.17018, 0.01);
        ok = ok && near_rel(cl.T1_slope, 0.09079, 0.01);
        ok = ok && near_rel(cl.T2_slope, -0.48898, 0.01);
        const double dt = now_s() - t0;
        ok = ok && dt < 10.0;
        std::snprintf(buf, sizeof(buf),
                      "nu1=%.5f*e1, nu2=%.5f*e1%+.5f*e2, k12=%.5f, k21=%.5f, "
                      "slopes %.5f %.5f %.5f (rel tol 1%%, %.2fs)",
                      a.nu1_e1, a.nu2_e1, a.nu2_e2, a.kappa12, a.kappa21,
                      cl.T_slope, cl.T1_slope, cl.T2_slope, dt);
    } else {
        std::snprintf(buf, sizeof(buf), "expected 1 TH point, got %zu", ths.size());
    }
    report(6, ok, buf);
}

// ---- criterion 7: region classification + PDE outcomes ---------------------
double g_turing_corr_max = -1.0;  // reused by criterion 10

void criterion7() {
    ModelParams base = th_family();
    const auto ths = th_points(base, 1.5, 1.65);
    if (ths.size() != 1) {
        report(7, false, "expected 1 TH point for the epsilon frame");
        return;
    }
    const THPoint th = ths[0];
    const auto asys = amplitude_system(nf_coeffs(base, th));

    const std::pair<double, double> pts[6] = {
        {0.01, -0.005}, {0.01, 0.01},    {-0.01, 0.015},
        {-0.03, 0.01},  {-0.04, -0.005}, {-0.01, -0.005}};
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 6; ++i) {
        const auto reg = classify_epsilon(asys, pts[i].first, pts[i].second);
        if (reg.region != i + 1) {
            ok = false;
            detail += " [point " + std::to_string(i + 1) + " -> D" +
                      std::to_string(reg.region) + "]";
        }
    }

    const int nx = 256;
    const auto x = pde_grid(nx, base.l);
    auto run = [&](double e1, double e2, double amp, bool cosine, double t_end,
                   double max_s, double seed_amp = 1e-6) {
        ModelParams p = base;
        p.R = th.R_star + e1;
        p.d1 = th.d1_star + e2;
        std::vector<double> w0(nx), b0(nx);
        for (int i = 0; i < nx; ++i) {
            const double pert = cosine ? amp * std::cos(x[i]) : amp;
            w0[i] = th.equilibrium.w + pert;
            b0[i] = th.equilibrium.b + pert;
        }
        const double t0 = now_s();
        const auto f = simulate_pde(p, w0, b0, t_end, seed_amp, th.k_star);
        const auto oc = classify_pattern(f);
        if (now_s() - t0 > max_s) {
            detail += " [slow run]";
            return PatternOutcome{};
        }
        if (oc.kind == PatternKind::InhomogeneousSteady ||
            oc.kind == PatternKind::InhomogeneousPeriodic)
            g_turing_corr_max = std::max(g_turing_corr_max, oc.antiphase_corr);
        return oc;
    };
    auto expect = [&](const PatternOutcome& oc, PatternKind want, const char* tag) {
        if (oc.kind != want) {
            ok = false;
            detail += std::string(" [") + tag + ": kind " +
                      std::to_string(static_cast<int>(oc.kind)) + "]";
        }
    };

    expect(run(0.01, -0.005, 0.1, true, 3000, 120), PatternKind::HomogeneousSteady, "D1");
    // the cosine IC's mode-3 harmonics feed k = 9; a stronger k = 8 seed is
    // needed so the fastest-growing mode wins the selection
    const auto d2 = run(0.01, 0.01, 0.1, true, 3000, 120, 1e-3);
    expect(d2, PatternKind::InhomogeneousSteady, "D2");
    if (d2.dominant_mode != 8) {
        ok = false;
        detail += " [D2 mode " + std::to_string(d2.dominant_mode) + "]";
    }
    expect(run(-0.01, 0.015, 0.1, false, 5000, 120), PatternKind::InhomogeneousSteady, "D3");
    expect(run(-0.03, 0.01, 0.1, true, 5000, 120), PatternKind::InhomogeneousSteady, "D4a");
    expect(run(-0.03, 0.01, 0.01, true, 5000, 120), PatternKind::HomogeneousPeriodic, "D4b");
    expect(run(-0.04, -0.005, 0.1, true, 3000, 120), PatternKind::HomogeneousPeriodic, "D5");
    expect(run(-0.01, -0.005, 0.1, true, 3000, 120), PatternKind::HomogeneousPeriodic, "D6");

    report(7, ok,
           "six epsilon points -> D1..D6; PDE outcomes match the region table"
           " (nx=256)" + detail);
}

// ---- criterion 8: homoclinic estimates -------------------------------------
void criterion8() {
    char buf[200];
    bool ok = true;
    const double t0 = now_s();
    const double r18 = homoclinic_scan(family25(0.18), 8.62, 8.80, 1);
    const double t1 = now_s();
    const double r075 = homoclinic_scan(family25(0.075), 18.2, 18.8, -1);
    const double t2 = now_s();
    ok = ok && near(r18, 8.6789505, 1e-2) && (t1 - t0) < 120.0;
    ok = ok && near(r075, 18.375122, 1e-2) && (t2 - t1) < 120.0;
    std::snprintf(buf, sizeof(buf),
                  "R_HL = %.7f (want 8.6789505) and %.6f (want 18.375122), tol 1e-2",
                  r18, r075);
    report(8, ok, buf);
}

// ---- criterion 9: cycle-branch shapes --------------------------------------
void criterion9() {
    bool ok = true;
    std::string detail;

    // theta2 = 0.8: a bubble of stable cycles exactly on (R1, R2)
    ModelParams p = th_family();
    const auto hps = hopf_points(p, 1.2, 2.0);
    if (hps.size() == 2 && hps[0].lyapunov == LyapunovSign::Super &&
        hps[1].lyapunov == LyapunovSign::Super) {
        const double R1 = hps[0].R, R2 = hps[1].R;
        const auto inside = cycle_branch(p, R1 + 0.01, R2 - 0.01, 5, 4000.0);
        int found = 0;
        for (const auto& s : inside) {
            if (s.found) {
                ++found;
                if (!s.stable) ok = false;
            }
        }
        if (found != 5) {
            ok = false;
            detail += " [bubble: " + std::to_string(found) + "/5 inside]";
        }
        for (const auto& s : cycle_branch(p, R1 - 0.02, R1 - 0.02, 1, 4000.0))
            if (s.found) ok = false;
        for (const auto& s : cycle_branch(p, R2 + 0.02, R2 + 0.02, 1, 4000.0))
            if (s.found) ok = false;
    } else {
        ok = false;
        detail += " [bubble: Hopf structure wrong]";
    }

    // theta2 = 0.65: coexisting stable and unstable cycles just past R2
    ModelParams q;
    q.theta1 = 5.0;
    q.theta2 = 0.65;
    const auto hq = hopf_points(q, 1.39, 2.5);
    if (hq.size() == 2 && hq[1].lyapunov == LyapunovSign::Sub) {
        const double R = hq[1].R + 0.0013;
        const auto br = cycle_branch(q, R, R, 1, 4000.0);
        const CycleSample* st = nullptr;
        const CycleSample* un = nullptr;
        for (const auto& s : br) {
            if (!s.found) continue;
            if (s.stable) st = &s; else un = &s;
        }
        if (st && un) {
            // the stable cycle is the larger one and encloses the unstable
            if (!(st->b_max > un->b_max && st->b_min < un->b_min)) {
                ok = false;
                detail += " [heart: nesting violated]";
            }
        } else {
            ok = false;
            detail += " [heart: missing coexisting pair]";
        }
    } else {
        ok = false;
        detail += " [heart: Hopf structure wrong]";
    }

    report(9, ok, "bubble on (R1, R2) all stable; coexisting cycle pair past "
                  "R2 at theta2=0.65" + detail);
}

// ---- criterion 10: property suites -----------------------------------------
void criterion10() {
    bool ok = true;
    std::string detail;
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    // a priori solution bounds on 200 random forward runs
    for (int run = 0; run < 200; ++run) {
        ModelParams p;
        p.R = 0.5 + 15.0 * u(rng);
        p.a = 0.05 + 0.3 * u(rng);
        p.delta = 0.05 + 0.3 * u(rng);
        p.rho = 0.5 + 1.5 * u(rng);
        p.mu = 0.5 + 10.0 * u(rng);
        p.theta1 = 6.0 * u(rng);
        p.theta2 = u(rng);
        const State init{0.2 + 20.0 * u(rng), 0.01 + 8.0 * u(rng)};
        const auto traj = integrate_ode(p, init, 40.0);
        const double Mb = std::max({init.b, init.w, p.R / p.a});
        const double w_hi = std::max(init.w, p.R / p.a);
        const double w_lo = std::min(init.w, p.R / (p.a + p.delta * Mb));
        for (const auto& s : traj.y) {
            if (s.b > Mb * (1 + 1e-6) || s.w > w_hi * (1 + 1e-6) ||
                s.w < w_lo * (1 - 1e-6)) {
                ok = false;
                detail += " [a priori bound violated]";
                run = 200;
                break;
            }
        }
    }

    // Descartes case count vs bisection oracle on 1000 random quartics
    int tested = 0, agreed = 0;
    while (tested < 1000) {
        QuarticF q{10.0 * u(rng) - 5.0, 10.0 * u(rng) - 5.0, 10.0 * u(rng) - 5.0,
                   0.1 + 5.0 * u(rng)};
        if (std::abs(q.C0) < 1e-6 || std::abs(q.C1) < 1e-6 || std::abs(q.C2) < 1e-6)
            continue;
        const double bound = 1.0 + std::max({std::abs(q.C0), std::abs(q.C1),
                                             std::abs(q.C2), std::abs(q.C3)});
        const auto roots = poly_real_roots({1.0, q.C3, q.C2, q.C1, q.C0}, 1e-12, bound);
        bool tangent = false;
        for (double r : roots)
            if (std::abs(q.deriv(r)) < 1e-4) tangent = true;
        if (tangent) continue;
        ++tested;
        if (descartes_case(q).positive_roots == static_cast<int>(roots.size()))
            ++agreed;
    }
    if (agreed != tested) {
        ok = false;
        detail += " [Descartes " + std::to_string(agreed) + "/1000]";
    }

    // dispersion eigenvalues against the closed-form oracle
    ModelParams p = th_family();
    p.R = 1.52;
    p.d1 = 0.04;
    const auto eqs = find_positive_equilibria(p);
    if (eqs.size() == 1) {
        const State s{eqs[0].w, eqs[0].b};
        const auto J = jacobian(p, s);
        for (int k = 0; k <= 20; ++k) {
            const double kk = k * k / (p.l * p.l);
            const double tr = J.trace() - (p.d1 + p.d2) * kk;
            const double det = (J.a11 - p.d1 * kk) * (J.a22 - p.d2 * kk) -
                               J.a12 * J.a21;
            const auto dp = dispersion(p, s, k);
            const double eig_sum = (dp.eigs.first + dp.eigs.second).real();
            const double eig_prod =
                (dp.eigs.first * dp.eigs.second).real();
            if (std::abs(dp.Tk - tr) > 1e-12 || std::abs(dp.Jk - det) > 1e-12 ||
                std::abs(eig_sum - tr) > 1e-10 || std::abs(eig_prod - det) > 1e-10) {
                ok = false;
                detail += " [dispersion oracle]";
                break;
            }
        }
    } else {
        ok = false;
        detail += " [dispersion eq missing]";
    }

    // resolvent residuals
    const auto ths = th_points(th_family(), 1.5, 1.65);
    if (ths.size() == 1) {
        const auto nf = nf_coeffs(th_family(), ths[0]);
        if (!(nf.h_residual_max < 1e-10)) {
            ok = false;
            detail += " [h residual " + std::to_string(nf.h_residual_max) + "]";
        }
    } else {
        ok = false;
        detail += " [TH point missing]";
    }

    // PDE homogeneity: constant data + zero seed equals the same-step ODE
    {
        ModelParams hp = th_family();
        hp.R = 1.57;
        hp.d1 = 0.04;
        const int nx = 64;
        const double dt = 1e-2;
        const auto f = simulate_pde(hp, std::vector<double>(nx, 6.5),
                                    std::vector<double>(nx, 1.2), 40.0, 0.0, 0,
                                    PdeScheme::Imex, dt, 0.5);
        double w = 6.5, b = 1.2, t = 0.0;
        size_t snap = 1;
        double max_err = 0.0;
        while (t < 40.0 - 1e-12 && snap < f.t.size()) {
            const double fw = hp.R - hp.a * w - hp.delta * w * b;
            const double fb = hp.rho * b * (1.0 - b / w) -
                              hp.mu * b / (1.0 + hp.theta1 * b + hp.theta2 * w);
            w += dt * fw;
            b = std::max(b + dt * fb, 0.0);
            t += dt;
            if (t >= f.t[snap] - 1e-9) {
                for (int i = 0; i < nx; ++i) {
                    max_err = std::max(max_err, std::abs(f.w[snap][i] - w));
                    max_err = std::max(max_err, std::abs(f.b[snap][i] - b));
                }
                ++snap;
            }
        }
        if (!(max_err < 1e-8)) {
            ok = false;
            detail += " [homogeneity err " + std::to_string(max_err) + "]";
        }
    }

    // antiphase correlation in every Turing pattern classified in criterion 7
    if (!(g_turing_corr_max < 0.0)) {
        ok = false;
        detail += " [antiphase corr " + std::to_string(g_turing_corr_max) + "]";
    }

    report(10, ok,
           "a priori bounds (200 runs), Descartes vs oracle (1000), dispersion "
           "oracle, resolvent residuals, PDE homogeneity, antiphase" + detail);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
