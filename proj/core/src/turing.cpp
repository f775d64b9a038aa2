#include "vegpat/turing.hpp"

#include <algorithm>
#include <cmath>

#include "vegpat/equilibria.hpp"

namespace vegpat {

using cplx = std::complex<double>;

DispersionPoint dispersion(const ModelParams& p, const State& eq, int k) {
    const Jacobian2 j = jacobian(p, eq);
    const double z = static_cast<double>(k) * k / (p.l * p.l);
    DispersionPoint d;
    d.k = k;
    d.Tk = j.trace() - (p.d1 + p.d2) * z;
    d.Jk = p.d1 * p.d2 * z * z - (p.d1 * j.a22 + p.d2 * j.a11) * z + j.det();
    const cplx disc = std::sqrt(cplx(d.Tk * d.Tk - 4.0 * d.Jk, 0.0));
    d.eigs = {0.5 * (d.Tk + disc), 0.5 * (d.Tk - disc)};
    return d;
}

double d1_critical(const ModelParams& p, const State& eq, int k) {
    const Jacobian2 j = jacobian(p, eq);
    const double l2 = p.l * p.l;
    const double B1 = p.d2 * j.a11;
    const double B2 = (j.a12 * j.a21 - j.a11 * j.a22) * l2;
    const double B3 = j.a22 * l2;
    const double k2 = static_cast<double>(k) * k;
    const double den = k2 * (p.d2 * k2 - B3);
    if (std::abs(p.d2 * k2 - B3) < 1e-12 * std::max(1.0, std::abs(B3)))
        throw std::domain_error("d1_critical: pole at d2*k^2 = a22*l^2");
    if (k == 0)
        throw std::domain_error("d1_critical: k = 0 mode has no finite threshold");
    return l2 * (B1 * k2 + B2) / den;
}

KStarSelection select_kstar(const ModelParams& p, const State& eq) {
    const Jacobian2 j = jacobian(p, eq);
    if (!(j.a22 > 0))
        throw std::domain_error("select_kstar: requires a22 > 0 (H6 regime)");
    const double J0 = j.det();
    const double prod = -j.a12 * j.a21 * J0;
    KStarSelection s;
    s.z_star = p.l * p.l * (J0 - std::sqrt(prod)) / (p.d2 * j.a11);
    int k0 = static_cast<int>(std::floor(std::sqrt(std::max(0.0, s.z_star))));
    if (k0 < 1) {
        s.k_star = 1;
        return s;
    }
    s.k_star = d1_critical(p, eq, k0) <= d1_critical(p, eq, k0 + 1) ? k0 : k0 + 1;
    return s;
}

TuringCondition no_turing_check(const ModelParams& p, const State& eq) {
    const Jacobian2 j = jacobian(p, eq);
    if (j.a22 <= 0) return TuringCondition::H4;
    if (p.d1 <= -p.d2 * j.a11 / j.a22) return TuringCondition::H5;
    return TuringCondition::H6;
}

namespace {

// Equilibrium branch tracking, same continuity rule as in hopf_points.
double branch_b(ModelParams& p, double R, int branch, double b_prev) {
    p.R = R;
    const auto eqs = find_positive_equilibria(p);
    if (eqs.empty())
        throw ConvergenceError("turing: branch lost (no positive equilibria)", R, b_prev);
    if (b_prev < 0)
        return eqs[std::min<size_t>(branch, eqs.size() - 1)].b;
    double b = eqs[0].b, best = std::abs(b - b_prev);
    for (const auto& e : eqs) {
        const double d = std::abs(e.b - b_prev);
        if (d < best) { best = d; b = e.b; }
    }
    if (best > 0.5 * std::max(1.0, b_prev))
        throw ConvergenceError("turing: branch jump detected", R, b);
    return b;
}

State branch_state(ModelParams& p, double R, int branch, double b_prev) {
    const double b = branch_b(p, R, branch, b_prev);
    return {R / (p.a + p.delta * b), b};
}

}  // namespace

std::vector<double> kstar_switch_points(ModelParams p, double R_lo,
                                        double R_hi, int branch) {
    const double dR = 1e-3;
    std::vector<double> out;
    double b_prev = -1.0;
    int k_prev = -1;
    double R_prev = R_lo;
    for (double R = R_lo; R <= R_hi + 0.5 * dR; R += dR) {
        const State eq = branch_state(p, std::min(R, R_hi), branch, b_prev);
        b_prev = eq.b;
        const Jacobian2 j = jacobian(p, eq);
        if (!(j.a22 > 0)) { k_prev = -1; R_prev = R; continue; }
        const int k = select_kstar(p, eq).k_star;
        if (k_prev > 0 && k != k_prev && std::abs(k - k_prev) == 1) {
            const int k0 = std::min(k, k_prev);
            // bisection on d1(R, k0^2) - d1(R, (k0+1)^2)
            double lo = R_prev, hi = std::min(R, R_hi), blo = b_prev;
            auto diff = [&](double Rm, double& bm) {
                const State e = branch_state(p, Rm, branch, bm);
                bm = e.b;
                return d1_critical(p, e, k0) - d1_critical(p, e, k0 + 1);
            };
            double bl = blo;
            double flo = diff(lo, bl);
            for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
                const double mid = 0.5 * (lo + hi);
                double bm = bl;
                const double fm = diff(mid, bm);
                if ((flo <= 0) == (fm <= 0)) { lo = mid; flo = fm; }
                else hi = mid;
            }
            out.push_back(0.5 * (lo + hi));
        }
        k_prev = k;
        R_prev = std::min(R, R_hi);
    }
    return out;
}

std::vector<TuringCurvePoint> turing_curve(ModelParams p, double R_lo,
                                           double R_hi, int branch, double dR) {
    std::vector<TuringCurvePoint> out;
    const auto switches = kstar_switch_points(p, R_lo, R_hi, branch);
    std::vector<double> grid;
    for (double R = R_lo; R <= R_hi + 0.5 * dR; R += dR)
        grid.push_back(std::min(R, R_hi));
    grid.insert(grid.end(), switches.begin(), switches.end());
    std::sort(grid.begin(), grid.end());

    double b_prev = -1.0;
    for (double R : grid) {
        const State eq = branch_state(p, R, branch, b_prev);
        b_prev = eq.b;
        const Jacobian2 j = jacobian(p, eq);
        if (!(j.a22 > 0)) continue;
        const KStarSelection s = select_kstar(p, eq);
        TuringCurvePoint tp;
        tp.R = R;
        tp.k_star = s.k_star;
        tp.z_star = s.z_star;
        tp.d1_crit = d1_critical(p, eq, s.k_star);
        out.push_back(tp);
    }
    return out;
}

std::vector<double> a22_sign_changes(ModelParams p, double R_lo, double R_hi,
                                     int branch, int n_scan) {
    std::vector<double> out;
    double b_prev = -1.0;
    double R_prev = R_lo;
    State eq = branch_state(p, R_lo, branch, b_prev);
    b_prev = eq.b;
    double s_prev = jacobian(p, eq).a22;
    for (int i = 1; i <= n_scan; ++i) {
        const double R = R_lo + (R_hi - R_lo) * i / n_scan;
        eq = branch_state(p, R, branch, b_prev);
        b_prev = eq.b;
        const double s = jacobian(p, eq).a22;
        if ((s_prev <= 0) != (s <= 0)) {
            double lo = R_prev, hi = R, bl = b_prev;
            double flo = s_prev;
            for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
                const double mid = 0.5 * (lo + hi);
                const State em = branch_state(p, mid, branch, bl);
                bl = em.b;
                const double fm = jacobian(p, em).a22;
                if ((flo <= 0) == (fm <= 0)) { lo = mid; flo = fm; }
                else hi = mid;
            }
            out.push_back(0.5 * (lo + hi));
        }
        s_prev = s;
        R_prev = R;
    }
    return out;
}

std::vector<THPoint> th_points(ModelParams p, double R_lo, double R_hi,
                               int branch) {
    std::vector<THPoint> out;
    const auto hopfs = hopf_points(p, R_lo, R_hi, branch);
    for (const auto& hp : hopfs) {
        p.R = hp.R;
        const State eq{hp.w_star, hp.b_star};
        const Jacobian2 j = jacobian(p, eq);
        if (!(j.a22 > 0) || !(j.det() > 0)) continue;
        const KStarSelection s = select_kstar(p, eq);
        THPoint th;
        th.R_star = hp.R;
        th.k_star = s.k_star;
        th.d1_star = d1_critical(p, eq, s.k_star);
        th.equilibrium = eq;
        th.omega0 = hp.omega0;
        if (!(th.d1_star > 0)) continue;

        // verify the defining dispersion structure at the point
        p.d1 = th.d1_star;
        const int k_max = static_cast<int>(std::ceil(
            std::sqrt(std::max(0.0, j.a22 * p.l * p.l / p.d2)))) + 2;
        bool ok = std::abs(j.trace()) < 1e-8 &&
                  std::abs(dispersion(p, eq, s.k_star).Jk) < 1e-8 &&
                  dispersion(p, eq, s.k_star).Tk < 0;
        for (int k = 1; ok && k <= k_max; ++k)
            if (k != s.k_star && dispersion(p, eq, k).Jk <= 0) ok = false;
        if (ok) out.push_back(th);
    }
    if (out.empty())
        throw ConvergenceError("th_points: no admissible Hopf-Turing intersection in bracket",
                               R_lo, R_hi);
    return out;
}

StateMap theta2_state_map(ModelParams p, double theta2_lo, double theta2_hi,
                          int n1, double d1_lo, double d1_hi, int n2) {
    StateMap m;
    m.theta2_boundary = p.mu_exceeds_rho()
                            ? p.a * (p.mu - p.rho) / (p.rho * p.R)
                            : 0.0;
    for (int i = 0; i < n1; ++i)
        m.theta2.push_back(n1 == 1 ? theta2_lo
                                   : theta2_lo + (theta2_hi - theta2_lo) * i / (n1 - 1));
    for (int jx = 0; jx < n2; ++jx)
        m.d1.push_back(n2 == 1 ? d1_lo : d1_lo + (d1_hi - d1_lo) * jx / (n2 - 1));
    m.cells.resize(static_cast<size_t>(n1) * n2, SteadyStateKind::BareSoilStable);

    for (int i = 0; i < n1; ++i) {
        p.theta2 = m.theta2[i];
        if (p.theta2 < m.theta2_boundary) continue;  // bare soil attracting
        const auto eqs = find_positive_equilibria(p);
        if (eqs.empty()) continue;
        // the branch is unique in this regime; fall back to the upper root
        const State eq{eqs.back().w, eqs.back().b};
        const Jacobian2 j = jacobian(p, eq);
        double d1c = -1.0;
        if (j.a22 > 0) {
            const KStarSelection s = select_kstar(p, eq);
            d1c = d1_critical(p, eq, s.k_star);
        }
        for (int jx = 0; jx < n2; ++jx) {
            const bool pattern = d1c > 0 && m.d1[jx] > d1c;
            m.cells[static_cast<size_t>(i) * n2 + jx] =
                pattern ? SteadyStateKind::PatternRegion
                        : SteadyStateKind::UniformVegetation;
        }
    }
    return m;
}

}  // namespace vegpat
