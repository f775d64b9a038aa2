#include "vegpat/pde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vegpat {

std::vector<double> pde_grid(int nx, double l) {
    std::vector<double> x(nx);
    const double dx = l * M_PI / nx;
    for (int i = 0; i < nx; ++i) x[i] = (i + 0.5) * dx;
    return x;
}

double cosine_mode(const std::vector<double>& profile,
                   const std::vector<double>& x, double l, int k) {
    double s = 0.0;
    if (k == 0) {
        for (double v : profile) s += v;
        return s / static_cast<double>(profile.size());
    }
    for (size_t i = 0; i < profile.size(); ++i)
        s += profile[i] * std::cos(k * x[i] / l);
    return 2.0 * s / static_cast<double>(profile.size());
}

namespace {

// Backward-Euler diffusion step (I - r*T)u = rhs with Neumann tridiagonal T.
void diffuse_implicit(std::vector<double>& u, double r,
                      std::vector<double>& cp, std::vector<double>& dp) {
    const int n = static_cast<int>(u.size());
    if (r == 0.0) return;
    // rows: [1+r, -r] ... [-r, 1+2r, -r] ... [-r, 1+r]
    cp[0] = -r / (1.0 + r);
    dp[0] = u[0] / (1.0 + r);
    for (int i = 1; i < n; ++i) {
        const double diag = (i == n - 1) ? 1.0 + r : 1.0 + 2.0 * r;
        const double m = diag + r * cp[i - 1];
        cp[i] = -r / m;
        dp[i] = (u[i] + r * dp[i - 1]) / m;
    }
    u[n - 1] = dp[n - 1];
    for (int i = n - 2; i >= 0; --i) u[i] = dp[i] - cp[i] * u[i + 1];
}

void laplacian(const std::vector<double>& u, double inv_dx2,
               std::vector<double>& out) {
    const int n = static_cast<int>(u.size());
    out[0] = (u[1] - u[0]) * inv_dx2;
    for (int i = 1; i < n - 1; ++i)
        out[i] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * inv_dx2;
    out[n - 1] = (u[n - 2] - u[n - 1]) * inv_dx2;
}

}  // namespace

PdeField simulate_pde(const ModelParams& p, const std::vector<double>& w0,
                      const std::vector<double>& b0, double t_end,
                      double seed_amp, int k_seed, PdeScheme scheme, double dt,
                      double snap_dt) {
    const int nx = static_cast<int>(w0.size());
    if (nx < 4 || b0.size() != w0.size())
        throw std::invalid_argument("simulate_pde: bad initial profiles");
    PdeField f;
    f.nx = nx;
    f.l = p.l;
    f.x = pde_grid(nx, p.l);

    std::vector<double> w = w0, b = b0;
    for (int i = 0; i < nx; ++i) {
        const double seed = seed_amp * std::cos(k_seed * f.x[i] / p.l);
        w[i] += seed;
        b[i] += seed;
        if (!(w[i] > 0) || b[i] < 0)
            throw std::invalid_argument("simulate_pde: initial profile not positive");
    }

    const double dx = p.l * M_PI / nx;
    const double dmax = std::max(p.d1, p.d2);
    double step = dt;
    if (scheme == PdeScheme::ExplicitCfl && dmax > 0)
        step = std::min(dt, 0.4 * dx * dx / dmax);

    // blow-up guard derived from the a priori solution bounds
    double Mb = p.R / p.a;
    for (int i = 0; i < nx; ++i) Mb = std::max({Mb, w[i], b[i]});
    const double cap = 1e3 * Mb;

    const double inv_dx2 = 1.0 / (dx * dx);
    std::vector<double> fw(nx), fb(nx), lap(nx), cp(nx), dp(nx);

    auto snapshot = [&](double t) {
        f.t.push_back(t);
        f.w.push_back(w);
        f.b.push_back(b);
    };
    snapshot(0.0);
    double next_snap = snap_dt;

    double t = 0.0;
    while (t < t_end - 1e-12) {
        const double h = std::min(step, t_end - t);
        for (int i = 0; i < nx; ++i) {
            if (!(w[i] > 0) || w[i] > cap || b[i] > cap)
                throw std::runtime_error("simulate_pde: solution blow-up");
            fw[i] = p.R - p.a * w[i] - p.delta * w[i] * b[i];
            fb[i] = p.rho * b[i] * (1.0 - b[i] / w[i]) -
                    p.mu * b[i] / (1.0 + p.theta1 * b[i] + p.theta2 * w[i]);
        }
        if (scheme == PdeScheme::ExplicitCfl) {
            laplacian(w, inv_dx2, lap);
            for (int i = 0; i < nx; ++i) w[i] += h * (p.d1 * lap[i] + fw[i]);
            laplacian(b, inv_dx2, lap);
            for (int i = 0; i < nx; ++i) b[i] += h * (p.d2 * lap[i] + fb[i]);
        } else {
            for (int i = 0; i < nx; ++i) {
                w[i] += h * fw[i];
                b[i] += h * fb[i];
            }
            diffuse_implicit(w, p.d1 * h * inv_dx2, cp, dp);
            diffuse_implicit(b, p.d2 * h * inv_dx2, cp, dp);
        }
        for (int i = 0; i < nx; ++i) b[i] = std::max(b[i], 0.0);
        t += h;
        if (t >= next_snap - 1e-12 || t >= t_end - 1e-12) {
            snapshot(t);
            next_snap += snap_dt;
        }
    }
    return f;
}

PatternOutcome classify_pattern(const PdeField& field, double spatial_tol,
                                double temporal_tol) {
    PatternOutcome out;
    const size_t n = field.t.size();
    if (n < 10) return out;
    const double t_end = field.t.back();
    size_t i0 = n - 1;
    while (i0 > 0 && field.t[i0] > 0.8 * t_end) --i0;
    const size_t nw = n - i0;
    if (nw < 8) return out;

    const int k_max = std::min(field.nx / 2, 64);
    std::vector<double> avg_abs(k_max + 1, 0.0);
    for (size_t j = i0; j < n; ++j)
        for (int k = 0; k <= k_max; ++k)
            avg_abs[k] += std::abs(cosine_mode(field.b[j], field.x, field.l, k));
    for (double& v : avg_abs) v /= static_cast<double>(nw);

    int dom = 1;
    for (int k = 2; k <= k_max; ++k)
        if (avg_abs[k] > avg_abs[dom]) dom = k;
    const bool inhomog = avg_abs[dom] > spatial_tol * std::max(avg_abs[0], 1e-300);

    // temporal series: the mean for homogeneous states; for patterns track
    // whichever of mode 0 / dominant mode oscillates more
    auto series_of = [&](int k) {
        std::vector<double> s(nw);
        for (size_t j = 0; j < nw; ++j)
            s[j] = cosine_mode(field.b[i0 + j], field.x, field.l, k);
        return s;
    };
    auto osc_amp = [](const std::vector<double>& s) {
        const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
        return 0.5 * (*hi - *lo);
    };
    std::vector<double> series = series_of(0);
    if (inhomog) {
        std::vector<double> sd = series_of(dom);
        if (osc_amp(sd) > osc_amp(series)) series = std::move(sd);
    }
    const double amp = osc_amp(series);

    bool periodic = false;
    double period = 0.0;
    if (amp > temporal_tol) {
        double mean = 0.0;
        for (double v : series) mean += v;
        mean /= static_cast<double>(nw);
        std::vector<double> cross;
        for (size_t j = 1; j < nw; ++j)
            if (series[j - 1] < mean && series[j] >= mean) {
                const double frac = (mean - series[j - 1]) / (series[j] - series[j - 1]);
                const double t0 = field.t[i0 + j - 1];
                cross.push_back(t0 + frac * (field.t[i0 + j] - t0));
            }
        if (cross.size() >= 4) {
            std::vector<double> per;
            for (size_t j = cross.size() - 3; j < cross.size(); ++j)
                per.push_back(cross[j] - cross[j - 1]);
            double pm = (per[0] + per[1] + per[2]) / 3.0;
            periodic = true;
            for (double x : per)
                if (std::abs(x - pm) > 0.02 * pm) periodic = false;
            period = pm;
        }
    }

    out.dominant_mode = inhomog ? dom : 0;
    out.amplitude = inhomog ? avg_abs[dom] : 0.0;
    out.period = periodic ? period : 0.0;
    if (amp <= temporal_tol)
        out.kind = inhomog ? PatternKind::InhomogeneousSteady
                           : PatternKind::HomogeneousSteady;
    else if (periodic)
        out.kind = inhomog ? PatternKind::InhomogeneousPeriodic
                           : PatternKind::HomogeneousPeriodic;
    else
        out.kind = PatternKind::Unresolved;

    // antiphase correlation of the final profiles
    const auto& wf = field.w.back();
    const auto& bf = field.b.back();
    double mw = 0.0, mb = 0.0;
    for (int i = 0; i < field.nx; ++i) {
        mw += wf[i];
        mb += bf[i];
    }
    mw /= field.nx;
    mb /= field.nx;
    double sww = 0.0, sbb = 0.0, swb = 0.0;
    for (int i = 0; i < field.nx; ++i) {
        sww += (wf[i] - mw) * (wf[i] - mw);
        sbb += (bf[i] - mb) * (bf[i] - mb);
        swb += (wf[i] - mw) * (bf[i] - mb);
    }
    out.antiphase_corr = (sww > 1e-30 && sbb > 1e-30)
                             ? swb / std::sqrt(sww * sbb)
                             : 0.0;
    return out;
}

}  // namespace vegpat
