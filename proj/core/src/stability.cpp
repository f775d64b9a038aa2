#include "vegpat/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vegpat {

using cplx = std::complex<double>;

std::pair<cplx, cplx> Jacobian2::eigenvalues() const {
    const cplx disc = std::sqrt(cplx(trace() * trace() - 4.0 * det(), 0.0));
    return {0.5 * (trace() + disc), 0.5 * (trace() - disc)};
}

Jacobian2 jacobian(const ModelParams& p, const State& eq) {
    const double w = eq.w, b = eq.b;
    const double Q = 1.0 + p.theta1 * b + p.theta2 * w;
    Jacobian2 j;
    j.a11 = -p.a - p.delta * b;
    j.a12 = -p.delta * w;
    j.a21 = p.rho * b * b / (w * w) + p.mu * p.theta2 * b / (Q * Q);
    j.a22 = p.mu * p.theta1 * b / (Q * Q) - p.rho * b / w;
    return j;
}

namespace {

// Trace factorization Tr(J) = -P(R,b)*T(R,b) with P > 0 and
// T(R,b) = theta2*R^2 + K1*R + K0.
struct TraceFactors {
    double K0, K1, T, P;
};

TraceFactors trace_factors(const ModelParams& p, double b) {
    const double R = p.R, a = p.a, d = p.delta, rho = p.rho;
    const double t1 = p.theta1, t2 = p.theta2;
    TraceFactors tf;
    tf.K1 = d * t1 * b * b + (a * t1 + d + rho * t2 - rho * t1) * b + a;
    tf.K0 = rho * b * (a + d * b) * (1.0 + 2.0 * t1 * b);
    tf.T = t2 * R * R + tf.K1 * R + tf.K0;
    const double w = R / (a + d * b);
    tf.P = (a + d * b) / (R * ((1.0 + t1 * b) * (a + d * b) + t2 * R));
    (void)w;
    return tf;
}

}  // namespace

StabilityVerdict stability_verdict(const ModelParams& p, const State& eq) {
    const Jacobian2 j = jacobian(p, eq);
    const TraceFactors tf = trace_factors(p, eq.b);
    StabilityVerdict v;
    v.K0 = tf.K0;
    v.K1 = tf.K1;
    v.T = tf.T;
    v.P = tf.P;

    if (j.det() < 0) {
        v.kind = StabilityKind::Saddle;
        return v;
    }
    if (j.trace() < 0) {
        v.kind = StabilityKind::Stable;
        if (tf.K1 >= 0.0) {
            v.condition = TraceCondition::H1;
        } else if (p.theta2 > 0.0) {
            const double R_min = -tf.K1 / (2.0 * p.theta2);
            const double T_min = p.theta2 * R_min * R_min + tf.K1 * R_min + tf.K0;
            if (std::abs(T_min) < 1e-12) {
                v.kind = StabilityKind::Degenerate;
                v.condition = TraceCondition::None;
            } else if (T_min > 0.0) {
                v.condition = TraceCondition::H2;
            } else {
                v.condition = TraceCondition::H3;
            }
        }
    } else {
        v.kind = StabilityKind::UnstableFocusOrNode;
    }
    return v;
}

BareSoilStability bare_soil_stability(const ModelParams& p) {
    BareSoilStability s;
    s.lambda1 = -p.a;
    s.lambda2 = p.rho - p.mu * p.a / (p.a + p.theta2 * p.R);
    if (p.mu_exceeds_rho() && p.theta2 > 0) {
        s.R_star = p.a * (p.mu - p.rho) / (p.rho * p.theta2);
        s.stable = p.R < s.R_star;
    } else {
        // mortality never exceeds growth at any rainfall: threshold at infinity
        s.R_star = p.mu_exceeds_rho() ? std::numeric_limits<double>::infinity()
                                      : 0.0;
        s.stable = s.lambda2 < 0;
    }
    return s;
}

namespace {

// Follow the equilibrium branch (ascending-b index `branch`) across an R
// grid, selecting by continuity when the root count changes.
double branch_b(ModelParams& p, double R, int branch, double b_prev) {
    p.R = R;
    const auto eqs = find_positive_equilibria(p);
    if (eqs.empty())
        throw ConvergenceError("hopf_points: branch lost (no positive equilibria)", R, b_prev);
    double b;
    if (b_prev < 0) {
        b = eqs[std::min<size_t>(branch, eqs.size() - 1)].b;
    } else {
        b = eqs[0].b;
        double best = std::abs(b - b_prev);
        for (const auto& e : eqs) {
            const double d = std::abs(e.b - b_prev);
            if (d < best) { best = d; b = e.b; }
        }
        if (best > 0.5 * std::max(1.0, b_prev))
            throw ConvergenceError("hopf_points: branch jump detected", R, b);
    }
    return b;
}

}  // namespace

std::vector<HopfPoint> hopf_points(ModelParams p, double R_lo, double R_hi,
                                   int branch, int n_scan) {
    std::vector<HopfPoint> out;
    double b_prev = -1.0;
    double R_prev = R_lo;
    double b0 = branch_b(p, R_lo, branch, -1.0);
    b_prev = b0;
    double T_prev = trace_factors(p, b0).T;

    for (int i = 1; i <= n_scan; ++i) {
        const double R = R_lo + (R_hi - R_lo) * i / n_scan;
        const double b = branch_b(p, R, branch, b_prev);
        const double T = trace_factors(p, b).T;
        if ((T_prev <= 0) != (T <= 0)) {
            // bisection on T along the branch
            double lo = R_prev, hi = R, blo = b_prev;
            double Tlo = T_prev;
            for (int it = 0; it < 100 && hi - lo > 1e-14; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double bm = branch_b(p, mid, branch, blo);
                const double Tm = trace_factors(p, bm).T;
                if ((Tlo <= 0) == (Tm <= 0)) { lo = mid; blo = bm; Tlo = Tm; }
                else hi = mid;
            }
            HopfPoint hp;
            hp.R = 0.5 * (lo + hi);
            hp.b_star = branch_b(p, hp.R, branch, blo);
            hp.w_star = hp.R / (p.a + p.delta * hp.b_star);
            p.R = hp.R;
            const Jacobian2 j = jacobian(p, {hp.w_star, hp.b_star});
            if (j.det() <= 0) { T_prev = T; R_prev = R; b_prev = b; continue; }
            hp.omega0 = std::sqrt(j.det());
            // transversality by finite differences of Tr along the branch
            const double h = std::max(1e-7, 1e-7 * hp.R);
            double bl = branch_b(p, hp.R - h, branch, hp.b_star);
            p.R = hp.R - h;
            const double trl = jacobian(p, {p.R / (p.a + p.delta * bl), bl}).trace();
            double br = branch_b(p, hp.R + h, branch, hp.b_star);
            p.R = hp.R + h;
            const double trr = jacobian(p, {p.R / (p.a + p.delta * br), br}).trace();
            hp.transversality_sign = (trr > trl) - (trr < trl);
            p.R = hp.R;
            hp.lyapunov = first_lyapunov_sign(p, hp);
            out.push_back(hp);
        }
        T_prev = T;
        R_prev = R;
        b_prev = b;
    }
    return out;
}

double first_lyapunov_coefficient(const ModelParams& p, const State& eq) {
    const Jacobian2 j = jacobian(p, eq);
    const double om = std::sqrt(j.det());
    const DerivTensor dt = deriv_tensor(p, eq, 1e-6);

    // complex eigenvector Jq = i*om*q and adjoint J^T pvec = -i*om*pvec
    const cplx iom(0.0, om);
    const cplx q1 = j.a12, q2 = iom - j.a11;
    cplx p1 = j.a21, p2 = -iom - j.a11;
    const cplx ip = std::conj(p1) * q1 + std::conj(p2) * q2;
    p1 /= std::conj(ip);
    p2 /= std::conj(ip);

    const double fwb = dt.g2(1, 1);
    const double gww = dt.g2(2, 2), gwb = dt.g2(2, 1), gbb = dt.g2(2, 0);
    const double gwww = dt.g3(2, 3), gwwb = dt.g3(2, 2), gwbb = dt.g3(2, 1), gbbb = dt.g3(2, 0);

    auto B = [&](cplx x1, cplx x2, cplx y1, cplx y2) -> std::pair<cplx, cplx> {
        const cplx mixed = x1 * y2 + x2 * y1;
        return {fwb * mixed, gww * x1 * y1 + gwb * mixed + gbb * x2 * y2};
    };
    auto C3v = [&](cplx x1, cplx x2, cplx y1, cplx y2, cplx z1, cplx z2) -> std::pair<cplx, cplx> {
        const cplx c2 = gwww * x1 * y1 * z1 +
                        gwwb * (x1 * y1 * z2 + x1 * y2 * z1 + x2 * y1 * z1) +
                        gwbb * (x1 * y2 * z2 + x2 * y1 * z2 + x2 * y2 * z1) +
                        gbbb * x2 * y2 * z2;
        return {0.0, c2};
    };

    auto proj = [&](std::pair<cplx, cplx> v) {
        return std::conj(p1) * v.first + std::conj(p2) * v.second;
    };
    const cplx g20 = proj(B(q1, q2, q1, q2));
    const cplx g11 = proj(B(q1, q2, std::conj(q1), std::conj(q2)));
    const cplx g21 = proj(C3v(q1, q2, q1, q2, std::conj(q1), std::conj(q2)));

    return (cplx(0.0, 1.0) * g20 * g11 + om * g21).real() / (2.0 * om * om);
}

LyapunovSign first_lyapunov_sign(const ModelParams& p, const HopfPoint& hp) {
    ModelParams q = p;
    q.R = hp.R;
    const double l1 = first_lyapunov_coefficient(q, {hp.w_star, hp.b_star});
    if (std::abs(l1) < 1e-8) return LyapunovSign::Degenerate;
    return l1 < 0 ? LyapunovSign::Super : LyapunovSign::Sub;
}

}  // namespace vegpat
