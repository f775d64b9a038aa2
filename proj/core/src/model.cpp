#include "vegpat/model.hpp"

#include <cmath>
#include <string>

namespace vegpat {

void ModelParams::validate() const {
    auto req = [](bool ok, const char* msg) {
        if (!ok) throw std::invalid_argument(std::string("ModelParams: ") + msg);
    };
    req(R > 0, "R must be > 0");
    req(a > 0, "a must be > 0");
    req(delta > 0, "delta must be > 0");
    req(rho > 0, "rho must be > 0");
    req(mu > 0, "mu must be > 0");
    req(theta1 >= 0, "theta1 must be >= 0");
    req(theta2 >= 0, "theta2 must be >= 0");
    req(d1 >= 0, "d1 must be >= 0");
    req(d2 >= 0, "d2 must be >= 0");
    req(l > 0, "l must be > 0");
}

Rates kinetics(const ModelParams& p, const State& s) {
    if (!(s.w > 0))
        throw std::domain_error("kinetics: w must be strictly positive");
    const double f = p.R - p.a * s.w - p.delta * s.w * s.b;
    const double g = p.rho * s.b * (1.0 - s.b / s.w) -
                     p.mu * s.b / (1.0 + p.theta1 * s.b + p.theta2 * s.w);
    return {f, g};
}

double mortality(const ModelParams& p, const State& s) {
    const double q = 1.0 + p.theta1 * s.b + p.theta2 * s.w;
    if (!(q > 0))
        throw std::domain_error("mortality: 1 + theta1*b + theta2*w must be positive");
    return p.mu / q;
}

DerivTensor deriv_tensor(const ModelParams& p, const State& eq, double residual_tol) {
    const Rates r = kinetics(p, eq);
    if (std::abs(r.f) > residual_tol || std::abs(r.g) > residual_tol)
        throw std::invalid_argument("deriv_tensor: state is not an equilibrium (residual " +
                                    std::to_string(std::max(std::abs(r.f), std::abs(r.g))) + ")");

    const double w = eq.w, b = eq.b;
    const double Q = 1.0 + p.theta1 * b + p.theta2 * w;
    const double Q2 = Q * Q, Q3 = Q2 * Q, Q4 = Q3 * Q;
    const double t1 = p.theta1, t2 = p.theta2;

    DerivTensor t{};
    // water equation: linear + the single bilinear term -delta*w*b
    t.A[0][0] = -p.a - p.delta * b;  // A11
    t.A[0][1] = -p.delta * w;        // A12
    t.A[0][3] = -p.delta;            // A14
    // biomass equation
    t.A[1][0] = p.rho * b * b / (w * w) + p.mu * t2 * b / Q2;            // A21
    t.A[1][1] = p.mu * t1 * b / Q2 - p.rho * b / w;                      // A22 (at equilibrium)
    t.A[1][2] = -p.rho * b * b / (w * w * w) - p.mu * t2 * t2 * b / Q3;  // A23
    t.A[1][3] = 2.0 * p.rho * b / (w * w) + p.mu * t2 / Q2 - 2.0 * p.mu * t1 * t2 * b / Q3;  // A24
    t.A[1][4] = -p.rho / w + p.mu * t1 / Q2 - p.mu * t1 * t1 * b / Q3;   // A25
    t.A[1][5] = p.rho * b * b / (w * w * w * w) + p.mu * t2 * t2 * t2 * b / Q4;  // A26
    t.A[1][6] = -2.0 * p.rho * b / (w * w * w) - p.mu * t2 * t2 / Q3 +
                3.0 * p.mu * t1 * t2 * t2 * b / Q4;                      // A27
    t.A[1][7] = p.rho / (w * w) - 2.0 * p.mu * t1 * t2 / Q3 +
                3.0 * p.mu * t1 * t1 * t2 * b / Q4;                      // A28
    t.A[1][8] = -p.mu * t1 * t1 * (1.0 + t2 * w) / Q4;                   // A29

    // Raw partials: for f only f_wb = -delta is nonzero beyond first order;
    // for g the Taylor coefficients above carry the combinatorial factors
    // 1/2 (quadratic) and 1/6 or 1/2 (cubic), so multiply back.
    t.G[0] = {0.0, -p.delta, 0.0, 0.0, 0.0, 0.0, 0.0};
    t.G[1] = {2.0 * t.A[1][2], t.A[1][3], 2.0 * t.A[1][4],
              6.0 * t.A[1][5], 2.0 * t.A[1][6], 2.0 * t.A[1][7], 6.0 * t.A[1][8]};
    return t;
}

EquilibriumShift equilibrium_shift(const ModelParams& p, const State& eq) {
    const double w = eq.w, b = eq.b;
    const double R = p.R, a = p.a, d = p.delta, rho = p.rho, mu = p.mu;
    const double t1 = p.theta1, t2 = p.theta2;
    (void)w;

    const double M = 4.0 * b * b * b * rho * d * d * t1 +
                     rho * (6.0 * a * d * t1 + 3.0 * d * d) * b * b +
                     rho * ((-2.0 * R * t1 + 2.0 * R * t2 + 4.0 * a) * d + 2.0 * a * a * t1) * b -
                     rho * R * d - a * rho * (-a + R * (t1 - t2)) + R * d * mu;
    if (std::abs(M) < 1e-10)
        throw std::domain_error("equilibrium_shift: degenerate equilibrium (fold point, M ~ 0)");

    const double num = rho * d * (t1 - t2) * b * b + rho * (d + (t1 - t2) * a) * b +
                       2.0 * rho * R * t2 + a * rho - mu * (b * d + a);
    const double b_tilde = num / M;
    const double ab = a + d * b;
    const double w_tilde = (ab - d * R * b_tilde) / (ab * ab);
    return {w_tilde, b_tilde, M};
}

}  // namespace vegpat
