#include "vegpat/normal_form.hpp"

#include <cmath>

#include "vegpat/stability.hpp"

namespace vegpat {

namespace {

using cplx = std::complex<double>;

cplx dot(const cvec2& x, const cvec2& y) { return x[0] * y[0] + x[1] * y[1]; }

cvec2 conj2(const cvec2& x) { return {std::conj(x[0]), std::conj(x[1])}; }

cvec2 matvec(const cmat2& m, const cvec2& x) {
    return {m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]};
}

cvec2 add(const cvec2& x, const cvec2& y) { return {x[0] + y[0], x[1] + y[1]}; }

cvec2 scale(cplx c, const cvec2& x) { return {c * x[0], c * x[1]}; }

/// Solve the 2x2 complex system m*x = rhs by Cramer's rule.
cvec2 solve2(const cmat2& m, const cvec2& rhs) {
    const cplx det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (std::abs(det) < 1e-12)
        throw std::domain_error("normal_form: singular resolvent matrix");
    return {(rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det,
            (m[0][0] * rhs[1] - rhs[0] * m[1][0]) / det};
}

double residual(const cmat2& m, const cvec2& x, const cvec2& rhs) {
    const cvec2 mx = matvec(m, x);
    return std::max(std::abs(mx[0] - rhs[0]), std::abs(mx[1] - rhs[1]));
}

cmat2 shift_diag(cplx s0, cplx s1, const cmat2& L) {
    // diag(s0, s1) - L
    return {{{s0 - L[0][0], -L[0][1]}, {-L[1][0], s1 - L[1][1]}}};
}

}  // namespace

SpectralData spectral(const ModelParams& p, const THPoint& th) {
    ModelParams q = p;
    q.R = th.R_star;
    q.d1 = th.d1_star;
    const Jacobian2 j = jacobian(q, th.equilibrium);
    const double om = std::sqrt(j.det());

    SpectralData s;
    s.omega0 = om;
    const cplx iom(0.0, om);
    const double lam_k = th.d1_star * th.k_star * th.k_star / (q.l * q.l);

    s.p0 = {1.0, (iom - j.a11) / j.a12};
    const cplx den0 = j.a21 * j.a12 + (iom - j.a11) * (iom - j.a11);
    if (std::abs(den0) < 1e-12)
        throw std::domain_error("spectral: Hopf normalizer singular");
    s.D1n = j.a21 * j.a12 / den0;
    s.q0 = {s.D1n, s.D1n * (iom - j.a11) / j.a21};

    s.pk = {1.0, (lam_k - j.a11) / j.a12};
    const double denk = j.a21 * j.a12 + (lam_k - j.a11) * (lam_k - j.a11);
    if (std::abs(denk) < 1e-12)
        throw std::domain_error("spectral: Turing normalizer singular");
    s.D2n = j.a21 * j.a12 / denk;
    s.qk = {s.D2n, s.D2n * (lam_k - j.a11) / j.a21};
    return s;
}

NFCoeffs nf_coeffs(const ModelParams& p, const THPoint& th) {
    ModelParams q = p;
    q.R = th.R_star;
    q.d1 = th.d1_star;
    const State eq = th.equilibrium;
    const Jacobian2 jac = jacobian(q, eq);
    const DerivTensor dt = deriv_tensor(q, eq, 1e-6);
    const EquilibriumShift sh = equilibrium_shift(q, eq);

    NFCoeffs nf;
    nf.sd = spectral(p, th);
    const double om = nf.sd.omega0;
    const cplx iom(0.0, om);
    const double lpi = q.l * M_PI;
    const double k2l2 = static_cast<double>(th.k_star) * th.k_star / (q.l * q.l);

    const cmat2 L0 = {{{jac.a11, jac.a12}, {jac.a21, jac.a22}}};

    // raw second/third partials as 2-vectors (f component, g component)
    const cvec2 G20 = {dt.g2(1, 2), dt.g2(2, 2)};
    const cvec2 G11 = {dt.g2(1, 1), dt.g2(2, 1)};
    const cvec2 G02 = {dt.g2(1, 0), dt.g2(2, 0)};
    const cvec2 G30 = {dt.g3(1, 3), dt.g3(2, 3)};
    const cvec2 G21 = {dt.g3(1, 2), dt.g3(2, 2)};
    const cvec2 G12 = {dt.g3(1, 1), dt.g3(2, 1)};
    const cvec2 G03 = {dt.g3(1, 0), dt.g3(2, 0)};

    // parameter derivative of the linearization along the branch
    const double A23 = dt.a(2, 3), A24 = dt.a(2, 4), A25 = dt.a(2, 5);
    const cmat2 L110 = {{{-q.delta * sh.b_tilde, -q.delta * sh.w_tilde},
                         {2.0 * sh.w_tilde * A23 + sh.b_tilde * A24,
                          sh.w_tilde * A24 + 2.0 * sh.b_tilde * A25}}};

    const cplx p02 = nf.sd.p0[1];
    const cplx pk2 = nf.sd.pk[1];
    const cvec2& q0 = nf.sd.q0;
    const cvec2& qk = nf.sd.qk;
    const cvec2 q0b = conj2(q0);
    const cvec2& p0 = nf.sd.p0;
    const cvec2 p0b = conj2(p0);
    const cvec2& pk = nf.sd.pk;

    auto quad = [&](cplx u, cplx v) {
        // second-differential vector G20 + (u+v)G11 + uv*G02 with the
        // symmetric combinatorial weights folded in by the caller
        return add(add(G20, scale(u + v, G11)), scale(u * v, G02));
    };
    nf.A200 = quad(p02, p02);
    nf.A020 = conj2(nf.A200);
    nf.A002 = quad(pk2, pk2);
    nf.A110 = scale(2.0, quad(p02, std::conj(p02)));
    nf.A101 = scale(2.0, quad(p02, pk2));
    nf.A011 = conj2(nf.A101);

    auto cubic = [&](cplx s1, cplx s2, cplx s3) {
        // G30 + (sum) G21 + (pair sum) G12 + (product) G03 for arguments
        // with second components s1, s2, s3 (first components all 1)
        return add(add(G30, scale(s1 + s2 + s3, G21)),
                   add(scale(s1 * s2 + s1 * s3 + s2 * s3, G12),
                       scale(s1 * s2 * s3, G03)));
    };
    nf.A210 = scale(3.0, cubic(p02, p02, std::conj(p02)));
    nf.A102 = scale(3.0, cubic(p02, pk2, pk2));
    nf.A111 = scale(6.0, cubic(p02, std::conj(p02), pk2));
    nf.A003 = cubic(pk2, pk2, pk2);

    nf.C210 = dot(q0, nf.A210) / (6.0 * lpi);
    nf.C102 = dot(q0, nf.A102) / (6.0 * lpi);
    nf.C111 = dot(qk, nf.A111) / (6.0 * lpi);
    nf.C003 = dot(qk, nf.A003) / (6.0 * lpi);

    const cvec2 qkb = conj2(qk);
    nf.D210 = (-dot(q0, nf.A200) * dot(q0, nf.A110) +
               dot(q0, nf.A110) * dot(q0b, nf.A110) +
               (2.0 / 3.0) * dot(q0, nf.A020) * dot(q0b, nf.A200)) /
              (6.0 * lpi * iom);
    nf.D102 = (-2.0 * dot(q0, nf.A200) * dot(q0, nf.A002) +
               dot(q0, nf.A110) * dot(q0b, nf.A002) +
               2.0 * dot(q0, nf.A002) * dot(qkb, nf.A101)) /
              (6.0 * lpi * iom);
    nf.D111 = (dot(qk, nf.A011) * dot(q0b, nf.A110) -
               dot(qk, nf.A101) * dot(q0, nf.A110)) /
              (6.0 * lpi * iom);
    nf.D003 = (dot(qk, nf.A011) * dot(q0b, nf.A002) -
               dot(qk, nf.A101) * dot(q0, nf.A002)) /
              (6.0 * lpi * iom);

    // resolvent solves; each residual is accumulated for the audit trail
    const cmat2 mL0 = shift_diag(0.0, 0.0, L0);  // -L0
    const cmat2 R2iom = shift_diag(2.0 * iom, 2.0 * iom, L0);
    const cmat2 Rk_p = shift_diag(iom + k2l2 * q.d1, iom + k2l2 * q.d2, L0);
    const cmat2 Rk_m = shift_diag(-iom + k2l2 * q.d1, -iom + k2l2 * q.d2, L0);
    const double k2l2x4 = 4.0 * k2l2;
    const cmat2 R2k = shift_diag(k2l2x4 * q.d1, k2l2x4 * q.d2, L0);

    auto track = [&](const cmat2& m, const cvec2& rhs) {
        const cvec2 x = solve2(m, rhs);
        nf.h_residual_max = std::max(nf.h_residual_max, residual(m, x, rhs));
        return x;
    };

    const cvec2 s110 = track(mL0, nf.A110);  // = -L0^{-1} A110 with sign below
    nf.h00110 = scale(1.0 / lpi,
                      add(s110, scale(1.0 / iom,
                                      add(scale(dot(q0, nf.A110), p0),
                                          scale(dot(q0b, nf.A110) / 3.0, p0b)))));
    const cvec2 s200 = track(R2iom, nf.A200);
    nf.h00200 = scale(1.0 / lpi,
                      add(s200, scale(-1.0 / iom,
                                      add(scale(dot(q0, nf.A200), p0),
                                          scale(dot(q0b, nf.A200) / 3.0, p0b)))));
    const cvec2 s002 = track(mL0, nf.A002);
    nf.h00002 = add(scale(1.0 / lpi, s002),
                    scale(1.0 / (iom * lpi),
                          add(scale(dot(q0, nf.A002), p0),
                              scale(-dot(q0b, nf.A002), p0b))));
    const cvec2 sk101 = track(Rk_p, nf.A101);
    nf.hk0101 = add(scale(1.0 / lpi, sk101),
                    scale(-dot(qk, nf.A101) / (iom * lpi), pk));
    const cvec2 sk011 = track(Rk_m, nf.A011);
    nf.h0k011 = add(scale(1.0 / lpi, sk011),
                    scale(dot(qk, nf.A011) / (iom * lpi), pk));
    const cvec2 s2k = track(R2k, nf.A002);
    nf.hkk002 = add(scale(1.0 / (2.0 * lpi), s2k), nf.h00002);

    const double A14 = dt.a(1, 4);
    auto Syz = [&](cplx pp) -> cmat2 {
        return {{{A14 * pp, A14},
                 {2.0 * A23 + A24 * pp, A24 + 2.0 * A25 * pp}}};
    };
    nf.Syz1 = Syz(p02);
    nf.Syz2 = Syz(std::conj(p02));
    nf.Syz3 = Syz(pk2);

    nf.E210 = dot(q0, add(matvec(nf.Syz1, nf.h00110), matvec(nf.Syz2, nf.h00200))) / 6.0;
    nf.E102 = dot(q0, add(matvec(nf.Syz1, nf.h00002), matvec(nf.Syz3, nf.hk0101))) / 6.0;
    nf.E111 = dot(qk, add(add(matvec(nf.Syz1, nf.h0k011), matvec(nf.Syz2, nf.hk0101)),
                          matvec(nf.Syz3, nf.h00110))) / 6.0;
    nf.E003 = dot(qk, matvec(nf.Syz3, nf.hkk002)) / 6.0;

    nf.B210 = nf.C210 + 1.5 * (nf.D210 + nf.E210);
    nf.B102 = nf.C102 + 1.5 * (nf.D102 + nf.E102);
    const cplx B111c = nf.C111 + 1.5 * (nf.D111 + nf.E111);
    const cplx B003c = nf.C003 + 1.5 * (nf.D003 + nf.E003);

    nf.B11 = dot(q0, matvec(L110, p0));
    nf.B21 = 0.0;
    const cplx B13c = dot(qk, matvec(L110, pk));
    const cplx B23c = -k2l2 * qk[0];

    if (std::abs(B13c.imag()) > 1e-8 || std::abs(B23c.imag()) > 1e-8 ||
        std::abs(B003c.imag()) > 1e-8)
        throw std::domain_error("nf_coeffs: Turing-component coefficient not real");
    // B111 carries a small imaginary residue from the mixed h solves; it is
    // recorded but only a gross violation is treated as an error.
    if (std::abs(B111c.imag()) > 1e-2)
        throw std::domain_error("nf_coeffs: B111 imaginary part too large");

    nf.B13 = B13c.real();
    nf.B23 = B23c.real();
    nf.B111 = B111c.real();
    nf.B111_im = B111c.imag();
    nf.B003 = B003c.real();
    return nf;
}

AmplitudeSystem amplitude_system(const NFCoeffs& nf) {
    if (std::abs(nf.B210.real()) < 1e-10 || std::abs(nf.B003) < 1e-10)
        throw std::domain_error("amplitude_system: degenerate cubic coefficient");
    AmplitudeSystem a;
    a.nu1_e1 = nf.B11.real();
    a.nu1_e2 = nf.B21.real();
    a.nu2_e1 = nf.B13;
    a.nu2_e2 = nf.B23;
    a.kappa11 = nf.B210.real() > 0 ? 1 : -1;
    a.kappa22 = nf.B003 > 0 ? 1 : -1;
    a.kappa12 = nf.B102.real() / std::abs(nf.B003);
    a.kappa21 = nf.B111 / std::abs(nf.B210.real());
    return a;
}

namespace {

bool planar_stable(const AmplitudeSystem& a, double nu1, double nu2,
                   double rho, double s) {
    const double r2 = rho * rho, s2 = s * s;
    const double j11 = nu1 + 3.0 * a.kappa11 * r2 + a.kappa12 * s2;
    const double j12 = 2.0 * a.kappa12 * rho * s;
    const double j21 = 2.0 * a.kappa21 * rho * s;
    const double j22 = nu2 + a.kappa21 * r2 + 3.0 * a.kappa22 * s2;
    const double tr = j11 + j22;
    const double det = j11 * j22 - j12 * j21;
    return tr < 0 && det > 0;
}

}  // namespace

std::vector<AmplitudeEquilibrium> amplitude_equilibria(
    const AmplitudeSystem& a, double eps1, double eps2) {
    const double nu1 = a.nu1_e1 * eps1 + a.nu1_e2 * eps2;
    const double nu2 = a.nu2_e1 * eps1 + a.nu2_e2 * eps2;
    std::vector<AmplitudeEquilibrium> out;

    out.push_back({AmpEqName::A0, 0.0, 0.0, planar_stable(a, nu1, nu2, 0.0, 0.0)});

    const double r2_1 = -nu1 / a.kappa11;
    if (r2_1 > 0) {
        const double r = std::sqrt(r2_1);
        out.push_back({AmpEqName::A1, r, 0.0, planar_stable(a, nu1, nu2, r, 0.0)});
    }
    const double s2_2 = -nu2 / a.kappa22;
    if (s2_2 > 0) {
        const double s = std::sqrt(s2_2);
        const bool st = planar_stable(a, nu1, nu2, 0.0, s);
        out.push_back({AmpEqName::A2p, 0.0, s, st});
        out.push_back({AmpEqName::A2m, 0.0, -s, st});
    }
    // mixed mode: kappa11*r2 + kappa12*s2 = -nu1, kappa21*r2 + kappa22*s2 = -nu2
    const double det = a.kappa11 * a.kappa22 - a.kappa12 * a.kappa21;
    if (std::abs(det) > 1e-14) {
        const double r2 = (a.kappa12 * nu2 - a.kappa22 * nu1) / det;
        const double s2 = (a.kappa21 * nu1 - a.kappa11 * nu2) / det;
        if (r2 > 0 && s2 > 0) {
            const double r = std::sqrt(r2), s = std::sqrt(s2);
            const bool st = planar_stable(a, nu1, nu2, r, s);
            out.push_back({AmpEqName::A3p, r, s, st});
            out.push_back({AmpEqName::A3m, r, -s, st});
        }
    }
    return out;
}

CriticalLines critical_lines(const AmplitudeSystem& a) {
    CriticalLines c;
    c.T_slope = -a.nu2_e1 / a.nu2_e2;
    const double det = a.kappa11 * a.kappa22 - a.kappa12 * a.kappa21;
    c.a3_rho2_e1 = (a.kappa12 * a.nu2_e1 - a.kappa22 * a.nu1_e1) / det;
    c.a3_rho2_e2 = a.kappa12 * a.nu2_e2 / det;
    c.a3_s2_e1 = (a.kappa21 * a.nu1_e1 - a.kappa11 * a.nu2_e1) / det;
    c.a3_s2_e2 = -a.kappa11 * a.nu2_e2 / det;
    c.T1_slope = -c.a3_rho2_e1 / c.a3_rho2_e2;
    c.T2_slope = -c.a3_s2_e1 / c.a3_s2_e2;
    return c;
}

PdeInterpretation pde_interpretation(AmpEqName name) {
    switch (name) {
        case AmpEqName::A0: return PdeInterpretation::HomogeneousSteady;
        case AmpEqName::A1: return PdeInterpretation::HomogeneousPeriodic;
        case AmpEqName::A2p:
        case AmpEqName::A2m: return PdeInterpretation::InhomogeneousSteady;
        default: return PdeInterpretation::InhomogeneousPeriodic;
    }
}

NFRegion classify_epsilon(const AmplitudeSystem& a, double eps1, double eps2) {
    const double nu1 = a.nu1_e1 * eps1 + a.nu1_e2 * eps2;
    const double nu2 = a.nu2_e1 * eps1 + a.nu2_e2 * eps2;
    const CriticalLines cl = critical_lines(a);
    const double r2m = cl.a3_rho2_e1 * eps1 + cl.a3_rho2_e2 * eps2;
    const double s2m = cl.a3_s2_e1 * eps1 + cl.a3_s2_e2 * eps2;
    for (double v : {nu1, nu2, r2m, s2m})
        if (std::abs(v) < 1e-10)
            throw std::domain_error("classify_epsilon: point lies on a critical line");

    NFRegion reg;
    reg.equilibria = amplitude_equilibria(a, eps1, eps2);

    bool hasA1 = false, hasA2 = false, hasA3 = false;
    bool sA0 = false, sA1 = false, sA2 = false, sA3 = false;
    for (const auto& e : reg.equilibria) {
        switch (e.name) {
            case AmpEqName::A0: sA0 = e.stable; break;
            case AmpEqName::A1: hasA1 = true; sA1 = e.stable; break;
            case AmpEqName::A2p: hasA2 = true; sA2 = e.stable; break;
            case AmpEqName::A3p: hasA3 = true; sA3 = e.stable; break;
            default: break;
        }
    }

    if (sA0 && !hasA1 && !hasA2 && !hasA3) reg.region = 1;
    else if (!sA0 && !hasA1 && hasA2 && sA2 && !hasA3) reg.region = 2;
    else if (!sA0 && hasA1 && !sA1 && hasA2 && sA2 && !hasA3) reg.region = 3;
    else if (!sA0 && hasA1 && sA1 && hasA2 && sA2 && hasA3 && !sA3) reg.region = 4;
    else if (!sA0 && hasA1 && sA1 && hasA2 && !sA2 && !hasA3) reg.region = 5;
    else if (!sA0 && hasA1 && sA1 && !hasA2 && !hasA3) reg.region = 6;
    else
        throw std::domain_error("classify_epsilon: signature matches no region ledger row");
    return reg;
}

}  // namespace vegpat
