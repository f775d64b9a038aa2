#ifndef VEGPAT_NORMAL_FORM_HPP
#define VEGPAT_NORMAL_FORM_HPP

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "vegpat/model.hpp"
#include "vegpat/turing.hpp"

namespace vegpat {

using cvec2 = std::array<std::complex<double>, 2>;
using cmat2 = std::array<std::array<std::complex<double>, 2>, 2>;

/// Eigenstructure at the Turing-Hopf point: the Hopf pair at mode 0 and the
/// zero eigenvalue at mode k*, with bilinear (non-conjugating) normalizers.
struct SpectralData {
    double omega0 = 0.0;
    cvec2 p0, q0;    // M0(i*omega0) null column / row, q0.p0 = 1
    cvec2 pk, qk;    // M_{k*}(0) null column / row (real), qk.pk = 1
    std::complex<double> D1n;  // q0 normalizer
    double D2n = 0.0;          // qk normalizer
};

SpectralData spectral(const ModelParams& p, const THPoint& th);

/// Third-order normal form coefficients with all intermediates kept for
/// audit: multilinear tensors A_ijk, resolvent solutions h, the S_yz
/// matrices and the C/D/E decomposition of each cubic B coefficient.
struct NFCoeffs {
    SpectralData sd;

    std::complex<double> B11;  // linear eps1 coefficient, Hopf component
    std::complex<double> B21;  // identically zero
    double B13 = 0.0, B23 = 0.0;  // linear coefficients, Turing component
    std::complex<double> B210, B102;
    double B111 = 0.0, B003 = 0.0;
    double B111_im = 0.0;  // residual imaginary part, diagnostic

    cvec2 A200, A020, A002, A110, A101, A011, A210, A102, A111, A003;
    cvec2 h00110, h00200, h00002, hk0101, h0k011, hkk002;
    cmat2 Syz1, Syz2, Syz3;
    std::complex<double> C210, C102, C111, C003;
    std::complex<double> D210, D102, D111, D003;
    std::complex<double> E210, E102, E111, E003;
    double h_residual_max = 0.0;  // largest resolvent back-substitution error
};

NFCoeffs nf_coeffs(const ModelParams& p, const THPoint& th);

/// Planar amplitude system after rescaling:
///   rho' = nu1*rho + kappa11*rho^3 + kappa12*rho*s^2
///   s'   = nu2*s + kappa21*rho^2*s + kappa22*s^3
/// with nu1 = Re(B11)*eps1, nu2 = B13*eps1 + B23*eps2 and kappa11, kappa22
/// reduced to signs.
struct AmplitudeSystem {
    double nu1_e1 = 0.0, nu1_e2 = 0.0;
    double nu2_e1 = 0.0, nu2_e2 = 0.0;
    int kappa11 = 0, kappa22 = 0;
    double kappa12 = 0.0, kappa21 = 0.0;
};

AmplitudeSystem amplitude_system(const NFCoeffs& nf);

enum class AmpEqName { A0, A1, A2p, A2m, A3p, A3m };

struct AmplitudeEquilibrium {
    AmpEqName name = AmpEqName::A0;
    double rho = 0.0, s = 0.0;
    bool stable = false;
};

std::vector<AmplitudeEquilibrium> amplitude_equilibria(
    const AmplitudeSystem& asys, double eps1, double eps2);

/// Slopes of the critical lines through the origin in the (eps1, eps2)
/// plane and the linear maps giving the mixed-mode squared amplitudes.
struct CriticalLines {
    double T_slope = 0.0;   // nu2 = 0
    double T1_slope = 0.0;  // mixed-mode rho^2 = 0
    double T2_slope = 0.0;  // mixed-mode s^2 = 0
    double a3_rho2_e1 = 0.0, a3_rho2_e2 = 0.0;
    double a3_s2_e1 = 0.0, a3_s2_e2 = 0.0;
};

CriticalLines critical_lines(const AmplitudeSystem& asys);

enum class PdeInterpretation {
    HomogeneousSteady,
    HomogeneousPeriodic,
    InhomogeneousSteady,
    InhomogeneousPeriodic,
};

PdeInterpretation pde_interpretation(AmpEqName name);

struct NFRegion {
    int region = 0;  // 1..6
    std::vector<AmplitudeEquilibrium> equilibria;
};

/// Region D1..D6 by matching the existence/stability signature of the
/// amplitude equilibria against the region ledger. Throws std::domain_error
/// when (eps1, eps2) sits on a critical line (within 1e-10) or the
/// signature matches no ledger row.
NFRegion classify_epsilon(const AmplitudeSystem& asys, double eps1, double eps2);

}  // namespace vegpat

#endif
