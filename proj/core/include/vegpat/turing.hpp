#ifndef VEGPAT_TURING_HPP
#define VEGPAT_TURING_HPP

#include <complex>
#include <vector>

#include "vegpat/model.hpp"
#include "vegpat/stability.hpp"

namespace vegpat {

/// Mode-k linearization data for Neumann modes cos(kx/l) on (0, l*pi).
struct DispersionPoint {
    int k = 0;
    double Tk = 0.0;  // trace of L_k
    double Jk = 0.0;  // determinant of L_k
    std::pair<std::complex<double>, std::complex<double>> eigs;
};

DispersionPoint dispersion(const ModelParams& p, const State& eq, int k);

/// Critical water diffusion d1(R, k^2): the value at which J_k = 0 for the
/// given mode. Throws std::domain_error at the pole d2*k^2 = a22*l^2.
/// Negative values mean the mode cannot destabilize at any d1.
double d1_critical(const ModelParams& p, const State& eq, int k);

struct KStarSelection {
    double z_star = 0.0;  // continuous minimizer of d1(R, z)
    int k_star = 0;       // integer mode realizing the minimum
};

/// Requires a22 > 0 at the equilibrium (throws std::domain_error otherwise).
KStarSelection select_kstar(const ModelParams& p, const State& eq);

enum class TuringCondition { H4, H5, H6 };

/// H4: a22 <= 0 (no mode can destabilize). H5: a22 > 0 but d1 below the
/// threshold -d2*a11/a22 (inclusive). H6: instability possible.
TuringCondition no_turing_check(const ModelParams& p, const State& eq);

struct TuringCurvePoint {
    double R = 0.0;
    int k_star = 0;
    double d1_crit = 0.0;
    double z_star = 0.0;
};

/// The piecewise Turing curve R -> (k*, d1(R, k*^2)) sampled on a dR grid,
/// with mode-switch points refined by bisection and inserted. Grid points
/// where a22 <= 0 are skipped.
std::vector<TuringCurvePoint> turing_curve(ModelParams p, double R_lo,
                                           double R_hi, int branch = 0,
                                           double dR = 1e-3);

/// R values in (R_lo, R_hi) where the selected mode k* changes, refined by
/// bisection on d1(R, k0^2) - d1(R, (k0+1)^2).
std::vector<double> kstar_switch_points(ModelParams p, double R_lo,
                                        double R_hi, int branch = 0);

/// Endpoints of the a22 > 0 window on the tracked branch, located by
/// bisection on a22 along R.
std::vector<double> a22_sign_changes(ModelParams p, double R_lo, double R_hi,
                                     int branch = 0, int n_scan = 2000);

struct THPoint {
    double R_star = 0.0;
    double d1_star = 0.0;
    int k_star = 0;
    State equilibrium;
    double omega0 = 0.0;
};

/// Turing-Hopf points: the Turing curve evaluated at each Hopf R in the
/// bracket. Verifies Tr = 0, J_0 > 0, J_{k*} = 0 and T_{k*} < 0 at the
/// located point; throws ConvergenceError when no admissible intersection
/// exists in the bracket.
std::vector<THPoint> th_points(ModelParams p, double R_lo, double R_hi,
                               int branch = 0);

enum class SteadyStateKind { BareSoilStable, UniformVegetation, PatternRegion };

struct StateMap {
    std::vector<double> theta2;  // n1 grid values
    std::vector<double> d1;      // n2 grid values
    std::vector<SteadyStateKind> cells;  // row-major, theta2 outer
    double theta2_boundary = 0.0;        // a(mu-rho)/(rho*R)
};

/// Three-state classification over a (theta2, d1) rectangle at fixed R.
StateMap theta2_state_map(ModelParams p, double theta2_lo, double theta2_hi,
                          int n1, double d1_lo, double d1_hi, int n2);

}  // namespace vegpat

#endif
