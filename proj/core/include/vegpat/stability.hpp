#ifndef VEGPAT_STABILITY_HPP
#define VEGPAT_STABILITY_HPP

#include <complex>
#include <vector>

#include "vegpat/equilibria.hpp"
#include "vegpat/model.hpp"

namespace vegpat {

struct Jacobian2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;
    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
    std::pair<std::complex<double>, std::complex<double>> eigenvalues() const;
};

/// Kinetic Jacobian at a positive equilibrium, entries in closed form.
Jacobian2 jacobian(const ModelParams& p, const State& eq);

enum class StabilityKind { Stable, UnstableFocusOrNode, Saddle, Degenerate };
enum class TraceCondition { H1, H2, H3, None };

struct StabilityVerdict {
    StabilityKind kind = StabilityKind::Stable;
    TraceCondition condition = TraceCondition::None;
    double K0 = 0.0, K1 = 0.0;
    double T = 0.0;  // trace factor: Tr = -P*T with P > 0
    double P = 0.0;
};

StabilityVerdict stability_verdict(const ModelParams& p, const State& eq);

struct BareSoilStability {
    bool stable = false;
    double R_star = 0.0;  // threshold a(mu-rho)/(rho*theta2); 0 when mu <= rho
                          // (never stable), +inf when theta2 = 0 with mu > rho
    double lambda1 = 0.0, lambda2 = 0.0;
};

BareSoilStability bare_soil_stability(const ModelParams& p);

enum class LyapunovSign { Super, Sub, Degenerate };

struct HopfPoint {
    double R = 0.0;
    double w_star = 0.0, b_star = 0.0;
    double omega0 = 0.0;          // sqrt(det J) at the point
    int transversality_sign = 0;  // sign of d(Re lambda)/dR across the point
    LyapunovSign lyapunov = LyapunovSign::Degenerate;
};

/// Hopf points on the tracked equilibrium branch over [R_lo, R_hi].
/// `branch` selects the root by ascending-b index at each R (clamped);
/// the branch is followed by continuity and a jump raises an error.
std::vector<HopfPoint> hopf_points(ModelParams p, double R_lo, double R_hi,
                                   int branch = 0, int n_scan = 400);

/// Sign of the first Lyapunov coefficient at a verified Hopf point,
/// from the cubic Taylor expansion in complex eigenbasis coordinates.
LyapunovSign first_lyapunov_sign(const ModelParams& p, const HopfPoint& hp);

/// The raw first Lyapunov coefficient (sign is the contract; magnitude is
/// exposed for diagnostics and tests).
double first_lyapunov_coefficient(const ModelParams& p, const State& eq);

}  // namespace vegpat

#endif
