#ifndef VEGPAT_MODEL_HPP
#define VEGPAT_MODEL_HPP

#include <array>
#include <stdexcept>

namespace vegpat {

/// Thrown when an iterative solver fails; carries the last iterate.
struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, double x, double y)
        : std::runtime_error(what), last_x(x), last_y(y) {}
    double last_x = 0.0;
    double last_y = 0.0;
};

/// All scalar parameters of the water-vegetation model.
///
/// The kinetics are
///   dw/dt = R - a*w - delta*w*b
///   db/dt = rho*b*(1 - b/w) - mu*b / (1 + theta1*b + theta2*w)
/// on the 1-D domain (0, l*pi) with Neumann boundaries and diffusion
/// coefficients d1 (water) and d2 (biomass).
struct ModelParams {
    double R = 1.0;       // rainfall rate, > 0
    double a = 0.1;       // evaporation rate, > 0
    double delta = 0.12;  // water consumption rate, > 0
    double rho = 1.0;     // intrinsic growth rate, > 0
    double mu = 10.0;     // base mortality, > 0
    double theta1 = 0.0;  // infiltration feedback, >= 0
    double theta2 = 0.0;  // soil-moisture feedback, >= 0
    double d1 = 0.0;      // water diffusion, >= 0
    double d2 = 0.0;      // vegetation diffusion, >= 0
    double l = 1.0;       // domain length factor, domain is (0, l*pi), > 0

    void validate() const;

    // The region geometry of the parameter plane assumes mu > rho; the model
    // itself is well-defined without it, so this is a flag, not an invariant.
    bool mu_exceeds_rho() const { return mu > rho; }
};

/// A point (w, b) in state space. w must stay strictly positive.
struct State {
    double w = 1.0;
    double b = 0.0;
};

/// Reaction rates (f, g) at a state.
struct Rates {
    double f = 0.0;
    double g = 0.0;
};

Rates kinetics(const ModelParams& p, const State& s);

/// mu / (1 + theta1*b + theta2*w); nonincreasing in both w and b.
double mortality(const ModelParams& p, const State& s);

/// Taylor coefficients of the kinetics at an equilibrium, in the convention
///   f ~ A11 w + A12 b + A13 w^2 + A14 wb + A15 b^2 + A16 w^3 + ... + A19 b^3
/// (deviations from the equilibrium), plus the raw mixed partials
/// G^{(k)}_{j1 j2} = d^{j1+j2} (f,g) / dw^{j1} db^{j2} for j1+j2 in {2,3}.
struct DerivTensor {
    // A[i-1][j-1] = A_ij; A_13, A_15..A_19 are identically zero.
    std::array<std::array<double, 9>, 2> A{};
    // G[k][idx]: raw partials, idx enumerates (j1,j2) =
    // (2,0),(1,1),(0,2),(3,0),(2,1),(1,2),(0,3).
    std::array<std::array<double, 7>, 2> G{};

    double a(int i, int j) const { return A[i - 1][j - 1]; }
    double g2(int k, int j1) const { return G[k - 1][2 - j1]; }      // j1+j2 = 2
    double g3(int k, int j1) const { return G[k - 1][3 + (3 - j1)]; } // j1+j2 = 3
};

/// Requires kinetics residual below `residual_tol` at `eq`.
DerivTensor deriv_tensor(const ModelParams& p, const State& eq,
                         double residual_tol = 1e-8);

/// First-order sensitivity of the equilibrium to the rainfall rate.
struct EquilibriumShift {
    double w_tilde = 0.0;
    double b_tilde = 0.0;
    double M = 0.0;  // denominator of the b_tilde closed form
};

/// Requires a nondegenerate equilibrium (the branch must not be at a fold).
EquilibriumShift equilibrium_shift(const ModelParams& p, const State& eq);

}  // namespace vegpat

#endif
