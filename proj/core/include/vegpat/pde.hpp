#ifndef VEGPAT_PDE_HPP
#define VEGPAT_PDE_HPP

#include <vector>

#include "vegpat/model.hpp"

namespace vegpat {

/// Cell-centered grid on (0, l*pi): x_i = (i + 1/2) * dx, dx = l*pi/nx.
std::vector<double> pde_grid(int nx, double l);

struct PdeField {
    int nx = 0;
    double l = 0.0;
    std::vector<double> x;
    std::vector<double> t;                 // snapshot times
    std::vector<std::vector<double>> w, b; // one profile per snapshot
};

enum class PdeScheme { Imex, ExplicitCfl };

/// Method-of-lines integration of the reaction-diffusion system with
/// Neumann (ghost-cell reflection) boundaries. A deterministic
/// seed_amp * cos(k_seed * x / l) perturbation is added to both initial
/// profiles. Imex: backward-Euler diffusion (tridiagonal solve) with
/// explicit reaction; ExplicitCfl: forward Euler with dt bounded by
/// 0.4*dx^2/max(d1,d2). Throws std::runtime_error on blow-up (values
/// beyond 1000x the a priori solution bounds).
PdeField simulate_pde(const ModelParams& p, const std::vector<double>& w0,
                      const std::vector<double>& b0, double t_end,
                      double seed_amp = 1e-6, int k_seed = 0,
                      PdeScheme scheme = PdeScheme::Imex, double dt = 1e-2,
                      double snap_dt = 0.5);

enum class PatternKind {
    HomogeneousSteady,
    HomogeneousPeriodic,
    InhomogeneousSteady,
    InhomogeneousPeriodic,
    Unresolved,
};

struct PatternOutcome {
    PatternKind kind = PatternKind::Unresolved;
    int dominant_mode = 0;      // k of the largest spatial mode (0 if none)
    double amplitude = 0.0;     // time-averaged dominant-mode amplitude
    double period = 0.0;        // temporal period when periodic
    double antiphase_corr = 0.0;  // correlation of final w and b profiles
};

/// Classification over the final 20% of snapshots: spatial inhomogeneity
/// when some mode k >= 1 exceeds spatial_tol relative to mode 0; temporal
/// periodicity when the tracked mode oscillates beyond temporal_tol with a
/// stable crossing period.
PatternOutcome classify_pattern(const PdeField& field,
                                double spatial_tol = 1e-3,
                                double temporal_tol = 1e-4);

/// Projection of a profile onto cos(k x / l) (k = 0 gives the mean).
double cosine_mode(const std::vector<double>& profile,
                   const std::vector<double>& x, double l, int k);

}  // namespace vegpat

#endif
