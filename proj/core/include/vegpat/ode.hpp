#ifndef VEGPAT_ODE_HPP
#define VEGPAT_ODE_HPP

#include <string>
#include <vector>

#include "vegpat/equilibria.hpp"
#include "vegpat/model.hpp"

namespace vegpat {

struct OdeStats {
    long accepted = 0;
    long rejected = 0;
    double min_dt = 0.0;
    double max_dt = 0.0;
};

struct OdeTrajectory {
    std::vector<double> t;
    std::vector<State> y;
    std::vector<double> bdot;  // db/dt at each point (crossing refinement)
    OdeStats stats;
};

/// Adaptive Dormand-Prince 5(4) integration of the kinetic system.
/// `time_direction` = -1 integrates the time-reversed field (for locating
/// unstable planar cycles). The a priori solution bounds are asserted on
/// every accepted step for forward runs; violation throws std::runtime_error
/// (an integrator bug, not model behavior). Step collapse throws
/// ConvergenceError.
OdeTrajectory integrate_ode(const ModelParams& p, const State& init,
                            double t_end, double rtol = 1e-8,
                            int time_direction = 1);

enum class AttractorKind { Equilibrium, LimitCycle, Unresolved };

struct SimOutcome {
    AttractorKind kind = AttractorKind::Unresolved;
    int eq_index = -1;     // index into the supplied equilibrium list
    State equilibrium;
    double period = 0.0;   // limit cycle only
    double b_min = 0.0, b_max = 0.0;
};

/// Classify the tail of a trajectory: a listed equilibrium (within eq_tol,
/// with decaying distance) or a limit cycle via a Poincare section on b
/// crossing its trailing mean upward, declared when 5 consecutive periods
/// agree to 1e-4 relative. Anything else is Unresolved.
SimOutcome detect_attractor(const OdeTrajectory& traj,
                            const std::vector<State>& eq_list,
                            double eq_tol = 1e-6);

struct BasinProbe {
    std::vector<std::string> attractors;  // legend: label per attractor id
    std::vector<int> labels;              // per init; -1 = unresolved
    int distinct = 0;
};

BasinProbe basin_probe(const ModelParams& p, const std::vector<State>& inits,
                       double t_end = 2000.0, double rtol = 1e-8);

/// Homoclinic parameter estimate by bisection on cycle blow-up: a cycle must
/// exist at exactly one end of [R_lo, R_hi]; the boundary where the cycle
/// ceases to exist (or its period exceeds 10x the bracket-start period) is
/// refined to 1e-3 in R. Periods must grow toward the boundary.
/// `time_direction` = -1 scans an unstable-cycle family.
double homoclinic_scan(ModelParams p, double R_lo, double R_hi,
                       int time_direction = 1, double t_end = 3000.0,
                       double rtol = 1e-8);

struct CycleSample {
    double R = 0.0;
    bool found = false;
    double period = 0.0;
    double b_min = 0.0, b_max = 0.0;
    bool stable = true;
};

/// Sample the limit-cycle branch over [R_lo, R_hi]. Stable cycles are found
/// by forward integration from near the enclosed focus and from a far
/// start; when those disagree (bistability) the separating unstable cycle
/// is located by backward-time integration. Two samples may share one R.
std::vector<CycleSample> cycle_branch(ModelParams p, double R_lo, double R_hi,
                                      int n_samples, double t_end = 2000.0,
                                      double rtol = 1e-8);

}  // namespace vegpat

#endif
