#include "vegpat/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "vegpat/stability.hpp"

namespace vegpat {

namespace {

struct Vec2 {
    double w, b;
};

bool rhs(const ModelParams& p, double w, double b, int dir, Vec2& out) {
    if (!(w > 0)) return false;
    const double f = p.R - p.a * w - p.delta * w * b;
    const double g = p.rho * b * (1.0 - b / w) -
                     p.mu * b / (1.0 + p.theta1 * b + p.theta2 * w);
    out = {dir * f, dir * g};
    return true;
}

// Dormand-Prince 5(4) tableau
constexpr double A[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double B5[7] = {35.0 / 384,      0.0,          500.0 / 1113, 125.0 / 192,
                          -2187.0 / 6784,  11.0 / 84,    0.0};
constexpr double B4[7] = {5179.0 / 57600,  0.0,          7571.0 / 16695, 393.0 / 640,
                          -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

}  // namespace

OdeTrajectory integrate_ode(const ModelParams& p, const State& init,
                            double t_end, double rtol, int time_direction) {
    if (!(init.w > 0) || init.b < 0)
        throw std::invalid_argument("integrate_ode: require w0 > 0, b0 >= 0");
    const double atol = 1e-10;

    // invariant-region a priori bounds (forward time only)
    const double Mb = std::max(init.b, std::max(init.w, p.R / p.a));
    const double w_hi = std::max(init.w, p.R / p.a);
    const double w_lo = std::min(init.w, p.R / (p.a + p.delta * Mb));
    const double slack = 1e-7;

    OdeTrajectory traj;
    traj.t.push_back(0.0);
    traj.y.push_back(init);
    traj.stats.min_dt = std::numeric_limits<double>::infinity();

    double t = 0.0, w = init.w, b = init.b;
    double dt = std::min(1e-3, t_end);
    Vec2 k[7];
    if (!rhs(p, w, b, time_direction, k[0]))
        throw std::invalid_argument("integrate_ode: invalid initial state");
    traj.bdot.push_back(k[0].b);

    while (t < t_end) {
        dt = std::min(dt, t_end - t);
        if (dt < 1e-14 * std::max(1.0, t))
            throw ConvergenceError("integrate_ode: step size collapsed", w, b);

        bool ok = true;
        for (int i = 1; i < 7 && ok; ++i) {
            double ws = w, bs = b;
            for (int j = 0; j < i; ++j) {
                ws += dt * A[i][j] * k[j].w;
                bs += dt * A[i][j] * k[j].b;
            }
            ok = rhs(p, ws, bs, time_direction, k[i]);
        }
        if (ok) {
            double w5 = w, b5 = b, ew = 0.0, eb = 0.0;
            for (int i = 0; i < 7; ++i) {
                w5 += dt * B5[i] * k[i].w;
                b5 += dt * B5[i] * k[i].b;
                ew += dt * (B5[i] - B4[i]) * k[i].w;
                eb += dt * (B5[i] - B4[i]) * k[i].b;
            }
            const double sw = atol + rtol * std::max(std::abs(w), std::abs(w5));
            const double sb = atol + rtol * std::max(std::abs(b), std::abs(b5));
            const double err = std::sqrt(0.5 * ((ew / sw) * (ew / sw) +
                                                (eb / sb) * (eb / sb)));
            if (err <= 1.0 && w5 > 0) {
                t += dt;
                w = w5;
                b = std::max(b5, 0.0);
                if (time_direction > 0) {
                    if (b > Mb * (1.0 + slack) ||
                        w > w_hi * (1.0 + slack) || w < w_lo * (1.0 - slack))
                        throw std::runtime_error("integrate_ode: a priori bound violated");
                }
                traj.t.push_back(t);
                traj.y.push_back({w, b});
                traj.stats.accepted++;
                traj.stats.min_dt = std::min(traj.stats.min_dt, dt);
                traj.stats.max_dt = std::max(traj.stats.max_dt, dt);
                Vec2 knew;
                rhs(p, w, b, time_direction, knew);  // FSAL would reuse k[6]
                k[0] = knew;
                traj.bdot.push_back(knew.b);
                const double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
                dt *= std::clamp(fac, 0.2, 5.0);
                continue;
            }
        }
        traj.stats.rejected++;
        dt *= 0.5;
    }
    return traj;
}

SimOutcome detect_attractor(const OdeTrajectory& traj,
                            const std::vector<State>& eq_list, double eq_tol) {
    SimOutcome out;
    const size_t n = traj.y.size();
    if (n < 10) return out;
    const State fin = traj.y.back();
    const double t_end = traj.t.back();

    // equilibrium: close to a listed point and getting closer
    size_t i90 = n - 1;
    while (i90 > 0 && traj.t[i90] > 0.9 * t_end) --i90;
    for (size_t i = 0; i < eq_list.size(); ++i) {
        const double df = std::hypot(fin.w - eq_list[i].w, fin.b - eq_list[i].b);
        const double d9 = std::hypot(traj.y[i90].w - eq_list[i].w,
                                     traj.y[i90].b - eq_list[i].b);
        if (df < eq_tol && (df <= d9 * (1.0 + 1e-9) || d9 < eq_tol)) {
            out.kind = AttractorKind::Equilibrium;
            out.eq_index = static_cast<int>(i);
            out.equilibrium = eq_list[i];
            return out;
        }
    }

    // Poincare section: b crossing its trailing mean upward
    size_t i50 = n - 1;
    while (i50 > 0 && traj.t[i50] > 0.5 * t_end) --i50;
    double mean = 0.0;
    for (size_t i = i50; i < n; ++i) mean += traj.y[i].b;
    mean /= static_cast<double>(n - i50);

    // crossing time by cubic Hermite when db/dt samples are available
    // (linear interpolation leaves step-phase jitter above 1e-4 relative)
    const bool have_bdot = traj.bdot.size() == n;
    std::vector<double> crossings;
    for (size_t i = i50 + 1; i < n; ++i) {
        const double b0 = traj.y[i - 1].b, b1 = traj.y[i].b;
        if (!(b0 < mean && b1 >= mean)) continue;
        const double h = traj.t[i] - traj.t[i - 1];
        double s = (mean - b0) / (b1 - b0);
        if (have_bdot && h > 0) {
            const double m0 = h * traj.bdot[i - 1], m1 = h * traj.bdot[i];
            double slo = 0.0, shi = 1.0;
            for (int it = 0; it < 60; ++it) {
                const double sm = 0.5 * (slo + shi);
                const double h00 = (1 + 2 * sm) * (1 - sm) * (1 - sm);
                const double h10 = sm * (1 - sm) * (1 - sm);
                const double h01 = sm * sm * (3 - 2 * sm);
                const double h11 = sm * sm * (sm - 1);
                const double bm = h00 * b0 + h10 * m0 + h01 * b1 + h11 * m1;
                (bm < mean ? slo : shi) = sm;
            }
            s = 0.5 * (slo + shi);
        }
        crossings.push_back(traj.t[i - 1] + s * h);
    }
    if (crossings.size() < 6) return out;
    std::vector<double> periods;
    for (size_t i = crossings.size() - 5; i < crossings.size(); ++i)
        periods.push_back(crossings[i] - crossings[i - 1]);
    double pm = 0.0;
    for (double x : periods) pm += x;
    pm /= 5.0;
    for (double x : periods)
        if (std::abs(x - pm) > 1e-4 * pm) return out;

    // a decaying spiral keeps a near-constant period; require the b
    // amplitude of the first and last of the 5 periods to agree too
    auto b_range = [&](double t0, double t1) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (size_t i = i50; i < n; ++i) {
            if (traj.t[i] < t0 || traj.t[i] > t1) continue;
            lo = std::min(lo, traj.y[i].b);
            hi = std::max(hi, traj.y[i].b);
        }
        return hi - lo;
    };
    const double amp_first = b_range(crossings[crossings.size() - 6],
                                     crossings[crossings.size() - 5]);
    const double amp_last = b_range(crossings[crossings.size() - 2],
                                    crossings.back());
    if (std::abs(amp_first - amp_last) > 1e-3 * std::max(amp_first, amp_last))
        return out;

    out.kind = AttractorKind::LimitCycle;
    out.period = pm;
    out.b_min = std::numeric_limits<double>::infinity();
    out.b_max = -out.b_min;
    const double t_from = crossings.back() - pm;
    for (size_t i = i50; i < n; ++i) {
        if (traj.t[i] < t_from) continue;
        out.b_min = std::min(out.b_min, traj.y[i].b);
        out.b_max = std::max(out.b_max, traj.y[i].b);
    }
    return out;
}

namespace {

// Integrate and classify, extending from the endpoint while the tail is
// unresolved; slow transients (near-Hopf spiral-out, near-homoclinic
// crawl) need more than one t_end.
SimOutcome resolve_attractor(const ModelParams& p, State init,
                             const std::vector<State>& eq_states, int dir,
                             double t_end, double rtol) {
    SimOutcome oc;
    for (int attempt = 0; attempt < 8; ++attempt) {
        const auto traj = integrate_ode(p, init, t_end, rtol, dir);
        oc = detect_attractor(traj, eq_states);
        if (oc.kind != AttractorKind::Unresolved) break;
        init = traj.y.back();
    }
    return oc;
}

}  // namespace

BasinProbe basin_probe(const ModelParams& p, const std::vector<State>& inits,
                       double t_end, double rtol) {
    const auto eqs = find_positive_equilibria(p);
    std::vector<State> eq_states = {{p.R / p.a, 0.0}};
    std::vector<std::string> names = {"E0"};
    for (const auto& e : eqs) {
        eq_states.push_back({e.w, e.b});
        names.push_back(e.label);
    }

    BasinProbe bp;
    bp.attractors = names;
    int cycle_id = -1;
    std::vector<bool> used(names.size(), false);
    for (const auto& init : inits) {
        const auto oc = resolve_attractor(p, init, eq_states, 1, t_end, rtol);
        if (oc.kind == AttractorKind::Equilibrium) {
            bp.labels.push_back(oc.eq_index);
            used[oc.eq_index] = true;
        } else if (oc.kind == AttractorKind::LimitCycle) {
            if (cycle_id < 0) {
                cycle_id = static_cast<int>(bp.attractors.size());
                bp.attractors.push_back("cycle");
                used.push_back(true);
            }
            bp.labels.push_back(cycle_id);
        } else {
            bp.labels.push_back(-1);
        }
    }
    for (bool u : used) bp.distinct += u ? 1 : 0;
    return bp;
}

namespace {

std::optional<double> cycle_period_at(ModelParams& p, double R, int dir,
                                      double t_end, double rtol) {
    p.R = R;
    const auto eqs = find_positive_equilibria(p);
    std::vector<State> eq_states = {{p.R / p.a, 0.0}};
    for (const auto& e : eqs) eq_states.push_back({e.w, e.b});

    // seed near a focus the cycle could enclose: one repelling in the
    // chosen time direction; try every candidate until a cycle is found
    std::vector<State> foci;
    for (const auto& e : eqs) {
        const auto v = stability_verdict(p, {e.w, e.b});
        if ((dir > 0 && v.kind == StabilityKind::UnstableFocusOrNode) ||
            (dir < 0 && v.kind == StabilityKind::Stable))
            foci.push_back({e.w, e.b});
    }
    for (const auto& focus : foci) {
        try {
            const auto oc = resolve_attractor(p, {focus.w, focus.b * 1.02},
                                              eq_states, dir, t_end, rtol);
            if (oc.kind == AttractorKind::LimitCycle) return oc.period;
        } catch (const std::exception&) {
            // divergence in reversed time just means no cycle on this side
        }
    }
    return std::nullopt;
}

}  // namespace

double homoclinic_scan(ModelParams p, double R_lo, double R_hi,
                       int time_direction, double t_end, double rtol) {
    auto per_lo = cycle_period_at(p, R_lo, time_direction, t_end, rtol);
    auto per_hi = cycle_period_at(p, R_hi, time_direction, t_end, rtol);
    if (per_lo.has_value() == per_hi.has_value())
        throw std::domain_error(
            "homoclinic_scan: need a cycle at exactly one bracket end");
    const bool cycle_at_lo = per_lo.has_value();
    const double P0 = cycle_at_lo ? *per_lo : *per_hi;

    double last_cycle_period = P0;
    auto blown = [&](double R) {
        const auto per = cycle_period_at(p, R, time_direction, t_end, rtol);
        if (!per) return true;
        last_cycle_period = *per;
        return *per > 10.0 * P0;
    };

    double lo = R_lo, hi = R_hi;  // invariant: cycle side vs blown side
    if (!cycle_at_lo) std::swap(lo, hi);
    while (std::abs(hi - lo) > 1e-3) {
        const double mid = 0.5 * (lo + hi);
        if (blown(mid)) hi = mid; else lo = mid;
    }
    if (last_cycle_period < P0)
        throw ConvergenceError(
            "homoclinic_scan: cycle period did not grow toward the boundary",
            lo, last_cycle_period);
    return 0.5 * (lo + hi);
}

std::vector<CycleSample> cycle_branch(ModelParams p, double R_lo, double R_hi,
                                      int n_samples, double t_end, double rtol) {
    std::vector<CycleSample> out;
    for (int i = 0; i < n_samples; ++i) {
        const double R = n_samples == 1
                             ? R_lo
                             : R_lo + (R_hi - R_lo) * i / (n_samples - 1);
        p.R = R;
        const auto eqs = find_positive_equilibria(p);
        std::vector<State> eq_states = {{p.R / p.a, 0.0}};
        for (const auto& e : eqs) eq_states.push_back({e.w, e.b});

        std::optional<State> unstable_focus, stable_eq;
        for (const auto& e : eqs) {
            const auto v = stability_verdict(p, {e.w, e.b});
            if (v.kind == StabilityKind::UnstableFocusOrNode && !unstable_focus)
                unstable_focus = State{e.w, e.b};
            if (v.kind == StabilityKind::Stable)
                stable_eq = State{e.w, e.b};  // largest-b stable equilibrium wins
        }

        auto probe = [&](const State& init, int dir) -> std::optional<SimOutcome> {
            try {
                const auto oc =
                    resolve_attractor(p, init, eq_states, dir, t_end, rtol);
                if (oc.kind == AttractorKind::LimitCycle) return oc;
            } catch (const std::exception&) {
            }
            return std::nullopt;
        };

        bool have_stable = false;
        double stable_bmax = 0.0;
        if (unstable_focus) {
            if (auto oc = probe({unstable_focus->w, unstable_focus->b * 1.02}, 1)) {
                out.push_back({R, true, oc->period, oc->b_min, oc->b_max, true});
                have_stable = true;
                stable_bmax = oc->b_max;
            }
        }
        if (stable_eq) {
            // a far start can land on a large cycle coexisting with the
            // stable equilibrium (bistability)
            for (double fac : {2.5, 0.3}) {
                if (auto oc = probe({stable_eq->w, stable_eq->b * fac}, 1)) {
                    if (!have_stable || std::abs(oc->b_max - stable_bmax) >
                                            1e-3 * std::max(1.0, stable_bmax)) {
                        out.push_back({R, true, oc->period, oc->b_min, oc->b_max, true});
                        have_stable = true;
                        stable_bmax = oc->b_max;
                        // the separating unstable cycle, in reversed time
                        if (auto uc = probe({stable_eq->w, stable_eq->b * 1.02}, -1))
                            out.push_back({R, true, uc->period, uc->b_min,
                                           uc->b_max, false});
                    }
                    break;
                }
            }
        }
        if (!have_stable)  // keep an explicit miss per R
            out.push_back({R, false, 0.0, 0.0, 0.0, true});
    }
    return out;
}

}  // namespace vegpat
