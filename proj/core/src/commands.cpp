#include "vegpat/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "vegpat/equilibria.hpp"
#include "vegpat/normal_form.hpp"
#include "vegpat/ode.hpp"
#include "vegpat/pde.hpp"
#include "vegpat/stability.hpp"
#include "vegpat/turing.hpp"

namespace vegpat {

namespace {

using nlohmann::json;

// Timestamps would break run-to-run byte identity, so the field is sourced
// from SOURCE_DATE_EPOCH when present and pinned to 0 otherwise.
std::string timestamp_value() {
    const char* env = std::getenv("SOURCE_DATE_EPOCH");
    return env ? env : "0";
}

std::map<std::string, std::string> base_metadata(const char* command,
                                                 const RunConfig& cfg) {
    std::map<std::string, std::string> m;
    m["command"] = command;
    m["version"] = "0.1.0";
    m["timestamp"] = timestamp_value();
    const ModelParams& p = cfg.model;
    m["model.R"] = format_double(p.R);
    m["model.a"] = format_double(p.a);
    m["model.delta"] = format_double(p.delta);
    m["model.rho"] = format_double(p.rho);
    m["model.mu"] = format_double(p.mu);
    m["model.theta1"] = format_double(p.theta1);
    m["model.theta2"] = format_double(p.theta2);
    m["model.d1"] = format_double(p.d1);
    m["model.d2"] = format_double(p.d2);
    m["model.l"] = format_double(p.l);
    return m;
}

const char* stability_name(StabilityKind k) {
    switch (k) {
        case StabilityKind::Stable: return "stable";
        case StabilityKind::UnstableFocusOrNode: return "unstable";
        case StabilityKind::Saddle: return "saddle";
        default: return "degenerate";
    }
}

const char* condition_name(TraceCondition c) {
    switch (c) {
        case TraceCondition::H1: return "H1";
        case TraceCondition::H2: return "H2";
        case TraceCondition::H3: return "H3";
        default: return "none";
    }
}

const char* lyapunov_name(LyapunovSign s) {
    switch (s) {
        case LyapunovSign::Super: return "supercritical";
        case LyapunovSign::Sub: return "subcritical";
        default: return "degenerate";
    }
}

const char* region_name(Region r) {
    switch (r) {
        case Region::I: return "I";
        case Region::II: return "II";
        case Region::III: return "III";
        case Region::IV: return "IV";
        default: return "other";
    }
}

const char* state_name(SteadyStateKind k) {
    switch (k) {
        case SteadyStateKind::BareSoilStable: return "bare_soil";
        case SteadyStateKind::UniformVegetation: return "uniform";
        default: return "pattern";
    }
}

const char* pattern_name(PatternKind k) {
    switch (k) {
        case PatternKind::HomogeneousSteady: return "homogeneous_steady";
        case PatternKind::HomogeneousPeriodic: return "homogeneous_periodic";
        case PatternKind::InhomogeneousSteady: return "inhomogeneous_steady";
        case PatternKind::InhomogeneousPeriodic: return "inhomogeneous_periodic";
        default: return "unresolved";
    }
}

json cvec_json(const cvec2& v) {
    return json::array({{v[0].real(), v[0].imag()}, {v[1].real(), v[1].imag()}});
}

json cplx_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

}  // namespace

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
    int nw = workers > 0 ? workers
                         : static_cast<int>(std::thread::hardware_concurrency());
    if (nw < 1) nw = 1;
    nw = std::min(nw, n);
    if (nw <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    for (int t = 0; t < nw; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

CommandOutput cmd_equilibria(const RunConfig& cfg) {
    const ModelParams& p = cfg.model;
    CommandOutput out;
    ResultTable t;
    t.metadata = base_metadata("equilibria", cfg);
    t.columns = {"label", "w", "b", "stability", "condition", "trace", "det"};

    const auto bs = bare_soil_stability(p);
    t.metadata["bare_soil.R_star"] = format_double(bs.R_star);
    if (p.mu_exceeds_rho()) {
        const auto reg = classify_param_region(p);
        t.metadata["region"] = region_name(reg.region);
        t.metadata["f1"] = format_double(reg.f1);
        t.metadata["f2"] = format_double(reg.f2);
        t.metadata["f3"] = format_double(reg.f3);
    }
    t.add_row({std::string("E0"), p.R / p.a, 0.0,
               std::string(bs.stable ? "stable" : "unstable"), std::string("none"),
               bs.lambda1 + bs.lambda2, bs.lambda1 * bs.lambda2});
    for (const auto& e : find_positive_equilibria(p)) {
        const auto v = stability_verdict(p, {e.w, e.b});
        const auto j = jacobian(p, {e.w, e.b});
        t.add_row({e.label, e.w, e.b, std::string(stability_name(v.kind)),
                   std::string(condition_name(v.condition)), j.trace(), j.det()});
    }
    out.tables.emplace_back("equilibria", std::move(t));
    return out;
}

CommandOutput cmd_bif_scan(const RunConfig& cfg) {
    CommandOutput out;
    ModelParams p = cfg.model;
    const ScanRange& sc = cfg.r_scan;

    ResultTable branches;
    branches.metadata = base_metadata("bif-scan", cfg);
    branches.columns = {"R", "label", "w", "b", "stability"};
    for (int i = 0; i < sc.n; ++i) {
        p.R = sc.n == 1 ? sc.lo : sc.lo + (sc.hi - sc.lo) * i / (sc.n - 1);
        const auto bs = bare_soil_stability(p);
        branches.add_row({p.R, std::string("E0"), p.R / p.a, 0.0,
                          std::string(bs.stable ? "stable" : "unstable")});
        for (const auto& e : find_positive_equilibria(p)) {
            const auto v = stability_verdict(p, {e.w, e.b});
            branches.add_row({p.R, e.label, e.w, e.b,
                              std::string(stability_name(v.kind))});
        }
    }

    ResultTable folds;
    folds.metadata = base_metadata("bif-scan", cfg);
    folds.columns = {"R", "b"};
    if (sc.n > 0)
        for (const auto& f : find_saddle_node_R(cfg.model, sc.lo, sc.hi))
            folds.add_row({f.R, f.b});

    ResultTable hopf;
    hopf.metadata = base_metadata("bif-scan", cfg);
    hopf.columns = {"R", "w", "b", "omega0", "transversality", "lyapunov"};
    if (sc.n > 0) {
        try {
            for (const auto& h :
                 hopf_points(cfg.model, sc.lo, sc.hi, cfg.branch))
                hopf.add_row({h.R, h.w_star, h.b_star, h.omega0,
                              static_cast<double>(h.transversality_sign),
                              std::string(lyapunov_name(h.lyapunov))});
        } catch (const ConvergenceError& e) {
            hopf.metadata["error"] = e.what();
            out.partial = true;
        }
    }

    if (cfg.homoclinic_hi > cfg.homoclinic_lo) {
        try {
            const double rhl =
                homoclinic_scan(cfg.model, cfg.homoclinic_lo, cfg.homoclinic_hi,
                                cfg.time_direction);
            branches.metadata["R_HL"] = format_double(rhl);
        } catch (const std::exception& e) {
            branches.metadata["homoclinic_error"] = e.what();
            out.partial = true;
        }
    }

    out.tables.emplace_back("branches", std::move(branches));
    out.tables.emplace_back("folds", std::move(folds));
    out.tables.emplace_back("hopf", std::move(hopf));
    return out;
}

CommandOutput cmd_2d_map(const RunConfig& cfg) {
    CommandOutput out;
    const ScanRange& st = cfg.theta2_scan;
    const ScanRange& sr = cfg.r_scan;

    ResultTable regions;
    regions.metadata = base_metadata("2d-map", cfg);
    regions.columns = {"theta2", "R", "region", "n_positive"};
    std::vector<std::vector<Cell>> rows(static_cast<size_t>(st.n) * sr.n);
    parallel_for(st.n, cfg.workers, [&](int i) {
        ModelParams p = cfg.model;
        p.theta2 = st.n == 1 ? st.lo : st.lo + (st.hi - st.lo) * i / (st.n - 1);
        for (int j = 0; j < sr.n; ++j) {
            p.R = sr.n == 1 ? sr.lo : sr.lo + (sr.hi - sr.lo) * j / (sr.n - 1);
            std::string reg = "other";
            if (p.mu_exceeds_rho() && p.theta2 > 0)
                reg = region_name(classify_param_region(p).region);
            const auto eqs = find_positive_equilibria(p);
            rows[static_cast<size_t>(i) * sr.n + j] = {
                p.theta2, p.R, reg, static_cast<double>(eqs.size())};
        }
    });
    for (auto& r : rows) regions.add_row(std::move(r));

    ResultTable curves;
    curves.metadata = base_metadata("2d-map", cfg);
    curves.columns = {"theta2", "f1", "f2", "f3"};
    for (int i = 0; i < st.n; ++i) {
        ModelParams p = cfg.model;
        p.theta2 = st.n == 1 ? st.lo : st.lo + (st.hi - st.lo) * i / (st.n - 1);
        curves.add_row({p.theta2, f1_curve(p, p.theta2), f2_curve(p, p.theta2),
                        f3_curve(p, p.theta2)});
    }

    out.tables.emplace_back("regions", std::move(regions));
    out.tables.emplace_back("curves", std::move(curves));
    return out;
}

CommandOutput cmd_turing(const RunConfig& cfg) {
    CommandOutput out;
    const ModelParams& p = cfg.model;

    ResultTable disp;
    disp.metadata = base_metadata("turing", cfg);
    disp.columns = {"k", "Tk", "Jk", "re1", "im1", "re2", "im2"};
    const auto eqs = find_positive_equilibria(p);
    if (!eqs.empty()) {
        const size_t bi = std::min<size_t>(cfg.branch, eqs.size() - 1);
        const State eq{eqs[bi].w, eqs[bi].b};
        for (int k = 0; k <= cfg.dispersion_kmax; ++k) {
            const auto d = dispersion(p, eq, k);
            disp.add_row({static_cast<double>(k), d.Tk, d.Jk,
                          d.eigs.first.real(), d.eigs.first.imag(),
                          d.eigs.second.real(), d.eigs.second.imag()});
        }
    }

    ResultTable curve;
    curve.metadata = base_metadata("turing", cfg);
    curve.columns = {"R", "k_star", "d1_crit", "z_star"};
    ResultTable th;
    th.metadata = base_metadata("turing", cfg);
    th.columns = {"R", "d1", "k_star", "w", "b", "omega0"};

    const ScanRange& sr = cfg.r_scan;
    if (sr.n > 0) {
        const double dR = sr.n > 1 ? (sr.hi - sr.lo) / (sr.n - 1) : 1e-3;
        for (const auto& tp :
             turing_curve(cfg.model, sr.lo, sr.hi, cfg.branch, dR))
            curve.add_row({tp.R, static_cast<double>(tp.k_star), tp.d1_crit,
                           tp.z_star});
        const auto sw = kstar_switch_points(cfg.model, sr.lo, sr.hi, cfg.branch);
        for (size_t i = 0; i < sw.size(); ++i)
            curve.metadata["switch_" + std::to_string(i)] = format_double(sw[i]);
        try {
            for (const auto& t : th_points(cfg.model, sr.lo, sr.hi, cfg.branch))
                th.add_row({t.R_star, t.d1_star, static_cast<double>(t.k_star),
                            t.equilibrium.w, t.equilibrium.b, t.omega0});
        } catch (const ConvergenceError& e) {
            th.metadata["error"] = e.what();
            out.partial = true;
        }
    }

    out.tables.emplace_back("dispersion", std::move(disp));
    out.tables.emplace_back("turing_curve", std::move(curve));
    out.tables.emplace_back("th_points", std::move(th));
    return out;
}

CommandOutput cmd_normal_form(const RunConfig& cfg) {
    CommandOutput out;
    const ScanRange& sr = cfg.r_scan;
    if (sr.n <= 0) throw ConfigError("normal-form: scan.R range required");
    const auto ths = th_points(cfg.model, sr.lo, sr.hi, cfg.branch);
    const THPoint& th = ths.front();
    const NFCoeffs nf = nf_coeffs(cfg.model, th);
    const AmplitudeSystem asys = amplitude_system(nf);
    const CriticalLines cl = critical_lines(asys);

    json rep;
    rep["command"] = "normal-form";
    rep["version"] = "0.1.0";
    rep["timestamp"] = timestamp_value();
    rep["th_point"] = {{"R", th.R_star},
                       {"d1", th.d1_star},
                       {"k_star", th.k_star},
                       {"w", th.equilibrium.w},
                       {"b", th.equilibrium.b},
                       {"omega0", th.omega0}};
    rep["spectral"] = {{"p0", cvec_json(nf.sd.p0)},   {"q0", cvec_json(nf.sd.q0)},
                       {"pk", cvec_json(nf.sd.pk)},   {"qk", cvec_json(nf.sd.qk)},
                       {"D1", cplx_json(nf.sd.D1n)},  {"D2", nf.sd.D2n}};
    rep["B"] = {{"B11", cplx_json(nf.B11)},   {"B21", cplx_json(nf.B21)},
                {"B13", nf.B13},              {"B23", nf.B23},
                {"B210", cplx_json(nf.B210)}, {"B102", cplx_json(nf.B102)},
                {"B111", nf.B111},            {"B111_im", nf.B111_im},
                {"B003", nf.B003}};
    rep["CDE"] = {{"C210", cplx_json(nf.C210)}, {"C102", cplx_json(nf.C102)},
                  {"C111", cplx_json(nf.C111)}, {"C003", cplx_json(nf.C003)},
                  {"D210", cplx_json(nf.D210)}, {"D102", cplx_json(nf.D102)},
                  {"D111", cplx_json(nf.D111)}, {"D003", cplx_json(nf.D003)},
                  {"E210", cplx_json(nf.E210)}, {"E102", cplx_json(nf.E102)},
                  {"E111", cplx_json(nf.E111)}, {"E003", cplx_json(nf.E003)}};
    rep["A"] = {{"A200", cvec_json(nf.A200)}, {"A020", cvec_json(nf.A020)},
                {"A002", cvec_json(nf.A002)}, {"A110", cvec_json(nf.A110)},
                {"A101", cvec_json(nf.A101)}, {"A011", cvec_json(nf.A011)},
                {"A210", cvec_json(nf.A210)}, {"A102", cvec_json(nf.A102)},
                {"A111", cvec_json(nf.A111)}, {"A003", cvec_json(nf.A003)}};
    rep["h"] = {{"h00110", cvec_json(nf.h00110)},  {"h00200", cvec_json(nf.h00200)},
                {"h00002", cvec_json(nf.h00002)},  {"hk0101", cvec_json(nf.hk0101)},
                {"h0k011", cvec_json(nf.h0k011)},  {"hkk002", cvec_json(nf.hkk002)},
                {"residual_max", nf.h_residual_max}};
    rep["amplitude_system"] = {{"nu1", {asys.nu1_e1, asys.nu1_e2}},
                               {"nu2", {asys.nu2_e1, asys.nu2_e2}},
                               {"kappa11", asys.kappa11},
                               {"kappa12", asys.kappa12},
                               {"kappa21", asys.kappa21},
                               {"kappa22", asys.kappa22}};
    rep["critical_lines"] = {{"T", cl.T_slope},
                             {"T1", cl.T1_slope},
                             {"T2", cl.T2_slope},
                             {"a3_rho2", {cl.a3_rho2_e1, cl.a3_rho2_e2}},
                             {"a3_s2", {cl.a3_s2_e1, cl.a3_s2_e2}}};
    out.report_json = rep.dump(2) + "\n";

    ResultTable cls;
    cls.metadata = base_metadata("normal-form", cfg);
    cls.columns = {"eps1", "eps2", "region", "stable_equilibria"};
    for (const auto& [e1, e2] : cfg.eps_points) {
        try {
            const NFRegion reg = classify_epsilon(asys, e1, e2);
            std::string stable;
            for (const auto& e : reg.equilibria)
                if (e.stable) {
                    if (!stable.empty()) stable += ";";
                    switch (e.name) {
                        case AmpEqName::A0: stable += "A0"; break;
                        case AmpEqName::A1: stable += "A1"; break;
                        case AmpEqName::A2p: stable += "A2+"; break;
                        case AmpEqName::A2m: stable += "A2-"; break;
                        case AmpEqName::A3p: stable += "A3+"; break;
                        default: stable += "A3-"; break;
                    }
                }
            cls.add_row({e1, e2, std::string("D") + std::to_string(reg.region),
                         stable});
        } catch (const std::domain_error&) {
            cls.add_row({e1, e2, std::string("boundary"), std::string("")});
            out.partial = true;
        }
    }
    out.tables.emplace_back("eps_classification", std::move(cls));
    return out;
}

CommandOutput cmd_simulate(const RunConfig& cfg) {
    CommandOutput out;
    const ModelParams& p = cfg.model;

    if (cfg.sim_kind == "ode") {
        const auto traj = integrate_ode(p, {cfg.init_w, cfg.init_b}, cfg.t_end,
                                        cfg.rtol, cfg.time_direction);
        const auto eqs = find_positive_equilibria(p);
        std::vector<State> eq_states = {{p.R / p.a, 0.0}};
        for (const auto& e : eqs) eq_states.push_back({e.w, e.b});
        const auto oc = detect_attractor(traj, eq_states);

        ResultTable tr;
        tr.metadata = base_metadata("simulate", cfg);
        tr.columns = {"t", "w", "b"};
        const size_t stride = std::max<size_t>(1, traj.t.size() / 5000);
        for (size_t i = 0; i < traj.t.size(); i += stride)
            tr.add_row({traj.t[i], traj.y[i].w, traj.y[i].b});
        if (traj.t.size() % stride != 1)
            tr.add_row({traj.t.back(), traj.y.back().w, traj.y.back().b});

        json rep;
        rep["command"] = "simulate";
        rep["kind"] = "ode";
        switch (oc.kind) {
            case AttractorKind::Equilibrium:
                rep["outcome"] = "equilibrium";
                rep["equilibrium"] = {oc.equilibrium.w, oc.equilibrium.b};
                break;
            case AttractorKind::LimitCycle:
                rep["outcome"] = "limit_cycle";
                rep["period"] = oc.period;
                rep["b_min"] = oc.b_min;
                rep["b_max"] = oc.b_max;
                break;
            default:
                rep["outcome"] = "unresolved";
                out.partial = true;
        }
        out.report_json = rep.dump(2) + "\n";
        out.tables.emplace_back("trajectory", std::move(tr));
        return out;
    }

    // PDE run
    const auto x = pde_grid(cfg.nx, p.l);
    std::vector<double> w0(cfg.nx, cfg.init_w), b0(cfg.nx, cfg.init_b);
    if (cfg.init_profile == "cosine")
        for (int i = 0; i < cfg.nx; ++i) {
            const double c = cfg.init_amp * std::cos(cfg.init_mode * x[i] / p.l);
            w0[i] += c;
            b0[i] += c;
        }
    const PdeScheme scheme =
        cfg.scheme == "imex" ? PdeScheme::Imex : PdeScheme::ExplicitCfl;
    const auto field = simulate_pde(p, w0, b0, cfg.t_end, cfg.seed_amp,
                                    cfg.k_seed, scheme, cfg.dt, cfg.snap_dt);
    const auto oc = classify_pattern(field, cfg.spatial_tol, cfg.temporal_tol);

    ResultTable snaps;
    snaps.metadata = base_metadata("simulate", cfg);
    snaps.columns = {"t", "x", "w", "b"};
    const size_t n_snap = field.t.size();
    const size_t stride = std::max<size_t>(1, n_snap / 20);
    for (size_t s = 0; s < n_snap; s += stride)
        for (int i = 0; i < field.nx; ++i)
            snaps.add_row({field.t[s], field.x[i], field.w[s][i], field.b[s][i]});
    for (int i = 0; i < field.nx; ++i)
        snaps.add_row({field.t.back(), field.x[i], field.w.back()[i],
                       field.b.back()[i]});

    ResultTable modes;
    modes.metadata = base_metadata("simulate", cfg);
    modes.columns = {"t", "mode0", "mode_dom"};
    const int dom = oc.dominant_mode > 0 ? oc.dominant_mode
                                         : std::max(cfg.k_seed, 1);
    for (size_t s = 0; s < n_snap; ++s)
        modes.add_row({field.t[s], cosine_mode(field.b[s], field.x, field.l, 0),
                       cosine_mode(field.b[s], field.x, field.l, dom)});

    json rep;
    rep["command"] = "simulate";
    rep["kind"] = "pde";
    rep["pattern"] = pattern_name(oc.kind);
    rep["dominant_mode"] = oc.dominant_mode;
    rep["amplitude"] = oc.amplitude;
    rep["period"] = oc.period;
    rep["antiphase_corr"] = oc.antiphase_corr;
    out.report_json = rep.dump(2) + "\n";
    if (oc.kind == PatternKind::Unresolved) out.partial = true;
    out.tables.emplace_back("snapshots", std::move(snaps));
    out.tables.emplace_back("modes", std::move(modes));
    return out;
}

CommandOutput cmd_state_map(const RunConfig& cfg) {
    CommandOutput out;
    const ScanRange& st = cfg.theta2_scan;
    const ScanRange& sd = cfg.d1_scan;
    if (st.n <= 0 || sd.n <= 0)
        throw ConfigError("state-map: scan.theta2 and scan.d1 ranges required");

    // columns are independent; classify them on the worker pool
    std::vector<StateMap> cols(st.n);
    parallel_for(st.n, cfg.workers, [&](int i) {
        const double t2 =
            st.n == 1 ? st.lo : st.lo + (st.hi - st.lo) * i / (st.n - 1);
        cols[i] = theta2_state_map(cfg.model, t2, t2, 1, sd.lo, sd.hi, sd.n);
    });

    ResultTable map;
    map.metadata = base_metadata("state-map", cfg);
    map.columns = {"theta2", "d1", "state"};
    map.metadata["theta2_boundary"] = format_double(cols[0].theta2_boundary);
    ResultTable biomass;
    biomass.metadata = base_metadata("state-map", cfg);
    biomass.columns = {"theta2", "b_star"};
    for (int i = 0; i < st.n; ++i) {
        const double t2 = cols[i].theta2[0];
        for (int j = 0; j < sd.n; ++j)
            map.add_row({t2, cols[i].d1[j],
                         std::string(state_name(cols[i].cells[j]))});
        ModelParams p = cfg.model;
        p.theta2 = t2;
        const auto eqs = find_positive_equilibria(p);
        biomass.add_row({t2, eqs.empty() ? 0.0 : eqs.back().b});
    }
    out.tables.emplace_back("state_map", std::move(map));
    out.tables.emplace_back("mean_biomass", std::move(biomass));
    return out;
}

void write_output(const CommandOutput& out, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    for (const auto& [name, table] : out.tables) {
        std::ofstream f(out_dir + "/" + name + ".csv", std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + out_dir + "/" + name + ".csv");
        f << table.to_csv();
    }
    if (!out.report_json.empty()) {
        std::ofstream f(out_dir + "/report.json", std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + out_dir + "/report.json");
        f << out.report_json;
    }
}

}  // namespace vegpat
