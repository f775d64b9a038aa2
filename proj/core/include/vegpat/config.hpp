#ifndef VEGPAT_CONFIG_HPP
#define VEGPAT_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "vegpat/model.hpp"

namespace vegpat {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ScanRange {
    double lo = 0.0, hi = 0.0;
    int n = 0;
};

/// One run's full configuration. JSON on disk, sections: "model", "scan",
/// "simulate", "normal_form", "tolerances", "workers". Unknown keys are
/// rejected with their path; parse -> serialize -> parse is the identity.
struct RunConfig {
    ModelParams model;

    // scans
    ScanRange r_scan{0.0, 0.0, 0};
    ScanRange theta2_scan{0.0, 0.0, 0};
    ScanRange d1_scan{0.0, 0.0, 0};
    int branch = 0;
    double homoclinic_lo = 0.0, homoclinic_hi = 0.0;  // 0,0 disables the scan
    int time_direction = 1;
    int dispersion_kmax = 30;

    // simulation
    std::string sim_kind = "ode";       // "ode" | "pde"
    double init_w = 1.0, init_b = 1.0;  // ODE initial state / PDE base level
    double t_end = 1000.0;
    double rtol = 1e-8;
    int nx = 256;
    double seed_amp = 1e-6;
    int k_seed = 0;
    std::string scheme = "imex";  // "imex" | "explicit"
    double dt = 1e-2;
    double snap_dt = 0.5;
    std::string init_profile = "constant";  // "constant" | "cosine"
    double init_amp = 0.0;                  // cosine amplitude added on top
    int init_mode = 0;                      // cosine mode index

    // normal form sample points
    std::vector<std::pair<double, double>> eps_points;

    // classification tolerances
    double spatial_tol = 1e-3;
    double temporal_tol = 1e-4;

    int workers = 0;  // 0 = hardware concurrency
};

RunConfig parse_config(const std::string& json_text);
std::string serialize_config(const RunConfig& cfg);

/// Apply a `--set section.key=value` override; value is parsed as JSON
/// when possible, else taken as a string.
void apply_override(std::string& json_text, const std::string& assignment);

RunConfig load_config_file(const std::string& path,
                           const std::vector<std::string>& overrides);

}  // namespace vegpat

#endif
