#include "vegpat/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace vegpat {

namespace {

using nlohmann::json;

/// Pull known keys out of `obj`, erasing as we go; anything left over is an
/// unknown key and reported with its path.
struct Section {
    json obj;
    std::string path;

    Section(json o, std::string p) : obj(std::move(o)), path(std::move(p)) {
        if (!obj.is_object())
            throw ConfigError("config: section '" + path + "' must be an object");
    }

    template <typename T>
    void take(const char* key, T& dst) {
        auto it = obj.find(key);
        if (it == obj.end()) return;
        try {
            dst = it->get<T>();
        } catch (const json::exception& e) {
            throw ConfigError("config: bad value for '" + path + "." + key +
                              "': " + e.what());
        }
        obj.erase(it);
    }

    json take_sub(const char* key) {
        auto it = obj.find(key);
        if (it == obj.end()) return json::object();
        json sub = *it;
        obj.erase(it);
        return sub;
    }

    void finish() const {
        if (!obj.empty())
            throw ConfigError("config: unknown key '" + path + "." +
                              obj.begin().key() + "'");
    }
};

void read_scan(Section& s, const char* key, ScanRange& r) {
    json sub = s.take_sub(key);
    Section sec(std::move(sub), s.path + "." + key);
    sec.take("lo", r.lo);
    sec.take("hi", r.hi);
    sec.take("n", r.n);
    sec.finish();
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
    }
    RunConfig c;
    Section top(std::move(root), "");

    {
        Section m(top.take_sub("model"), "model");
        m.take("R", c.model.R);
        m.take("a", c.model.a);
        m.take("delta", c.model.delta);
        m.take("rho", c.model.rho);
        m.take("mu", c.model.mu);
        m.take("theta1", c.model.theta1);
        m.take("theta2", c.model.theta2);
        m.take("d1", c.model.d1);
        m.take("d2", c.model.d2);
        m.take("l", c.model.l);
        m.finish();
    }
    {
        Section s(top.take_sub("scan"), "scan");
        read_scan(s, "R", c.r_scan);
        read_scan(s, "theta2", c.theta2_scan);
        read_scan(s, "d1", c.d1_scan);
        s.take("branch", c.branch);
        s.take("homoclinic_lo", c.homoclinic_lo);
        s.take("homoclinic_hi", c.homoclinic_hi);
        s.take("time_direction", c.time_direction);
        s.take("dispersion_kmax", c.dispersion_kmax);
        s.finish();
    }
    {
        Section s(top.take_sub("simulate"), "simulate");
        s.take("kind", c.sim_kind);
        s.take("init_w", c.init_w);
        s.take("init_b", c.init_b);
        s.take("t_end", c.t_end);
        s.take("rtol", c.rtol);
        s.take("nx", c.nx);
        s.take("seed_amp", c.seed_amp);
        s.take("k_seed", c.k_seed);
        s.take("scheme", c.scheme);
        s.take("dt", c.dt);
        s.take("snap_dt", c.snap_dt);
        s.take("init_profile", c.init_profile);
        s.take("init_amp", c.init_amp);
        s.take("init_mode", c.init_mode);
        s.finish();
    }
    {
        Section s(top.take_sub("normal_form"), "normal_form");
        json pts = s.take_sub("eps_points");
        if (!pts.empty()) {
            if (!pts.is_array())
                throw ConfigError("config: normal_form.eps_points must be an array");
            for (const auto& pt : pts) {
                if (!pt.is_array() || pt.size() != 2)
                    throw ConfigError("config: eps_points entries must be [eps1, eps2]");
                c.eps_points.emplace_back(pt[0].get<double>(), pt[1].get<double>());
            }
        }
        s.finish();
    }
    {
        Section s(top.take_sub("tolerances"), "tolerances");
        s.take("spatial", c.spatial_tol);
        s.take("temporal", c.temporal_tol);
        s.finish();
    }
    top.take("workers", c.workers);
    top.finish();

    if (c.sim_kind != "ode" && c.sim_kind != "pde")
        throw ConfigError("config: simulate.kind must be 'ode' or 'pde'");
    if (c.scheme != "imex" && c.scheme != "explicit")
        throw ConfigError("config: simulate.scheme must be 'imex' or 'explicit'");
    if (c.init_profile != "constant" && c.init_profile != "cosine")
        throw ConfigError("config: simulate.init_profile must be 'constant' or 'cosine'");
    try {
        c.model.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: model.") + e.what());
    }
    return c;
}

std::string serialize_config(const RunConfig& c) {
    json root;
    root["model"] = {{"R", c.model.R},       {"a", c.model.a},
                     {"delta", c.model.delta}, {"rho", c.model.rho},
                     {"mu", c.model.mu},     {"theta1", c.model.theta1},
                     {"theta2", c.model.theta2}, {"d1", c.model.d1},
                     {"d2", c.model.d2},     {"l", c.model.l}};
    root["scan"] = {
        {"R", {{"lo", c.r_scan.lo}, {"hi", c.r_scan.hi}, {"n", c.r_scan.n}}},
        {"theta2",
         {{"lo", c.theta2_scan.lo}, {"hi", c.theta2_scan.hi}, {"n", c.theta2_scan.n}}},
        {"d1", {{"lo", c.d1_scan.lo}, {"hi", c.d1_scan.hi}, {"n", c.d1_scan.n}}},
        {"branch", c.branch},
        {"homoclinic_lo", c.homoclinic_lo},
        {"homoclinic_hi", c.homoclinic_hi},
        {"time_direction", c.time_direction},
        {"dispersion_kmax", c.dispersion_kmax}};
    root["simulate"] = {{"kind", c.sim_kind},     {"init_w", c.init_w},
                        {"init_b", c.init_b},     {"t_end", c.t_end},
                        {"rtol", c.rtol},         {"nx", c.nx},
                        {"seed_amp", c.seed_amp}, {"k_seed", c.k_seed},
                        {"scheme", c.scheme},     {"dt", c.dt},
                        {"snap_dt", c.snap_dt},   {"init_profile", c.init_profile},
                        {"init_amp", c.init_amp}, {"init_mode", c.init_mode}};
    json pts = json::array();
    for (const auto& [e1, e2] : c.eps_points) pts.push_back({e1, e2});
    root["normal_form"] = {{"eps_points", pts}};
    root["tolerances"] = {{"spatial", c.spatial_tol}, {"temporal", c.temporal_tol}};
    root["workers"] = c.workers;
    return root.dump(2) + "\n";
}

void apply_override(std::string& json_text, const std::string& assignment) {
    const size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("config: --set expects key=value, got '" + assignment + "'");
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);

    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
    }
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::exception&) {
        value = raw;  // bare strings allowed
    }

    json* node = &root;
    std::istringstream is(path);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(is, part, '.')) parts.push_back(part);
    if (parts.empty()) throw ConfigError("config: empty --set key");
    for (size_t i = 0; i + 1 < parts.size(); ++i) node = &(*node)[parts[i]];
    (*node)[parts.back()] = value;
    json_text = root.dump(2) + "\n";
}

RunConfig load_config_file(const std::string& path,
                           const std::vector<std::string>& overrides) {
    std::string text = "{}";
    if (!path.empty()) {
        std::ifstream f(path);
        if (!f) throw ConfigError("config: cannot open '" + path + "'");
        std::ostringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }
    for (const auto& o : overrides) apply_override(text, o);
    return parse_config(text);
}

}  // namespace vegpat
