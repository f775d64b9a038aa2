#include <exception>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vegpat/commands.hpp"
#include "vegpat/config.hpp"
#include "vegpat/model.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitPartial = 4;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Analysis and simulation of a water-vegetation reaction-diffusion model"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::vector<std::string> overrides;

    const std::map<std::string, std::function<vegpat::CommandOutput(const vegpat::RunConfig&)>>
        dispatch = {
            {"equilibria", vegpat::cmd_equilibria},
            {"bif-scan", vegpat::cmd_bif_scan},
            {"2d-map", vegpat::cmd_2d_map},
            {"turing", vegpat::cmd_turing},
            {"normal-form", vegpat::cmd_normal_form},
            {"simulate", vegpat::cmd_simulate},
            {"state-map", vegpat::cmd_state_map},
        };

    for (const auto& [name, fn] : dispatch) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON configuration file");
        sub->add_option("--set", overrides,
                        "Override a config key, e.g. --set model.R=1.5");
        sub->add_option("--out", out_dir, "Output directory");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        const vegpat::RunConfig cfg =
            vegpat::load_config_file(config_path, overrides);
        const vegpat::CommandOutput out = dispatch.at(command)(cfg);
        vegpat::write_output(out, out_dir);
        return out.partial ? kExitPartial : kExitOk;
    } catch (const vegpat::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
