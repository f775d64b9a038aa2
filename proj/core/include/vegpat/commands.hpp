#ifndef VEGPAT_COMMANDS_HPP
#define VEGPAT_COMMANDS_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "vegpat/config.hpp"
#include "vegpat/table.hpp"

namespace vegpat {

struct CommandOutput {
    std::vector<std::pair<std::string, ResultTable>> tables;
    std::string report_json;  // empty when the command emits tables only
    bool partial = false;     // some cells unresolved; exit code 4
};

CommandOutput cmd_equilibria(const RunConfig& cfg);
CommandOutput cmd_bif_scan(const RunConfig& cfg);
CommandOutput cmd_2d_map(const RunConfig& cfg);
CommandOutput cmd_turing(const RunConfig& cfg);
CommandOutput cmd_normal_form(const RunConfig& cfg);
CommandOutput cmd_simulate(const RunConfig& cfg);
CommandOutput cmd_state_map(const RunConfig& cfg);

/// Write each table as <out_dir>/<name>.csv and the report (if any) as
/// <out_dir>/report.json.
void write_output(const CommandOutput& out, const std::string& out_dir);

/// Run `fn(i)` for i in [0, n) on a pool of `workers` threads
/// (0 = hardware concurrency). Exceptions are rethrown on the caller.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

}  // namespace vegpat

#endif
