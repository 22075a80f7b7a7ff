#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "optomech/fock_oracle.hpp"
#include "optomech/state_moments.hpp"
#include "optomech/system.hpp"

namespace optomech {

enum class Mode { evolve, sweep, oracle_check, mathieu };

std::optional<Mode> parse_mode(const std::string& s);

struct AxisSpec {
    std::string name;
    std::vector<double> values;
};

struct RunConfig {
    Mode mode = Mode::evolve;
    SystemParams system;
    InitialState init;
    double tau_max = 0.0;
    std::size_t samples = 257;
    bool lab_frame = false;

    std::vector<AxisSpec> axes;
    double sweep_tau = 0.0;
    unsigned workers = 0;  // 0: hardware concurrency

    SolverOptions solver;

    std::optional<Cutoffs> cutoffs;
    double oracle_dt = 0.0;
    double oracle_tol = 1e-3;
    std::size_t oracle_points = 1;

    std::string out_path;
};

// Flat key = value text. "[section]" lines group keys; '#' starts a comment.
// Returns section.key -> value, rejecting duplicates and malformed lines.
std::map<std::string, std::string> parse_key_values(std::istream& in, const std::string& origin);

// Builds a RunConfig from file entries (section.key) and flag overrides
// (bare key). Unknown keys, misplaced keys and bad values raise ConfigError
// naming the key.
RunConfig build_run_config(Mode mode, const std::map<std::string, std::string>& file_entries,
                           const std::map<std::string, std::string>& overrides);

// optomech <mode> --config FILE [--key value ...] --out FILE
RunConfig parse_command_line(const std::vector<std::string>& args);

// name:start:stop:count[:linear|:log] or name:[v1,v2,...]
AxisSpec parse_axis(const std::string& text);

}  // namespace optomech
