#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "optomech/config.hpp"

namespace optomech {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_regime = 3, exit_oracle_mismatch = 4 };

// 17 significant digits, general notation, locale independent.
std::string format_number(double x);

void run_evolve(const RunConfig& cfg, std::ostream& csv);
void run_sweep(const RunConfig& cfg, std::ostream& csv);
// Returns true when every point agrees within cfg.oracle_tol.
bool run_oracle_check(const RunConfig& cfg, std::ostream& csv, std::ostream& summary);
void run_mathieu(const RunConfig& cfg, std::ostream& csv, std::ostream& summary);

// args excludes the program name. CSV goes to cfg.out_path.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace optomech
