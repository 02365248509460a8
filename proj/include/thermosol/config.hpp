#pragma once
// Scenario/twin configuration files (JSON), deterministic report emitters
// (CSV and JSON, floats printed with 17 significant digits), and the
// command-line driver.

#include <string>
#include <vector>

#include "thermosol/harness.hpp"

namespace thermosol {

// Parse a scenario from JSON text. Throws ConfigError with a field path
// (e.g. "params.grav_T: expected array of 2 numbers") on malformed input.
// grid_override > 0 replaces nx and ny before materialization.
Scenario load_scenario_json(const std::string& text, int grid_override = 0);
Scenario load_scenario_file(const std::string& path, int grid_override = 0);
TwinSpec load_twin_json(const std::string& text, int grid_override = 0);
TwinSpec load_twin_file(const std::string& path, int grid_override = 0);

// Number formatting shared by all emitters: shortest 17-significant-digit
// form; non-finite values become the JSON strings "inf", "-inf", "nan".
std::string format_double(double x);
std::string json_number(double x);

std::string trajectory_csv(const Trajectory& traj);
std::string twin_csv(const TwinReport& rep);
std::string twin_json(const TwinReport& rep);
std::string ledger_json(const DataConstants& dc,
                        const std::string& tuner_note = "");
std::string verification_json(const VerificationReport& rep);
std::string scaling_json(const ScalingResult& res);
std::string sobolev_json(const SobolevReport& rep);

// Command-line driver. Subcommands:
//   solve <scenario.json>                  trajectory CSV
//   constants <scenario.json> [--tune]     constant-ledger JSON
//   twin <twin.json>                       twin CSV (+ JSON summary)
//   scaling <twin.json> --factors a,b,c    scaling-study JSON
//   verify <scenario.json>                 verification JSON
//   sobolev [--grid N] [--samples M]       Sobolev-suite JSON
// Global flags: --out <dir>, --grid-override <n>, --time-samples <n>,
// --seed <s>. Exit codes: 0 pass, 1 check failure, 2 usage/config error,
// 3 solver blow-up.
int run_cli(const std::vector<std::string>& args);

}  // namespace thermosol
