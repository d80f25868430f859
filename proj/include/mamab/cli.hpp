#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mamab/experiment.hpp"

namespace mamab {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitBoundViolation = 3,
  kExitIo = 4,
};

// args excludes the program name. Progress and errors go to err; artifacts
// only to the output directory.
int run_cli(const std::vector<std::string>& args, std::ostream& err);

// CSV artifacts of one experiment: regret.csv, network_regret.csv,
// counts.csv, comm_effect.csv, bounds.csv.
void write_report_csvs(const std::filesystem::path& dir, const ExperimentResult& result);

// Shortest round-trip decimal form; the CSV writers use it for every real.
std::string format_real(double v);

}  // namespace mamab
