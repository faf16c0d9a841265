// SPDX-License-Identifier: Apache-2.0
//
// Verb dispatcher behind the command-line tool.  Each verb reads the run
// configuration, writes its artifacts under the output directory (atomic
// writes, fixed file names), prints a one-line summary, and returns an exit
// status:
//   0  success
//   2  a completeness check found no complete tuple (check / sweep / greedy)
//   1  fault (bad config, missing flag, solver failure, I/O error)

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "freqcover/config.hpp"

namespace freqcover {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFault = 1;
inline constexpr int kExitIncomplete = 2;

struct RunFlags {
  std::optional<double> omega;              // solve, field
  std::optional<std::string> bc;            // solve (defaults to the first config bc)
  std::optional<std::vector<double>> tuple; // check
  std::optional<int> k;                     // sweep override
  bool csv = false;                         // sweep: also write sweep.csv
  std::optional<std::string> output_dir;    // overrides config.output_dir
};

// Verbs: validate, eigs, solve, field, check, sweep, greedy, density,
// optimality, report.
int run_command(const std::string& verb, const RunConfig& config, const RunFlags& flags,
                std::ostream& out, std::ostream& err);

}  // namespace freqcover
