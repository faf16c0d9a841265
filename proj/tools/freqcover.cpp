// SPDX-License-Identifier: Apache-2.0
//
// freqcover — multi-frequency completeness laboratory.
//
//   freqcover <verb> --config cfg.json [flags]
//
// Verbs: validate, eigs, solve, field, check, sweep, greedy, density,
// optimality, report.  Artifacts land in the configured output directory.

#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "freqcover/run.hpp"

namespace {

struct VerbSpec {
  const char* name;
  const char* help;
};

constexpr VerbSpec kVerbs[] = {
    {"validate", "Check the coefficient bounds pointwise; write validate.json"},
    {"eigs", "Estimate the leading Dirichlet eigenfrequencies; write eigs.json"},
    {"solve", "Solve one boundary-value problem at --omega; write solve.csv"},
    {"field", "Evaluate the constraint field at --omega; write field.csv/field.pgm"},
    {"check", "Evaluate completeness of --tuple; write check.json/badset.pgm"},
    {"sweep", "Exhaustive k-tuple sweep over the candidate set; write sweep.json"},
    {"greedy", "Greedy bad-set reduction over the candidate set; write greedy.json"},
    {"density", "Random-tuple completeness density experiment; write density.json"},
    {"optimality", "Sweep every tuple size k in [1, dim+2]; write optimality.json"},
    {"report", "Merge existing JSON artifacts into report.json"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"freqcover — multi-frequency completeness laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  double omega = 0.0;
  std::string bc;
  std::vector<double> tuple;
  int k = 0;
  bool csv = false;
  std::string output_dir;

  for (const VerbSpec& spec : kVerbs) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    sub->add_option("--config", config_path, "Run configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--output", output_dir, "Override the configured output directory");
    const std::string verb = spec.name;
    if (verb == "solve" || verb == "field")
      sub->add_option("--omega", omega, "Frequency")->required();
    if (verb == "solve")
      sub->add_option("--bc", bc, "Boundary expression (default: first configured)");
    if (verb == "check")
      sub->add_option("--tuple", tuple, "Comma-separated frequency tuple")
          ->required()
          ->delimiter(',');
    if (verb == "sweep") {
      sub->add_option("--k", k, "Tuple size (default: configured search.k)");
      sub->add_flag("--csv", csv, "Also write the per-tuple table as sweep.csv");
    }
  }

  CLI11_PARSE(app, argc, argv);

  CLI::App* sub = app.get_subcommands().front();
  const std::string verb = sub->get_name();

  freqcover::RunFlags flags;
  if (sub->count("--output")) flags.output_dir = output_dir;
  if (verb == "solve" || verb == "field") flags.omega = omega;
  if (verb == "solve" && sub->count("--bc")) flags.bc = bc;
  if (verb == "check") flags.tuple = tuple;
  if (verb == "sweep" && sub->count("--k")) flags.k = k;
  flags.csv = csv;

  try {
    const freqcover::RunConfig config = freqcover::load_config(config_path);
    return freqcover::run_command(verb, config, flags, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return freqcover::kExitFault;
  }
}
