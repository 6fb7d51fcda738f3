#pragma once
// Command dispatch for the batch tool: one RunConfig in, one structured
// report out. Kept apart from main() so tests can drive commands in-process
// and assert byte-identical reports.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hdfol/forcing.hpp"
#include "json.hpp"

namespace hdfolcli {

struct RunConfig {
  std::string command;  // validate|check|translate|rigidify|encode|decode|
                        // sat|force|generic|omit|entail
  std::string sig_path;
  std::string theory_path;
  std::string model_path;
  std::string sentence;  // inline sentence text
  std::string subst_path;
  std::string forcing_path;
  std::string types_path;
  std::string at;             // nominal: rigidify target, force query world
  std::string condition;      // force/generic: start condition name
  std::size_t world = 0;      // decode: which world to extract at
  hdfol::SatBudget budget;
  int star_bound = 3;
  int term_depth = 2;
  std::uint64_t seed = 0;     // recorded in the report
  int model_depth = 4;        // generic: term-model depth
  std::vector<std::string> constructors;  // entail
  std::string model_out;      // write resulting model file here
  std::string theory_out;     // write resulting theory file here
  std::string sig_out;        // write resulting signature file here
};

struct CliResult {
  int exit_code = 0;  // 0 ok, 1 property fails, 2 out of budget/undecided,
                      // 3 input error
  nlohmann::ordered_json report;
};

// Executes the command. Never throws: input problems come back as exit 3
// with the diagnostic in report["error"].
CliResult run(const RunConfig& cfg);

}  // namespace hdfolcli
