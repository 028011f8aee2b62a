// Command-line front end. `run` takes the arguments after the program name
// and returns the process exit status.

#ifndef FOML_TOOLS_CLI_HPP_
#define FOML_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace foml::cli {

enum Exit : int {
  kOk = 0,
  kNegative = 1,     // countermodel, unsatisfied model, fuzz discrepancy
  kResourceOut = 2,  // prover or search limit reached
  kUsage = 64,
  kDataError = 65,
  kNoInput = 66,
  kUnavailable = 69,  // external solver could not be run
  kInternal = 70,
};

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace foml::cli

#endif  // FOML_TOOLS_CLI_HPP_
