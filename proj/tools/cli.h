#ifndef NOMARG_TOOLS_CLI_H_
#define NOMARG_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace nomarg::cli {

// Runs one command line (without the program name). Returns the process exit
// code: 0 on success, 1 on bad input or usage, 2 on internal failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nomarg::cli

#endif  // NOMARG_TOOLS_CLI_H_
