#ifndef NESTAR_CLI_HPP
#define NESTAR_CLI_HPP

#include <string>
#include <vector>

namespace nestar::cli {

/// Runs one CLI invocation (argv without the program name). Exit codes:
/// 0 success, 2 configuration error, 3 numerical failure.
int run(const std::vector<std::string>& args);

}  // namespace nestar::cli

#endif
