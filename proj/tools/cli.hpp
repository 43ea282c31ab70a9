#ifndef KGCODE_TOOLS_CLI_HPP
#define KGCODE_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace kgcode {

/// Runs one subcommand. args excludes the program name. Exit codes: 0 ok,
/// 1 negative verdict, 2 input error, 3 precondition error, 4 internal.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace kgcode

#endif  // KGCODE_TOOLS_CLI_HPP
