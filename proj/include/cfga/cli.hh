/* cli.hh -- command-line front end.
 *
 * Exit codes are the machine contract: 0 = positive answer (in language /
 * empty / finite / contained / success), 1 = negative answer, 2 = usage or
 * input error, 3 = resource cap exceeded.
 */

#ifndef CFGA_CLI_HH_
#define CFGA_CLI_HH_

#include <iostream>
#include <string>
#include <vector>

namespace cfga::cli {

int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
        std::ostream& err = std::cerr);

} // namespace cfga::cli

#endif // CFGA_CLI_HH_
