#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace superalg {

// Exit codes: 0 success, 1 a check failed, 2 usage or input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace superalg
