#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace zcap::cli {

// Exit codes: 0 success / collinear / pass, 1 negative verdict, 2 usage or
// parse error, 3 I/O failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zcap::cli
