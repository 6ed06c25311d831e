#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fnet::cli {

// Exit codes: 0 no error findings, 1 error-severity findings, 2 usage
// errors, unreadable files or internal faults. Diagnostics go to `out`,
// operational errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fnet::cli
