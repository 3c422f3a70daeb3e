#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace surfbound {

// Full command-line front end.  Returns the process exit status:
//   0  success
//   2  a computed "none" (no rule, no witness, no generating vector, ...)
//   1  usage or input errors
// `out` receives the rendered result (text, or one JSON document with
// --json), `err` the error/usage messages.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace surfbound
