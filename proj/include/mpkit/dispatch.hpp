#ifndef MPKIT_DISPATCH_HPP
#define MPKIT_DISPATCH_HPP

#include <string>
#include <vector>

namespace mpkit {

// Executes one CLI command.  Returns 0 when the verdict holds or the
// computation succeeded, 1 when a verdict is false (a witness is printed),
// and 2 on input errors; all text goes to `output`.
int run_command(const std::vector<std::string> &args, std::string &output);

}  // namespace mpkit

#endif
