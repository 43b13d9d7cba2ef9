#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qbounds {

/// Entry point behind the qbounds binary; separated so tests can drive the
/// command surface in-process.  Returns the process exit code: 0 success,
/// 2 invalid input, 3 internal inconsistency.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qbounds
