#pragma once

#include <iosfwd>

namespace dhj::cli {

/// Entry point of the `dhj` tool. Writes exactly one document to `out`
/// (JSON or CSV) and usage diagnostics to `err`. Returns 0 on success, 1 on
/// domain errors and 2 on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dhj::cli
