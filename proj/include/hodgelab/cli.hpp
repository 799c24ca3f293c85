#pragma once

// Batch runner behind the command-line tool. Exit codes: 0 when every check
// passed its tolerance, 1 when any check failed (or a computation broke down),
// 2 on configuration errors (bad flags, malformed config file, unparsable
// field strings).

namespace hodgelab {

int run_cli(int argc, const char* const* argv);

}  // namespace hodgelab
