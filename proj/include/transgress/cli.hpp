#pragma once

namespace transgress {

// list / verify / sweep / all. Exit 0 when every check passes, 1 on any
// failing check, 2 on configuration errors.
int run_cli(int argc, const char* const* argv);

}  // namespace transgress
