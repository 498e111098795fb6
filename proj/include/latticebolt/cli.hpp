#pragma once

namespace lbm {

/// Entry point shared by the installed binary and the in-process CLI tests.
/// Returns 0 on success, 1 on configuration/runtime failures, the CLI
/// parser's own exit code on usage errors.
int run_cli(int argc, const char* const* argv);

}  // namespace lbm
