#pragma once

namespace swsgd::cli {

/// Entry point shared by the binary and the in-process tests.
/// Exit status: 0 success, 1 usage or configuration error, 2 runtime
/// failure (divergence, no crossing, I/O).
int cli_main(int argc, const char* const* argv);

}  // namespace swsgd::cli
