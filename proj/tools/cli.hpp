#pragma once

namespace abmap::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Full command-line entry point. Returns the process exit status:
/// 0 on success, 2 on domain errors, 1 on configuration or I/O errors.
int run(int argc, const char* const* argv);

}  // namespace abmap::cli
