#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace smooth_sdp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNotConverged = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name). Never throws; failures
/// are reported on `err` and mapped to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Header line of `bench` output.
inline constexpr const char* kBenchHeader =
    "d,n,k,seed,wall_time_s,objective,grad_norm,certified_gap";

}  // namespace smooth_sdp::cli
