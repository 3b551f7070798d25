#pragma once

#include <iosfwd>

namespace ccdsk::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInfeasible = 1;
inline constexpr int kBadInput = 2;
inline constexpr int kSizeGuard = 3;
inline constexpr int kSynthesisFailed = 4;
inline constexpr int kVerificationFailed = 5;

/// Entry point for the ccdsk tool: analyze, protocol, verify, example, reduce.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ccdsk::cli
