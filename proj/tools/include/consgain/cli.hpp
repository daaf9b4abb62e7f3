#pragma once

#include "consgain/verification.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace consgain::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDisconnected = 2,
  kVerificationFailed = 3,
};

/// Test seams. `analytic` replaces the closed-form gain checked by `verify`.
struct Hooks {
  AnalyticGain analytic = reference_gain();
};

/// Runs one command line (argv[0] is the program name) and returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        const Hooks& hooks = {});

/// Convenience overload; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Hooks& hooks = {});

}  // namespace consgain::cli
