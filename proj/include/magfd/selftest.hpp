#pragma once

#include <string>
#include <vector>

#include "magfd/backend.hpp"

namespace magfd::selftest {

struct Options {
    // Fault-injection hook: flips the sign of the Kxx lattice before the
    // tensor checks, which must make the trace check fail.
    bool tamperTensorSign = false;
    BackendKind backend = BackendKind::serial;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Oracle-equivalence and consistency suite: FFT demag vs direct sum on a
// fixed grid set (both precisions), tensor trace/symmetry checks, and the
// energy-gradient check.
std::vector<CheckResult> run(const Options& opts = {});

bool allPassed(const std::vector<CheckResult>& results);

} // namespace magfd::selftest
