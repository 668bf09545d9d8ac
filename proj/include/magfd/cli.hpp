#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "magfd/config.hpp"
#include "magfd/selftest.hpp"

namespace magfd::cli {

// Exit codes: 0 success, 1 error, 2 unconverged.
inline constexpr int exitOk = 0;
inline constexpr int exitError = 1;
inline constexpr int exitUnconverged = 2;

// Relax to the torque criterion; writes the trajectory CSV and final field
// dump, prints final energies and reduced mean M.
int cmdRelax(const SimSpec& spec, std::ostream& out);

// Fixed number of Euler steps with periodic sampling; same outputs.
int cmdRun(const SimSpec& spec, long steps, std::ostream& out);

struct BenchRow {
    int size = 0;
    bool ok = false;
    StepTiming median; // seconds
};

// Per-step timing sweep over N^3 problems: 3 warm-up steps discarded, then
// the median of `measured` steps per size.  Sizes that fail to allocate are
// skipped with a warning.
int cmdBench(const std::vector<int>& sizes, const SimSpec& tmpl, const std::string& csvPath,
             std::ostream& out, int measured = 20, std::vector<BenchRow>* rowsOut = nullptr);

int cmdSelftest(const selftest::Options& opts, std::ostream& out);

} // namespace magfd::cli
