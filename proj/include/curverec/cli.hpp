#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "curverec/solver.hpp"

namespace curverec {

enum class Command { gen, observe, solve, densify, correspond, plot, selftest };

const char* to_string(Command c);
Command command_from_string(const std::string& s);

struct RunConfig {
    Command command = Command::selftest;
    std::uint64_t seed = 1;
    int frames = 6;
    int samples = kDefaultSamples;
    bool nuisance = true;
    double noise_sigma = 0.0;
    double tol = 1e-10;
    Method method = Method::nonlinear;
    // Input files in the order the command expects them:
    //   observe: frames.json; solve: obs.json; densify: frames.json, solution.json;
    //   correspond: views.json; plot: frames.json or curve3d.json.
    std::vector<std::string> inputs;
    // Output file, or directory for gen, plot and selftest.
    std::string output;
    // selftest only.
    std::string noise_fixture;
};

// Throws RangeError when a field violates its invariant.
void validate(const RunConfig& config);

// Exit status: 0 on success, 1 on validation errors (one line
// "error: <kind>: <message>" on err), 2 on solver non-convergence with the
// best candidate still written, 1 when a selftest criterion fails.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace curverec
