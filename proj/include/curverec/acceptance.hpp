#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "curverec/io.hpp"

namespace curverec {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    // Measured quantities; deterministic for a given seed.
    Json metrics = Json::object();
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::uint64_t seed = 1;
    // Noise regression fixture; an empty path or a missing file skips the
    // comparison and only checks monotonicity.
    std::string noise_fixture;
};

CriterionResult check_derivation(const AcceptanceOptions& opt);
CriterionResult check_residual_at_truth(const AcceptanceOptions& opt);
CriterionResult check_global_solve(const AcceptanceOptions& opt);
CriterionResult check_pose_recovery(const AcceptanceOptions& opt);
CriterionResult check_linearization(const AcceptanceOptions& opt);
CriterionResult check_densification(const AcceptanceOptions& opt);
CriterionResult check_cross_ratio(const AcceptanceOptions& opt);
CriterionResult check_noise(const AcceptanceOptions& opt);
CriterionResult check_determinism(const AcceptanceOptions& opt);

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);

// One line per criterion: "PASS  3 global solve round-trip  ...".
std::string format_result(const CriterionResult& r);

// Median parameter errors per noise level, as stored in the regression
// fixture.
Json noise_medians(std::uint64_t seed);

// Pipeline outputs (scene through pairs) for a seed, keyed by file name.
std::map<std::string, std::string> pipeline_artifacts(std::uint64_t seed);

// Criterion outcomes and metrics without timings.
Json acceptance_to_json(const std::vector<CriterionResult>& results);

}  // namespace curverec
