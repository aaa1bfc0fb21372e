#include <iostream>

#include "curverec/acceptance.hpp"

int main() {
    curverec::AcceptanceOptions opt;
    opt.seed = 1;
    opt.noise_fixture = CURVEREC_FIXTURE_DIR "/noise_medians.json";
    int failed = 0;
    for (const curverec::CriterionResult& r : curverec::run_acceptance(opt)) {
        std::cout << curverec::format_result(r) << "\n" << std::flush;
        if (!r.passed) ++failed;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
    return failed == 0 ? 0 : 1;
}
