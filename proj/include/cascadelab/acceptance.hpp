#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cascadelab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;   // human-readable: values, z-scores, bands
    std::string summary;  // deterministic digest compared by the determinism criterion
    double seconds = 0.0;
};

enum class AcceptanceProfile { Quick, Full };

// Runs the acceptance criteria (1..13 for Full, a fast subset for Quick),
// then re-runs each selected criterion with the same seed and compares the
// deterministic digests (criterion 14). z_threshold scales the statistical
// bands (default 3 standard errors).
std::vector<CriterionResult> run_acceptance(AcceptanceProfile profile, std::uint64_t seed,
                                            double z_threshold = 3.0);

// One "PASS"/"FAIL" line per criterion; returns true iff all passed.
bool print_acceptance(std::ostream& out, const std::vector<CriterionResult>& results);

}  // namespace cascadelab
