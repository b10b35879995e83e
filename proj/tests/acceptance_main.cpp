// Runs the full acceptance battery; exit 0 iff every criterion passes.
// CASCADE_LAB_SEED overrides the default master seed, CASCADE_LAB_QUICK=1
// selects the fast subset.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "cascadelab/acceptance.hpp"

int main() {
    std::uint64_t seed = 0xCA5CADE1ABULL;
    if (const char* env = std::getenv("CASCADE_LAB_SEED"))
        seed = std::strtoull(env, nullptr, 0);
    auto profile = cascadelab::AcceptanceProfile::Full;
    if (const char* env = std::getenv("CASCADE_LAB_QUICK"))
        if (std::string(env) == "1") profile = cascadelab::AcceptanceProfile::Quick;
    const auto results = cascadelab::run_acceptance(profile, seed);
    const bool ok = cascadelab::print_acceptance(std::cout, results);
    return ok ? 0 : 1;
}
