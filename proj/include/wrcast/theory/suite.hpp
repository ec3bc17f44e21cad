#pragma once

#include "wrcast/theory/conjecture.hpp"
#include "wrcast/theory/region_map.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace wrcast::theory {

struct SuiteCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct TheorySuiteReport {
    std::vector<SuiteCheck> checks;
    std::vector<RegionMap> maps;  // l1 > l2 over {1..10}
    std::vector<ConjectureRow> conjecture;

    bool passed() const;
};

/// Random-instance checks of the closed forms, the exhaustive region maps and
/// the Monte Carlo study. Deterministic in seed.
TheorySuiteReport run_theory_suite(std::uint64_t seed);

void write_suite_json(const TheorySuiteReport& report, std::ostream& out);

}  // namespace wrcast::theory
