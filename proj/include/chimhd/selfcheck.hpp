/// @file selfcheck.hpp
/// @brief Invariant battery behind `chimhd check`.
#pragma once

#include <string>
#include <vector>

namespace chimhd {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Operator identities on random fields, the surface-tension oracle and a few
/// steps of each scenario. Deterministic for a given seed.
std::vector<CheckResult> run_selfcheck(unsigned seed = 20240917u);

}  // namespace chimhd
