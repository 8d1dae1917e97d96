// Shared helpers for the unit tests.
#pragma once

#include <random>

#include "chimhd/grid.hpp"

namespace test {

inline chimhd::CellField random_cells(const chimhd::GridSpec& g, std::mt19937_64& rng, double lo = -1.0,
                                      double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    chimhd::CellField f(g);
    for (double& v : f.values()) v = u(rng);
    return f;
}

/// Random face field with zero boundary-normal entries.
inline chimhd::FaceField random_faces(const chimhd::GridSpec& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    chimhd::FaceField f(g);
    for (double& v : f.values()) v = u(rng);
    f.zero_boundary();
    return f;
}

}  // namespace test
