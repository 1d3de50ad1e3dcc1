#pragma once

#include <cstdint>

#include "thetarank/curves.hpp"

namespace thetarank {

/// Order of E(F_p) and the Frobenius trace at a good prime.
struct LocalCount {
    std::uint64_t p = 0;
    std::uint64_t np = 0;  // includes the point at infinity
    std::int64_t ap = 0;   // p + 1 - np
};

/// Character-sum count of E(F_p). Throws std::invalid_argument for p = 2 or
/// a prime of bad reduction.
LocalCount count_points(const CurveQ& e, std::uint64_t p);

/// Same count with the coefficients already reduced mod p; no checks.
LocalCount count_points_reduced(std::uint64_t a2, std::uint64_t a4, std::uint64_t p);

}  // namespace thetarank
