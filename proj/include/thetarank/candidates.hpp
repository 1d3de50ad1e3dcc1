#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "thetarank/curves.hpp"

namespace thetarank {

/// One searched n with its provenance and whatever diagnostics the
/// pipeline has filled in so far.
struct CandidateRecord {
    BigInt n;
    ThetaParams theta = ThetaParams::pi_over_3();
    std::vector<std::pair<std::uint64_t, std::uint64_t>> provenance;
    int omega_odd = 0;
    std::map<std::uint32_t, double> nagao_values;
    std::optional<int> selmer;
    std::optional<int> rank_lb;
    std::optional<int> rank_ub;
    std::vector<PointQ> points;
};

/// Squarefree part of p q (p + q) (2 r q + p (r - s)). Throws for
/// non-positive inputs or gcd(p, q) > 1.
BigInt kan_number(std::uint64_t p, std::uint64_t q, const ThetaParams& theta);

/// Number of distinct odd primes dividing n (n >= 1).
int omega_odd(const BigInt& n);

/// n mod 24 in the conjectured residue set for pi/3 or 2pi/3; throws for
/// other angles.
bool yoshida_class(const BigInt& n, const ThetaParams& theta);

struct CandidateGrid {
    std::uint64_t pmin = 1;
    std::uint64_t pmax = 1;
    std::uint64_t qmin = 1;
    std::uint64_t qmax = 1;
    int min_omega = 0;
};

/// One record per distinct n over coprime (p, q) in the grid with
/// omega_odd(n) >= min_omega; sorted by n, provenance merged in (p, q)
/// order.
std::vector<CandidateRecord> generate_candidates(const CandidateGrid& grid, const ThetaParams& theta);

}  // namespace thetarank
