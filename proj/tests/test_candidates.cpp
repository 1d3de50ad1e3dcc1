#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "thetarank/candidates.hpp"
#include "thetarank/descent.hpp"

using namespace thetarank;

namespace {

const ThetaParams kPi3 = ThetaParams::pi_over_3();
const ThetaParams k2Pi3 = ThetaParams::two_pi_over_3();

// Squarefree part by trial division.
std::uint64_t squarefree_naive(std::uint64_t m) {
    std::uint64_t out = 1;
    for (std::uint64_t p = 2; p * p <= m; ++p) {
        int k = 0;
        while (m % p == 0) {
            m /= p;
            ++k;
        }
        if (k % 2) out *= p;
    }
    return out * m;
}

int omega_odd_naive(std::uint64_t m) {
    int count = 0;
    for (std::uint64_t p = 3; p * p <= m; p += 2)
        if (m % p == 0) {
            ++count;
            while (m % p == 0) m /= p;
        }
    while (m % 2 == 0) m /= 2;
    return count + (m > 1 ? 1 : 0);
}

std::uint64_t kan_naive(std::uint64_t p, std::uint64_t q, const ThetaParams& t) {
    const auto r = static_cast<std::uint64_t>(t.r());
    const auto rs = static_cast<std::uint64_t>(t.r() - t.s());
    return squarefree_naive(p * q * (p + q) * (2 * r * q + p * rs));
}

}  // namespace

TEST_CASE("kan numbers of small pairs") {
    CHECK(kan_number(1, 1, kPi3) == 10);
    CHECK(kan_number(1, 2, kPi3) == 6);
    CHECK(kan_number(2, 1, kPi3) == 1);
    CHECK(kan_number(1, 1, k2Pi3) == 14);
    CHECK_THROWS_AS(kan_number(0, 1, kPi3), std::invalid_argument);
    CHECK_THROWS_AS(kan_number(2, 4, kPi3), std::invalid_argument);
}

TEST_CASE("kan numbers are not symmetric in p and q") {
    CHECK(kan_number(1, 2, kPi3) != kan_number(2, 1, kPi3));
    for (std::uint64_t p = 1; p <= 60; ++p)
        for (std::uint64_t q = 1; q <= 60; ++q) {
            if (std::gcd(p, q) != 1) continue;
            CHECK(kan_number(p, q, kPi3) == kan_naive(p, q, kPi3));
            CHECK(kan_number(p, q, k2Pi3) == kan_naive(p, q, k2Pi3));
        }
}

TEST_CASE("omega_odd against trial division") {
    CHECK(omega_odd(1) == 0);
    CHECK(omega_odd(2) == 0);
    CHECK(omega_odd(30) == 2);
    CHECK(omega_odd(BigInt("11229594411")) == static_cast<int>(factorize(BigInt("11229594411")).primes().size()));
    CHECK_THROWS_AS(omega_odd(0), std::invalid_argument);
    for (std::uint64_t m = 1; m <= 5000; ++m) CHECK(omega_odd(BigInt(static_cast<unsigned long>(m))) == omega_odd_naive(m));
}

TEST_CASE("residue classes mod 24") {
    CHECK(yoshida_class(6, kPi3));
    CHECK_FALSE(yoshida_class(1, kPi3));
    CHECK(yoshida_class(5, k2Pi3));
    CHECK_FALSE(yoshida_class(6, k2Pi3));
    CHECK_THROWS_AS(yoshida_class(6, ThetaParams(3, 1)), std::invalid_argument);
}

TEST_CASE("residue classes predict the parity of the 2-Selmer rank") {
    // The parity of the 2-Selmer rank is governed by the root number.
    for (const auto& theta : {kPi3, k2Pi3})
        for (long n = 1; n <= 1500; ++n) {
            if (!is_squarefree(n)) continue;
            const CurveQ e = build_curve(n, theta);
            CHECK_MESSAGE((two_selmer_rank(e) % 2 == 1) == yoshida_class(n, theta), "n = " << n);
        }
}

TEST_CASE("generated candidates match a brute-force collection") {
    for (const auto& theta : {kPi3, k2Pi3}) {
        const CandidateGrid grid{.pmin = 1, .pmax = 50, .qmin = 1, .qmax = 50, .min_omega = 0};
        const auto recs = generate_candidates(grid, theta);
        std::map<std::uint64_t, std::vector<std::pair<std::uint64_t, std::uint64_t>>> expected;
        for (std::uint64_t p = 1; p <= 50; ++p)
            for (std::uint64_t q = 1; q <= 50; ++q)
                if (std::gcd(p, q) == 1) expected[kan_naive(p, q, theta)].emplace_back(p, q);
        REQUIRE(recs.size() == expected.size());
        auto it = expected.begin();
        for (const auto& rec : recs) {
            CHECK(rec.n == BigInt(static_cast<unsigned long>(it->first)));
            CHECK(rec.provenance == it->second);
            CHECK(rec.theta == theta);
            ++it;
        }
        CHECK(std::is_sorted(recs.begin(), recs.end(), [](const auto& a, const auto& b) { return a.n < b.n; }));
    }
    const auto pi3 = generate_candidates({.pmin = 1, .pmax = 50, .qmin = 1, .qmax = 50, .min_omega = 0}, kPi3);
    CHECK(std::any_of(pi3.begin(), pi3.end(), [](const auto& r) { return r.n == 6; }));
    const auto two = generate_candidates({.pmin = 1, .pmax = 50, .qmin = 1, .qmax = 50, .min_omega = 0}, k2Pi3);
    CHECK(std::any_of(two.begin(), two.end(), [](const auto& r) { return r.n == 14; }));
}

TEST_CASE("minimum odd prime count is a postcondition") {
    const CandidateGrid grid{.pmin = 2, .pmax = 120, .qmin = 2, .qmax = 120, .min_omega = 4};
    const auto recs = generate_candidates(grid, kPi3);
    CHECK_FALSE(recs.empty());
    std::set<BigInt> seen;
    for (const auto& rec : recs) {
        CHECK(rec.omega_odd >= 4);
        CHECK(rec.omega_odd == omega_odd(rec.n));
        CHECK(seen.insert(rec.n).second);
        CHECK(is_squarefree(rec.n));
        for (const auto& [p, q] : rec.provenance) {
            CHECK(p >= 2);
            CHECK(q >= 2);
            CHECK(kan_number(p, q, kPi3) == rec.n);
        }
        CHECK(std::is_sorted(rec.provenance.begin(), rec.provenance.end()));
    }
}

TEST_CASE("empty and invalid grids") {
    CHECK(generate_candidates({.pmin = 5, .pmax = 4, .qmin = 1, .qmax = 10, .min_omega = 0}, kPi3).empty());
    CHECK_THROWS_AS(generate_candidates({.pmin = 0, .pmax = 4, .qmin = 1, .qmax = 10, .min_omega = 0}, kPi3),
                    std::invalid_argument);
}

TEST_CASE("candidates are theta-congruent: the curve has positive 2-Selmer rank") {
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<std::uint64_t> dist(1, 200);
    for (const auto& theta : {kPi3, k2Pi3}) {
        int checked = 0;
        while (checked < 300) {
            const std::uint64_t p = dist(rng), q = dist(rng);
            if (std::gcd(p, q) != 1) continue;
            const BigInt n = kan_number(p, q, theta);
            ++checked;
            // Small n may come from torsion rather than a point of infinite order.
            if (n <= 3 || n == 6) continue;
            const CurveQ e = build_curve(n, theta);
            CHECK_MESSAGE(two_selmer_rank(e) >= 1, "n = " << n << " from " << p << ", " << q);
            CHECK(selmer_rank(e) >= 1);
        }
    }
}
