#include <doctest.h>

#include <cmath>
#include <random>

#include "thetarank/arith.hpp"

using namespace thetarank;

namespace {

// Moebius function by trial division.
int moebius(std::uint64_t d) {
    int mu = 1;
    for (std::uint64_t p = 2; p * p <= d; ++p) {
        if (d % p) continue;
        d /= p;
        if (d % p == 0) return 0;
        mu = -mu;
    }
    return d > 1 ? -mu : mu;
}

// sum_{d^2 <= N} mu(d) floor(N / d^2)
std::uint64_t squarefree_count_oracle(std::uint64_t n) {
    std::int64_t total = 0;
    for (std::uint64_t d = 1; d * d <= n; ++d) total += moebius(d) * static_cast<std::int64_t>(n / (d * d));
    return static_cast<std::uint64_t>(total);
}

bool trial_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace

TEST_CASE("factorize small examples") {
    const Factorization f = factorize(54);
    CHECK(f.sign == 1);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0] == PrimePower{2, 1});
    CHECK(f.factors[1] == PrimePower{3, 3});

    const Factorization g = factorize(-722);
    CHECK(g.sign == -1);
    REQUIRE(g.factors.size() == 2);
    CHECK(g.factors[0] == PrimePower{2, 1});
    CHECK(g.factors[1] == PrimePower{19, 2});

    CHECK(factorize(1).factors.empty());
    CHECK_THROWS_AS(factorize(0), std::invalid_argument);
}

TEST_CASE("factorize a published n and a large semiprime") {
    for (const char* text : {"365803464586", "11229594411", "1000000016000000063", "340282366920938463463374607431768211457"}) {
        const BigInt m(text);
        const Factorization f = factorize(m);
        CHECK(f.value() == m);
        for (const auto& pp : f.factors) {
            CHECK(is_prime(pp.prime));
            CHECK(pp.exponent >= 1);
        }
        for (std::size_t i = 1; i < f.factors.size(); ++i) CHECK(f.factors[i - 1].prime < f.factors[i].prime);
    }
}

TEST_CASE("factorize round trip on random inputs") {
    std::mt19937_64 rng(20240501);
    std::uniform_int_distribution<std::int64_t> dist(-(std::int64_t{1} << 62), std::int64_t{1} << 62);
    for (int i = 0; i < 10000; ++i) {
        std::int64_t v = dist(rng);
        if (v == 0) continue;
        const BigInt m = static_cast<long>(v);
        const Factorization f = factorize(m);
        REQUIRE(f.value() == m);
    }
}

TEST_CASE("squarefree_part examples") {
    CHECK(squarefree_part(54) == 6);
    CHECK(squarefree_part(-1368) == -38);
    CHECK(squarefree_part(1) == 1);
    CHECK(squarefree_part(-1) == -1);
    CHECK_THROWS_AS(squarefree_part(0), std::invalid_argument);
}

TEST_CASE("squarefree_part is invariant under square factors") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> dist(-1000000, 1000000);
    for (int i = 0; i < 500; ++i) {
        long m = dist(rng);
        if (m == 0) continue;
        const BigInt base = squarefree_part(m);
        CHECK(is_squarefree(base));
        for (long k = 1; k <= 20; ++k) REQUIRE(squarefree_part(BigInt(m) * k * k) == base);
    }
}

TEST_CASE("squarefree_part_over") {
    const std::vector<BigInt> primes = {2, 3, 19};
    CHECK(squarefree_part_over(-1368, primes) == BigInt(-38));
    CHECK(squarefree_part_over(BigInt(5 * 5 * 6), primes) == BigInt(6));
    CHECK_FALSE(squarefree_part_over(BigInt(5 * 6), primes).has_value());
}

TEST_CASE("squarefree census") {
    CHECK(squarefree_flags(1).count() == 1);
    const SquarefreeFlags ten = squarefree_flags(10);
    CHECK(ten.count() == 7);
    std::vector<std::uint64_t> listed;
    for (std::uint64_t n = 1; n <= 10; ++n)
        if (ten[n]) listed.push_back(n);
    CHECK(listed == std::vector<std::uint64_t>{1, 2, 3, 5, 6, 7, 10});

    for (std::uint64_t n : {100ull, 9999ull, 123457ull}) CHECK(squarefree_flags(n).count() == squarefree_count_oracle(n));
    CHECK(squarefree_count_oracle(5000000) == 3039633);
    CHECK(squarefree_flags(5000000).count() == 3039633);
}

TEST_CASE("primes_below") {
    CHECK(primes_below(10) == std::vector<std::uint32_t>{2, 3, 5, 7});
    CHECK(primes_below(3) == std::vector<std::uint32_t>{2});
    CHECK(primes_below(2).empty());
    const auto primes = primes_below(100000);
    std::size_t count = 0;
    for (std::uint64_t n = 2; n < 100000; ++n) count += trial_prime(n);
    CHECK(primes.size() == count);
    CHECK(count == 9592);
}

TEST_CASE("primality agrees with trial division") {
    for (std::uint64_t n = 0; n < 20000; ++n) REQUIRE(is_prime_u64(n) == trial_prime(n));
    CHECK_FALSE(is_prime_u64(3215031751ull));        // strong pseudoprime to 2, 3, 5, 7
    CHECK_FALSE(is_prime_u64(3825123056546413051ull));  // to the first nine prime bases
    CHECK(is_prime_u64(18446744073709551557ull));
    CHECK(is_prime(BigInt("170141183460469231731687303715884105727")));
    CHECK_FALSE(is_prime(BigInt("3317044064679887385961981")));  // to the first twelve prime bases
}

TEST_CASE("sqrt_mod examples") {
    const auto r = sqrt_mod(4, 7);
    REQUIRE(r);
    CHECK((*r == 2 || *r == 5));
    CHECK_FALSE(sqrt_mod(3, 5));
    const auto s = sqrt_mod(2, 7);
    REQUIRE(s);
    CHECK((*s == 3 || *s == 4));
}

TEST_CASE("sqrt_mod matches Euler's criterion for p < 100") {
    for (std::uint32_t p : primes_below(100)) {
        if (p == 2) continue;
        for (std::uint64_t a = 0; a < p; ++a) {
            const bool euler = a == 0 || pow_mod(a, (p - 1) / 2, p) == 1;
            const auto root = sqrt_mod(static_cast<std::int64_t>(a), p);
            REQUIRE(root.has_value() == euler);
            if (root) CHECK(mul_mod(*root, *root, p) == a);
            CHECK(legendre(static_cast<std::int64_t>(a), p) == (a == 0 ? 0 : (euler ? 1 : -1)));
        }
    }
}

TEST_CASE("perfect squares and valuations") {
    CHECK(is_perfect_square(BigInt(0)));
    CHECK(is_perfect_square(BigInt("1000000000000000000000000000000000000")));
    CHECK_FALSE(is_perfect_square(BigInt(-4)));
    const __int128 big = static_cast<__int128>(3037000493ll) * 3037000493ll;
    CHECK(is_perfect_square(big));
    CHECK_FALSE(is_perfect_square(big + 1));
    CHECK_FALSE(is_perfect_square(static_cast<__int128>(-1)));
    for (long v = 0; v < 5000; ++v) {
        const long r = std::lround(std::sqrt(static_cast<double>(v)));
        REQUIRE(is_perfect_square(static_cast<__int128>(v)) == (r * r == v));
    }
    CHECK(valuation(BigInt(-1368), 2) == 3);
    CHECK(valuation(BigInt(-1368), 3) == 2);
    CHECK(valuation(BigInt(-1368), 5) == 0);
    CHECK(to_string(static_cast<__int128>(-12345678901234567ll) * 1000000) == "-12345678901234567000000");
}
