#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace thetarank {

using BigInt = mpz_class;
using Rational = mpq_class;

struct PrimePower {
    BigInt prime;
    unsigned exponent = 0;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// sign * prod(prime^exponent), primes strictly increasing.
struct Factorization {
    int sign = 1;
    std::vector<PrimePower> factors;

    BigInt value() const;
    std::vector<BigInt> primes() const;
};

// 64-bit modular helpers. Operands must already be reduced mod m.
inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Deterministic Miller-Rabin for every 64-bit input.
bool is_prime_u64(std::uint64_t n);

/// Miller-Rabin on the first thirteen prime bases; deterministic below
/// 3.3e24. Larger inputs fall back to GMP's BPSW-based test.
bool is_prime(const BigInt& n);

/// Throws std::invalid_argument for m == 0.
Factorization factorize(const BigInt& m);

/// The signed squarefree d with m = d * k^2. Throws for m == 0.
BigInt squarefree_part(const BigInt& m);

/// Squarefree part of m when every prime occurring to an odd power lies in
/// `primes`: divides those out and requires the cofactor to be a perfect
/// square. Returns nullopt when the cofactor is not a square.
std::optional<BigInt> squarefree_part_over(const BigInt& m, std::span<const BigInt> primes);

bool is_squarefree(const BigInt& m);

bool is_perfect_square(const BigInt& m);
/// Perfect-square test for signed 128-bit values; negative values fail.
bool is_perfect_square(__int128 v);

/// p-adic valuation of a nonzero integer.
unsigned valuation(const BigInt& m, const BigInt& p);

/// Squarefree indicator over 1..limit.
class SquarefreeFlags {
public:
    explicit SquarefreeFlags(std::uint64_t limit);

    std::uint64_t limit() const { return limit_; }
    std::uint64_t count() const { return count_; }
    bool operator[](std::uint64_t n) const { return flags_[n]; }

private:
    std::uint64_t limit_;
    std::uint64_t count_ = 0;
    std::vector<bool> flags_;
};

/// Squarefree flags for 1..limit via a sieve over squares of primes.
SquarefreeFlags squarefree_flags(std::uint64_t limit);

/// Ordered primes strictly below `bound`.
std::vector<std::uint32_t> primes_below(std::uint32_t bound);

/// Legendre symbol (a/p) for an odd prime p: -1, 0 or 1.
int legendre(std::int64_t a, std::uint64_t p);

/// A square root of a modulo the odd prime p (Tonelli-Shanks), or nullopt
/// when a is a non-residue.
std::optional<std::uint64_t> sqrt_mod(std::int64_t a, std::uint64_t p);

std::string to_string(const BigInt& v);
std::string to_string(__int128 v);

}  // namespace thetarank
