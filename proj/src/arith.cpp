#include "thetarank/arith.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace thetarank {

namespace {

constexpr std::array<std::uint32_t, 13> kWitnesses = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

// Trial-division primes; the rho stage only sees cofactors free of these.
const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> primes = primes_below(1 << 12);
    return primes;
}

bool fits_u64(const BigInt& v) { return sgn(v) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64; }

std::uint64_t to_u64(const BigInt& v) {
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, v.get_mpz_t());
    return out;
}

BigInt from_u64(std::uint64_t v) {
    BigInt out;
    mpz_import(out.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
    return out;
}

// Brent's variant of Pollard rho. n odd composite, not a perfect power of a
// small prime. Returns a nontrivial factor.
std::uint64_t rho_u64(std::uint64_t n) {
    std::mt19937_64 rng(n);
    for (;;) {
        const std::uint64_t c = rng() % (n - 1) + 1;
        std::uint64_t y = rng() % n;
        const std::uint64_t m = 128;
        std::uint64_t g = 1, r = 1, q = 1, x = 0, ys = 0;
        auto f = [&](std::uint64_t v) { return (mul_mod(v, v, n) + c) % n; };
        do {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = f(y);
            std::uint64_t k = 0;
            do {
                ys = y;
                for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mul_mod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r <<= 1;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

BigInt rho_big(const BigInt& n) {
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(n);
    for (;;) {
        const BigInt c = rng.get_z_range(n - 1) + 1;
        BigInt y = rng.get_z_range(n);
        BigInt x, ys, g = 1, q = 1, diff;
        const unsigned long m = 128;
        unsigned long r = 1;
        auto step = [&](BigInt& v) {
            v = v * v + c;
            mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
        };
        do {
            x = y;
            for (unsigned long i = 0; i < r; ++i) step(y);
            unsigned long k = 0;
            do {
                ys = y;
                for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                    step(y);
                    diff = abs(x - y);
                    q = q * diff;
                    mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            } while (k < r && g == 1);
            r <<= 1;
        } while (g == 1);
        if (g == n) {
            do {
                step(ys);
                diff = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

// Splits n (> 1, coprime to the trial-division primes) into prime factors.
void split(const BigInt& n, std::vector<BigInt>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    BigInt root;
    if (mpz_perfect_square_p(n.get_mpz_t())) {
        mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
        split(root, out);
        split(root, out);
        return;
    }
    BigInt d = fits_u64(n) ? from_u64(rho_u64(to_u64(n))) : rho_big(n);
    split(d, out);
    split(n / d, out);
}

}  // namespace

BigInt Factorization::value() const {
    BigInt v = sign;
    for (const auto& pp : factors) {
        BigInt t;
        mpz_pow_ui(t.get_mpz_t(), pp.prime.get_mpz_t(), pp.exponent);
        v *= t;
    }
    return v;
}

std::vector<BigInt> Factorization::primes() const {
    std::vector<BigInt> out;
    out.reserve(factors.size());
    for (const auto& pp : factors) out.push_back(pp.prime);
    return out;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint32_t p : kWitnesses) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint32_t a : kWitnesses) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

bool is_prime(const BigInt& n) {
    if (n < 2) return false;
    if (fits_u64(n)) return is_prime_u64(to_u64(n));
    // 3.3e24 bound for the 13-base deterministic set.
    static const BigInt kDeterministicBound("3317044064679887385961981");
    if (n >= kDeterministicBound) return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
    for (std::uint32_t p : kWitnesses) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return n == p;
    }
    const BigInt nm1 = n - 1;
    BigInt d = nm1;
    const unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    BigInt x;
    for (std::uint32_t a : kWitnesses) {
        BigInt base = a;
        mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
        if (x == 1 || x == nm1) continue;
        bool composite = true;
        for (unsigned long i = 1; i < s; ++i) {
            mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
            if (x == nm1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

Factorization factorize(const BigInt& m) {
    if (m == 0) throw std::invalid_argument("factorize: zero has no factorization");
    Factorization f;
    f.sign = sgn(m) < 0 ? -1 : 1;
    BigInt rest = abs(m);
    for (std::uint32_t p : small_primes()) {
        if (rest == 1) break;
        if (BigInt(p) * p > rest) {
            break;
        }
        if (!mpz_divisible_ui_p(rest.get_mpz_t(), p)) continue;
        unsigned e = 0;
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
            ++e;
        }
        f.factors.push_back({BigInt(p), e});
    }
    if (rest != 1) {
        std::vector<BigInt> big;
        split(rest, big);
        std::sort(big.begin(), big.end());
        for (const auto& p : big) {
            if (!f.factors.empty() && f.factors.back().prime == p) {
                ++f.factors.back().exponent;
            } else {
                f.factors.push_back({p, 1});
            }
        }
        std::sort(f.factors.begin(), f.factors.end(),
                  [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });
    }
    return f;
}

BigInt squarefree_part(const BigInt& m) {
    if (m == 0) throw std::invalid_argument("squarefree_part: zero has no square class");
    const Factorization f = factorize(m);
    BigInt d = f.sign;
    for (const auto& pp : f.factors) {
        if (pp.exponent % 2) d *= pp.prime;
    }
    return d;
}

std::optional<BigInt> squarefree_part_over(const BigInt& m, std::span<const BigInt> primes) {
    if (m == 0) throw std::invalid_argument("squarefree_part_over: zero has no square class");
    BigInt rest = abs(m);
    BigInt d = sgn(m) < 0 ? -1 : 1;
    for (const auto& p : primes) {
        const unsigned long e = mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
        if (e % 2) d *= p;
    }
    if (!mpz_perfect_square_p(rest.get_mpz_t())) return std::nullopt;
    return d;
}

bool is_squarefree(const BigInt& m) {
    if (m == 0) return false;
    const Factorization f = factorize(m);
    return std::all_of(f.factors.begin(), f.factors.end(), [](const PrimePower& pp) { return pp.exponent == 1; });
}

bool is_perfect_square(const BigInt& m) { return sgn(m) >= 0 && mpz_perfect_square_p(m.get_mpz_t()) != 0; }

bool is_perfect_square(__int128 v) {
    if (v < 0) return false;
    // Quadratic residue filters mod 64 and 63 reject ~90% of non-squares.
    static const auto kSquaresMod64 = [] {
        std::array<bool, 64> t{};
        for (unsigned i = 0; i < 64; ++i) t[i * i % 64] = true;
        return t;
    }();
    if (!kSquaresMod64[static_cast<unsigned>(v & 63)]) return false;
    const auto m63 = static_cast<unsigned>(static_cast<unsigned __int128>(v) % 63);
    static const auto kSquaresMod63 = [] {
        std::array<bool, 63> t{};
        for (unsigned i = 0; i < 63; ++i) t[i * i % 63] = true;
        return t;
    }();
    if (!kSquaresMod63[m63]) return false;
    const auto u = static_cast<unsigned __int128>(v);
    auto r = static_cast<unsigned __int128>(std::sqrt(static_cast<long double>(u)));
    while (r * r > u) --r;
    while ((r + 1) * (r + 1) <= u) ++r;
    return r * r == u;
}

unsigned valuation(const BigInt& m, const BigInt& p) {
    if (m == 0) throw std::invalid_argument("valuation: zero has infinite valuation");
    BigInt rest = m;
    return static_cast<unsigned>(mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t()));
}

SquarefreeFlags::SquarefreeFlags(std::uint64_t limit) : limit_(limit), flags_(limit + 1, true) {
    flags_[0] = false;
    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
    for (std::uint32_t p : primes_below(static_cast<std::uint32_t>(root + 1))) {
        const std::uint64_t sq = std::uint64_t{p} * p;
        for (std::uint64_t k = sq; k <= limit; k += sq) flags_[k] = false;
    }
    for (std::uint64_t n = 1; n <= limit; ++n) count_ += flags_[n];
}

SquarefreeFlags squarefree_flags(std::uint64_t limit) {
    if (limit < 1) throw std::invalid_argument("squarefree_flags: limit must be >= 1");
    return SquarefreeFlags(limit);
}

std::vector<std::uint32_t> primes_below(std::uint32_t bound) {
    std::vector<std::uint32_t> out;
    if (bound < 3) return out;
    std::vector<bool> composite(bound, false);
    for (std::uint64_t i = 2; i < bound; ++i) {
        if (composite[i]) continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j < bound; j += i) composite[j] = true;
    }
    return out;
}

int legendre(std::int64_t a, std::uint64_t p) {
    std::int64_t r = a % static_cast<std::int64_t>(p);
    if (r < 0) r += static_cast<std::int64_t>(p);
    if (r == 0) return 0;
    return pow_mod(static_cast<std::uint64_t>(r), (p - 1) / 2, p) == 1 ? 1 : -1;
}

std::optional<std::uint64_t> sqrt_mod(std::int64_t a, std::uint64_t p) {
    std::int64_t ar = a % static_cast<std::int64_t>(p);
    if (ar < 0) ar += static_cast<std::int64_t>(p);
    const auto r = static_cast<std::uint64_t>(ar);
    if (r == 0) return 0;
    if (legendre(ar, p) != 1) return std::nullopt;
    if (p % 4 == 3) return pow_mod(r, (p + 1) / 4, p);

    std::uint64_t q = p - 1;
    unsigned s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    std::uint64_t z = 2;
    while (legendre(static_cast<std::int64_t>(z), p) != -1) ++z;

    std::uint64_t c = pow_mod(z, q, p);
    std::uint64_t x = pow_mod(r, (q + 1) / 2, p);
    std::uint64_t t = pow_mod(r, q, p);
    unsigned m = s;
    while (t != 1) {
        unsigned i = 0;
        for (std::uint64_t tt = t; tt != 1; tt = mul_mod(tt, tt, p)) ++i;
        std::uint64_t b = c;
        for (unsigned j = 0; j + i + 1 < m; ++j) b = mul_mod(b, b, p);
        x = mul_mod(x, b, p);
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        m = i;
    }
    return x;
}

std::string to_string(const BigInt& v) { return v.get_str(); }

std::string to_string(__int128 v) {
    if (v == 0) return "0";
    const bool neg = v < 0;
    auto u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    std::string s;
    while (u) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

}  // namespace thetarank
