#include "thetarank/pointcount.hpp"

#include <stdexcept>
#include <vector>

namespace thetarank {

namespace {

constexpr std::uint64_t kTableLimit = std::uint64_t{1} << 24;

inline std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    const std::uint64_t s = a + b;
    return s >= p ? s - p : s;
}

// chi[v] for v in [0, p): 1 for nonzero squares, -1 for non-squares, 0 at 0.
const std::vector<std::int8_t>& character_table(std::uint64_t p) {
    thread_local std::vector<std::int8_t> table;
    thread_local std::uint64_t cached = 0;
    if (cached != p) {
        table.assign(p, -1);
        table[0] = 0;
        for (std::uint64_t i = 1; i <= p / 2; ++i) table[i * i % p] = 1;
        cached = p;
    }
    return table;
}

std::uint64_t reduce(const BigInt& v, std::uint64_t p) {
    return mpz_fdiv_ui(v.get_mpz_t(), static_cast<unsigned long>(p));
}

}  // namespace

LocalCount count_points_reduced(std::uint64_t a2, std::uint64_t a4, std::uint64_t p) {
    // f(x) = x^3 + a2 x^2 + a4 x walked by finite differences; third
    // difference is the constant 6.
    std::uint64_t f = 0;
    std::uint64_t d1 = (1 + a2 + a4) % p;
    std::uint64_t d2 = (6 + 2 * a2) % p;
    const std::uint64_t d3 = 6 % p;
    std::int64_t chi_sum = 0;
    if (p < kTableLimit) {
        const auto& chi = character_table(p);
        for (std::uint64_t x = 0; x < p; ++x) {
            chi_sum += chi[f];
            f = add_mod(f, d1, p);
            d1 = add_mod(d1, d2, p);
            d2 = add_mod(d2, d3, p);
        }
    } else {
        for (std::uint64_t x = 0; x < p; ++x) {
            if (f != 0) chi_sum += pow_mod(f, (p - 1) / 2, p) == 1 ? 1 : -1;
            f = add_mod(f, d1, p);
            d1 = add_mod(d1, d2, p);
            d2 = add_mod(d2, d3, p);
        }
    }
    // 1 (infinity) + sum over x of (1 + chi(f(x)))
    const auto np = static_cast<std::uint64_t>(static_cast<std::int64_t>(p + 1) + chi_sum);
    return {p, np, static_cast<std::int64_t>(p + 1) - static_cast<std::int64_t>(np)};
}

LocalCount count_points(const CurveQ& e, std::uint64_t p) {
    if (p == 2) throw std::invalid_argument("count_points: p must be odd");
    if (!has_good_reduction(e, p))
        throw std::invalid_argument("count_points: bad reduction at p = " + std::to_string(p));
    return count_points_reduced(reduce(e.a2, p), reduce(e.a4, p), p);
}

}  // namespace thetarank
