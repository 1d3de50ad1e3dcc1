#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "thetarank/arith.hpp"

namespace thetarank {

/// Rational angle data with cos(theta) = s / r.
class ThetaParams {
public:
    /// Requires r > 0, |s| < r, gcd(r, s) = 1.
    ThetaParams(std::int64_t r, std::int64_t s);

    static ThetaParams pi_over_3() { return {2, 1}; }
    static ThetaParams two_pi_over_3() { return {2, -1}; }
    /// Accepts "pi/3", "2pi/3" or "r,s".
    static ThetaParams parse(std::string_view text);

    std::int64_t r() const { return r_; }
    std::int64_t s() const { return s_; }
    /// r^2 - s^2, the square of the area scale factor.
    std::int64_t alpha_sq() const { return r_ * r_ - s_ * s_; }

    bool is_pi_over_3() const { return r_ == 2 && s_ == 1; }
    bool is_two_pi_over_3() const { return r_ == 2 && s_ == -1; }
    /// "pi/3", "2pi/3", or "r,s" for other angles.
    std::string name() const;

    friend bool operator==(const ThetaParams&, const ThetaParams&) = default;

private:
    std::int64_t r_;
    std::int64_t s_;
};

/// E_{n,theta}: y^2 = x^3 + 2sn x^2 - (r^2 - s^2) n^2 x, n squarefree.
struct CurveQ {
    BigInt n;
    ThetaParams theta;
    BigInt a2;
    BigInt a4;
    BigInt disc;
    /// x-coordinates of the 2-torsion: 0, (r - s) n, -(r + s) n.
    std::array<BigInt, 3> roots;
    /// Primes dividing n, increasing.
    std::vector<BigInt> n_primes;
    /// Primes dividing disc, increasing.
    std::vector<BigInt> bad_primes;

    /// x^3 + a2 x^2 + a4 x
    BigInt rhs(const BigInt& x) const { return x * (x * (x + a2) + a4); }
    Rational rhs(const Rational& x) const;
    std::string equation() const;
};

/// Throws std::invalid_argument when n is not a positive squarefree integer.
CurveQ build_curve(const BigInt& n, const ThetaParams& theta);

/// Affine rational point or the point at infinity. Coordinates are kept in
/// lowest terms.
struct PointQ {
    Rational x;
    Rational y;
    bool infinity = false;

    static PointQ at_infinity() { return PointQ{0, 0, true}; }
    static PointQ affine(Rational x, Rational y);
    /// Parses a pair of "num/den" strings.
    static PointQ parse(std::string_view x, std::string_view y);

    friend bool operator==(const PointQ& a, const PointQ& b) {
        if (a.infinity || b.infinity) return a.infinity == b.infinity;
        return a.x == b.x && a.y == b.y;
    }
};

bool is_on_curve(const PointQ& p, const CurveQ& e);
PointQ negate(const PointQ& p);
PointQ add(const PointQ& p, const PointQ& q, const CurveQ& e);
PointQ scalar_mul(std::int64_t k, const PointQ& p, const CurveQ& e);

/// Infinity followed by the three points (e_i, 0).
std::array<PointQ, 4> two_torsion(const CurveQ& e);

bool has_good_reduction(const CurveQ& e, const BigInt& p);
inline bool has_good_reduction(const CurveQ& e, std::uint64_t p) {
    return has_good_reduction(e, BigInt(static_cast<unsigned long>(p)));
}

/// "num/den", with den == 1 elided.
std::string format_rational(const Rational& q);
/// Inverse of format_rational; throws std::invalid_argument on malformed text.
Rational parse_rational(std::string_view text);
std::string format_point(const PointQ& p);

}  // namespace thetarank
