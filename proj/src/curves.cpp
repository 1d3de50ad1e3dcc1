#include "thetarank/curves.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace thetarank {

ThetaParams::ThetaParams(std::int64_t r, std::int64_t s) : r_(r), s_(s) {
    if (r <= 0) throw std::invalid_argument("theta: r must be positive");
    if (s <= -r || s >= r) throw std::invalid_argument("theta: need |s| < r");
    if (std::gcd(r, s) != 1) throw std::invalid_argument("theta: need gcd(r, s) = 1");
}

ThetaParams ThetaParams::parse(std::string_view text) {
    if (text == "pi/3") return pi_over_3();
    if (text == "2pi/3") return two_pi_over_3();
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) throw std::invalid_argument("theta: expected pi/3, 2pi/3 or r,s");
    auto parse_int = [](std::string_view part) {
        std::int64_t v = 0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc{} || ptr != part.data() + part.size())
            throw std::invalid_argument("theta: bad integer '" + std::string(part) + "'");
        return v;
    };
    return {parse_int(text.substr(0, comma)), parse_int(text.substr(comma + 1))};
}

std::string ThetaParams::name() const {
    if (is_pi_over_3()) return "pi/3";
    if (is_two_pi_over_3()) return "2pi/3";
    return std::to_string(r_) + "," + std::to_string(s_);
}

Rational CurveQ::rhs(const Rational& x) const {
    return x * (x * (x + Rational(a2)) + Rational(a4));
}

std::string CurveQ::equation() const {
    std::string out = "y^2 = x^3";
    auto term = [&](const BigInt& c, const char* mono) {
        if (c == 0) return;
        out += sgn(c) < 0 ? "-" : "+";
        out += BigInt(abs(c)).get_str();
        out += mono;
    };
    term(a2, "x^2");
    term(a4, "x");
    return out;
}

CurveQ build_curve(const BigInt& n, const ThetaParams& theta) {
    if (n <= 0) throw std::invalid_argument("build_curve: n must be positive");
    const Factorization f = factorize(n);
    for (const auto& pp : f.factors) {
        if (pp.exponent > 1) throw std::invalid_argument("build_curve: n = " + n.get_str() + " is not squarefree");
    }
    const BigInt r = static_cast<long>(theta.r());
    const BigInt s = static_cast<long>(theta.s());

    CurveQ e{.n = n, .theta = theta};
    e.a2 = 2 * s * n;
    e.a4 = -(r * r - s * s) * n * n;
    e.roots = {BigInt(0), BigInt((r - s) * n), BigInt(-(r + s) * n)};
    const BigInt d01 = e.roots[0] - e.roots[1];
    const BigInt d02 = e.roots[0] - e.roots[2];
    const BigInt d12 = e.roots[1] - e.roots[2];
    const BigInt prod = d01 * d02 * d12;
    e.disc = 16 * prod * prod;
    e.n_primes = f.primes();
    e.bad_primes = factorize(e.disc).primes();
    return e;
}

PointQ PointQ::affine(Rational x, Rational y) {
    x.canonicalize();
    y.canonicalize();
    return PointQ{std::move(x), std::move(y), false};
}

PointQ PointQ::parse(std::string_view x, std::string_view y) {
    return PointQ{parse_rational(x), parse_rational(y), false};
}

bool is_on_curve(const PointQ& p, const CurveQ& e) {
    if (p.infinity) return true;
    return p.y * p.y == e.rhs(p.x);
}

PointQ negate(const PointQ& p) {
    if (p.infinity) return p;
    return PointQ{p.x, -p.y, false};
}

PointQ add(const PointQ& p, const PointQ& q, const CurveQ& e) {
    if (p.infinity) return q;
    if (q.infinity) return p;
    Rational slope;
    if (p.x == q.x) {
        if (p.y != q.y || p.y == 0) return PointQ::at_infinity();
        // Tangent: (3x^2 + 2 a2 x + a4) / 2y
        slope = (3 * p.x * p.x + 2 * Rational(e.a2) * p.x + Rational(e.a4)) / (2 * p.y);
    } else {
        slope = (q.y - p.y) / (q.x - p.x);
    }
    Rational x3 = slope * slope - Rational(e.a2) - p.x - q.x;
    Rational y3 = slope * (p.x - x3) - p.y;
    return PointQ{std::move(x3), std::move(y3), false};
}

PointQ scalar_mul(std::int64_t k, const PointQ& p, const CurveQ& e) {
    PointQ base = k < 0 ? negate(p) : p;
    auto m = k < 0 ? -static_cast<std::uint64_t>(k) : static_cast<std::uint64_t>(k);
    PointQ acc = PointQ::at_infinity();
    while (m) {
        if (m & 1) acc = add(acc, base, e);
        m >>= 1;
        if (m) base = add(base, base, e);
    }
    return acc;
}

std::array<PointQ, 4> two_torsion(const CurveQ& e) {
    return {PointQ::at_infinity(), PointQ{Rational(e.roots[0]), 0, false}, PointQ{Rational(e.roots[1]), 0, false},
            PointQ{Rational(e.roots[2]), 0, false}};
}

bool has_good_reduction(const CurveQ& e, const BigInt& p) {
    return !mpz_divisible_p(e.disc.get_mpz_t(), p.get_mpz_t());
}

std::string format_rational(const Rational& value) {
    Rational q = value;
    q.canonicalize();
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
    auto parse_int = [&](std::string_view part) {
        std::string_view digits = part;
        if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos)
            throw std::invalid_argument("parse_rational: malformed '" + std::string(text) + "'");
        std::string s(part);
        if (s.front() == '+') s.erase(0, 1);
        return BigInt(s);
    };
    const auto slash = text.find('/');
    Rational q;
    if (slash == std::string_view::npos) {
        q = Rational(parse_int(text));
    } else {
        const BigInt den = parse_int(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
        q = Rational(parse_int(text.substr(0, slash)), den);
    }
    q.canonicalize();
    return q;
}

std::string format_point(const PointQ& p) {
    if (p.infinity) return "O";
    return "[" + format_rational(p.x) + ", " + format_rational(p.y) + "]";
}

}  // namespace thetarank
