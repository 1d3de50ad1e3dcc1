#include "thetarank/descent.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "thetarank/pointcount.hpp"

namespace thetarank {

// ---------------------------------------------------------------------------
// Square classes and the isogeny data

SquareClass SquareClass::of(const BigInt& m) { return SquareClass(squarefree_part(m)); }

SquareClass SquareClass::of(const Rational& q) {
    if (q == 0) throw std::invalid_argument("SquareClass::of: zero has no square class");
    return SquareClass(squarefree_part(BigInt(q.get_num() * q.get_den())));
}

SquareClass operator*(const SquareClass& a, const SquareClass& b) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.d_.get_mpz_t(), b.d_.get_mpz_t());
    return SquareClass(BigInt((a.d_ / g) * (b.d_ / g)));
}

namespace {

std::vector<BigInt> merge_primes(std::vector<BigInt> primes) {
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    return primes;
}

}  // namespace

IsogenyPair IsogenyPair::of(const CurveQ& e) {
    std::vector<BigInt> primes = e.n_primes;
    primes.push_back(2);
    // 2 b (a^2 - 4b) = -8 (r^2 - s^2) r^2 n^4
    const BigInt extra = BigInt(static_cast<long>(e.theta.alpha_sq())) * static_cast<long>(e.theta.r());
    for (auto& p : factorize(extra).primes()) primes.push_back(p);
    return IsogenyPair{e.a2, e.a4, merge_primes(std::move(primes))};
}

IsogenyPair IsogenyPair::dual() const {
    // 2 b' (a'^2 - 4 b') = 32 b (a^2 - 4b): same prime support.
    return IsogenyPair{-2 * a, a * a - 4 * b, primes};
}

Torsor Torsor::make(const IsogenyPair& pair, const SquareClass& d) {
    if (!mpz_divisible_p(pair.b.get_mpz_t(), d.value().get_mpz_t()))
        throw std::invalid_argument("Torsor: d = " + d.value().get_str() + " does not divide b");
    return Torsor{d, pair.a, pair.b / d.value()};
}

BigInt Torsor::quartic_discriminant() const {
    const BigInt& dv = d.value();
    const BigInt inner = a * a - 4 * dv * e;
    return 16 * dv * e * inner * inner;
}

// ---------------------------------------------------------------------------
// Local solvability

namespace {

using Quartic = std::array<BigInt, 5>;  // low to high

constexpr unsigned kMaxDepth = 256;

BigInt eval(const Quartic& g, const BigInt& x) {
    BigInt v = g[4];
    for (int i = 3; i >= 0; --i) v = v * x + g[static_cast<std::size_t>(i)];
    return v;
}

BigInt eval_derivative(const Quartic& g, const BigInt& x) {
    BigInt v = 4 * g[4];
    v = v * x + 3 * g[3];
    v = v * x + 2 * g[2];
    v = v * x + g[1];
    return v;
}

BigInt pow_big(const BigInt& p, unsigned long e) {
    BigInt out;
    mpz_pow_ui(out.get_mpz_t(), p.get_mpz_t(), e);
    return out;
}

// Whether v is a square in Q_p (zero counts).
bool p_adic_square(const BigInt& v, const BigInt& p) {
    if (v == 0) return true;
    BigInt unit = v;
    const unsigned long lambda = mpz_remove(unit.get_mpz_t(), unit.get_mpz_t(), p.get_mpz_t());
    if (lambda % 2) return false;
    if (p == 2) return mpz_fdiv_ui(unit.get_mpz_t(), 8) == 1;
    return mpz_legendre(unit.get_mpz_t(), p.get_mpz_t()) == 1;
}

long val_or_inf(const BigInt& v, const BigInt& p) {
    if (v == 0) return 1L << 30;
    BigInt t = v;
    return static_cast<long>(mpz_remove(t.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t()));
}

// Valuation lemmas for "is there x = x0 mod p^nu with g(x) a p-adic
// square": +1 yes, -1 no, 0 undecided at this precision.
int lemma_odd(const Quartic& g, const BigInt& p, long nu, const BigInt& x) {
    const BigInt gx = eval(g, x);
    if (p_adic_square(gx, p)) return 1;
    const long lambda = val_or_inf(gx, p);
    const long mu = val_or_inf(eval_derivative(g, x), p);
    if (lambda - mu >= nu && nu > mu) return 1;
    if (lambda >= 2 * nu && mu >= nu) return 0;
    return -1;
}

int lemma_two(const Quartic& g, long nu, const BigInt& x) {
    static const BigInt two = 2;
    const BigInt gx = eval(g, x);
    if (p_adic_square(gx, two)) return 1;
    const long lambda = val_or_inf(gx, two);
    const long mu = val_or_inf(eval_derivative(g, x), two);
    BigInt odd = gx;
    mpz_remove(odd.get_mpz_t(), odd.get_mpz_t(), two.get_mpz_t());
    const bool odd_is_1_mod_4 = mpz_fdiv_ui(odd.get_mpz_t(), 4) == 1;
    if (lambda - mu >= nu && nu > mu) return 1;
    if (nu > mu && lambda == mu + nu - 1 && lambda % 2 == 0) return 1;
    if (nu > mu && lambda == mu + nu - 2 && lambda % 2 == 0 && odd_is_1_mod_4) return 1;
    if (mu >= nu && lambda >= 2 * nu) return 0;
    if (mu >= nu && lambda == 2 * nu - 2 && odd_is_1_mod_4) return 0;
    return -1;
}

// Covers x0 + p^nu Z_p by its p residue classes mod p^(nu+1).
bool lemma_search(const Quartic& g, const BigInt& p, const BigInt& x0, long nu, unsigned depth) {
    if (depth > kMaxDepth) throw std::logic_error("local solvability: lifting depth exceeded (singular quartic?)");
    const BigInt step = pow_big(p, static_cast<unsigned long>(nu));
    BigInt x = x0;
    const bool two = p == 2;
    for (BigInt i = 0; i < p; ++i, x += step) {
        const int verdict = two ? lemma_two(g, nu + 1, x) : lemma_odd(g, p, nu + 1, x);
        if (verdict == 1) return true;
        if (verdict == 0 && lemma_search(g, p, x, nu + 1, depth + 1)) return true;
    }
    return false;
}

// --- polynomials over F_p, low to high, trimmed --------------------------

using Poly = std::vector<std::uint64_t>;

void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) { return pow_mod(a, p - 2, p); }

Poly poly_mul(const Poly& a, const Poly& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + mul_mod(a[i], b[j], p)) % p;
    trim(out);
    return out;
}

// Quotient and remainder of a / b, b nonzero.
std::pair<Poly, Poly> poly_divmod(Poly a, const Poly& b, std::uint64_t p) {
    trim(a);
    if (a.size() < b.size()) return {Poly{}, a};
    const std::size_t shift_max = a.size() - b.size();
    Poly q(shift_max + 1, 0);
    const std::uint64_t inv_lead = inv_mod(b.back(), p);
    for (std::size_t shift = shift_max + 1; shift-- > 0;) {
        const std::uint64_t c = mul_mod(a[shift + b.size() - 1], inv_lead, p);
        q[shift] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] = (a[shift + j] + p - mul_mod(c, b[j], p)) % p;
    }
    trim(a);
    trim(q);
    return {q, a};
}

Poly poly_mod(const Poly& a, const Poly& m, std::uint64_t p) { return poly_divmod(a, m, p).second; }

Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const std::uint64_t inv = inv_mod(a.back(), p);
        for (auto& c : a) c = mul_mod(c, inv, p);
    }
    return a;
}

// base^exp mod m
Poly poly_powmod(Poly base, std::uint64_t exp, const Poly& m, std::uint64_t p) {
    Poly result{1};
    base = poly_mod(base, m, p);
    while (exp) {
        if (exp & 1) result = poly_mod(poly_mul(result, base, p), m, p);
        exp >>= 1;
        if (exp) base = poly_mod(poly_mul(base, base, p), m, p);
    }
    return result;
}

Poly poly_sub(Poly a, const Poly& b, std::uint64_t p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
    trim(a);
    return a;
}

std::uint64_t poly_eval(const Poly& f, std::uint64_t x, std::uint64_t p) {
    std::uint64_t v = 0;
    for (std::size_t i = f.size(); i-- > 0;) v = (mul_mod(v, x, p) + f[i]) % p;
    return v;
}

// Distinct roots of a squarefree product of linear factors.
void split_linear(const Poly& g, std::uint64_t p, std::vector<std::uint64_t>& roots) {
    if (g.size() <= 1) return;
    if (g.size() == 2) {
        roots.push_back(mul_mod(p - g[0], inv_mod(g[1], p), p));
        return;
    }
    for (std::uint64_t delta = 1;; ++delta) {
        const Poly shifted{delta % p, 1};
        Poly h = poly_sub(poly_powmod(shifted, (p - 1) / 2, g, p), Poly{1}, p);
        h = poly_gcd(g, h, p);
        if (h.size() > 1 && h.size() < g.size()) {
            split_linear(h, p, roots);
            split_linear(poly_divmod(g, h, p).first, p, roots);
            return;
        }
    }
}

std::vector<std::uint64_t> poly_roots(const Poly& f, std::uint64_t p) {
    std::vector<std::uint64_t> roots;
    if (f.size() <= 1) return roots;
    if (p < 64) {
        for (std::uint64_t t = 0; t < p; ++t)
            if (poly_eval(f, t, p) == 0) roots.push_back(t);
        return roots;
    }
    // gcd(f, t^p - t) collects the distinct F_p roots.
    const Poly tp = poly_powmod(Poly{0, 1}, p, f, p);
    const Poly g = poly_gcd(f, poly_sub(tp, Poly{0, 1}, p), p);
    split_linear(g, p, roots);
    std::sort(roots.begin(), roots.end());
    return roots;
}

Poly poly_derivative(const Poly& f, std::uint64_t p) {
    Poly out;
    for (std::size_t i = 1; i < f.size(); ++i) out.push_back(mul_mod(i % p, f[i], p));
    trim(out);
    return out;
}

// Whether f = c * q(t)^2 over F_p for some polynomial q (p odd).
bool is_constant_times_square(const Poly& f, std::uint64_t p) {
    const std::size_t deg = f.size() - 1;
    if (deg % 2) return false;
    if (deg == 0) return true;
    const std::uint64_t inv = inv_mod(f.back(), p);
    Poly monic(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) monic[i] = mul_mod(f[i], inv, p);
    // Coefficients of the monic square root, top down.
    const std::size_t half = deg / 2;
    Poly q(half + 1, 0);
    q[half] = 1;
    const std::uint64_t inv2 = (p + 1) / 2;
    for (std::size_t k = 1; k <= half; ++k) {
        // coefficient of t^(deg - k) in q^2 is 2 q[half-k] + sum of known terms
        std::uint64_t known = 0;
        for (std::size_t i = half - k + 1; i < half; ++i) {
            const std::size_t j = deg - k - i;
            if (j > half - k && j <= half && j != half) known = (known + mul_mod(q[i], q[j], p)) % p;
        }
        q[half - k] = mul_mod((monic[deg - k] + p - known) % p, inv2, p);
    }
    Poly sq = poly_mul(q, q, p);
    sq.resize(monic.size(), 0);
    return sq == monic;
}

// Whether some t in F_p has f(t) a nonzero square.
bool has_nonzero_square_value(const Poly& f, std::uint64_t p) {
    if (p < 64) {
        for (std::uint64_t t = 0; t < p; ++t) {
            const std::uint64_t v = poly_eval(f, t, p);
            if (v != 0 && legendre(static_cast<std::int64_t>(v), p) == 1) return true;
        }
        return false;
    }
    // Weil: for p >= 17 and deg <= 4, a polynomial that is not c*q^2 takes
    // a nonzero square value.
    if (!is_constant_times_square(f, p)) return true;
    return legendre(static_cast<std::int64_t>(f.back()), p) == 1;
}

// g(x0 + p^nu t) as a polynomial in t.
Quartic shift_scale(const Quartic& g, const BigInt& x0, const BigInt& scale) {
    Quartic h = g;
    // Taylor shift by x0 via repeated synthetic division.
    for (int i = 0; i < 4; ++i)
        for (int j = 3; j >= i; --j) h[static_cast<std::size_t>(j)] += x0 * h[static_cast<std::size_t>(j) + 1];
    BigInt power = 1;
    for (auto& c : h) {
        c *= power;
        power *= scale;
    }
    return h;
}

// Covers x0 + p^nu Z_p (p odd) using the structure of the reduction.
bool roots_search(const Quartic& g, const BigInt& p, std::uint64_t pu, const BigInt& x0, unsigned long nu,
                  unsigned depth) {
    if (depth > kMaxDepth) throw std::logic_error("local solvability: lifting depth exceeded (singular quartic?)");
    Quartic h = shift_scale(g, x0, pow_big(p, nu));
    long k = 1L << 30;
    for (const auto& c : h) k = std::min(k, val_or_inf(c, p));
    if (k == (1L << 30)) return true;  // g vanishes identically
    const BigInt pk = pow_big(p, static_cast<unsigned long>(k));
    Poly reduced(5);
    for (std::size_t i = 0; i < 5; ++i) {
        h[i] /= pk;
        reduced[i] = mpz_fdiv_ui(h[i].get_mpz_t(), static_cast<unsigned long>(pu));
    }
    trim(reduced);
    if (k % 2 == 0 && has_nonzero_square_value(reduced, pu)) return true;
    const Poly deriv = poly_derivative(reduced, pu);
    const BigInt step = pow_big(p, nu);
    for (std::uint64_t t : poly_roots(reduced, pu)) {
        // A simple root lifts to a root of g: w = 0.
        if (poly_eval(deriv, t, pu) != 0) return true;
        if (roots_search(g, p, pu, BigInt(x0 + step * static_cast<unsigned long>(t)), nu + 1, depth + 1)) return true;
    }
    return false;
}

bool chart_solvable(const Quartic& g, const BigInt& p, long nu0, LocalMethod method) {
    const bool lemmas = method == LocalMethod::valuation_lemmas || p == 2;
    if (lemmas) {
        if (nu0 == 0) return lemma_search(g, p, 0, 0, 0);
        // x in p Z_p: split by residues mod p^2.
        return lemma_search(g, p, 0, nu0, 0);
    }
    if (mpz_sizeinbase(p.get_mpz_t(), 2) > 62) throw std::invalid_argument("local solvability: prime too large");
    const auto pu = static_cast<std::uint64_t>(mpz_get_ui(p.get_mpz_t()));
    return roots_search(g, p, pu, 0, static_cast<unsigned long>(nu0), 0);
}

bool real_solvable(const Torsor& t) {
    const BigInt& d = t.d.value();
    if (sgn(d) > 0 || sgn(t.e) > 0) return true;
    // d, e < 0: max over u^2/v^2 >= 0 of d T^2 + a T + e is at the vertex.
    return sgn(t.a) > 0 && t.a * t.a - 4 * d * t.e >= 0;
}

}  // namespace

bool quartic_solvable_at(const std::array<BigInt, 5>& coeffs, const BigInt& p, LocalMethod method) {
    if (method == LocalMethod::residue_roots && p == 2)
        throw std::invalid_argument("local solvability: residue roots need an odd prime");
    if (chart_solvable(coeffs, p, 0, method)) return true;
    Quartic reversed{coeffs[4], coeffs[3], coeffs[2], coeffs[1], coeffs[0]};
    return chart_solvable(reversed, p, 1, method);
}

bool locally_solvable(const Torsor& t, const Place& place, LocalMethod method) {
    if (place.is_real()) return real_solvable(t);
    return quartic_solvable_at({t.e, 0, t.a, 0, t.d.value()}, place.p(), method);
}

// ---------------------------------------------------------------------------
// Selmer groups

namespace {

std::vector<SquareClass> candidate_classes(const BigInt& b, const std::vector<BigInt>& primes) {
    std::vector<BigInt> support;
    for (const auto& p : primes)
        if (mpz_divisible_p(b.get_mpz_t(), p.get_mpz_t())) support.push_back(p);
    std::vector<SquareClass> out;
    const std::size_t count = std::size_t{1} << support.size();
    out.reserve(2 * count);
    for (std::size_t mask = 0; mask < count; ++mask) {
        BigInt d = 1;
        for (std::size_t i = 0; i < support.size(); ++i)
            if (mask >> i & 1) d *= support[i];
        out.push_back(SquareClass::from_squarefree(d));
        out.push_back(SquareClass::from_squarefree(BigInt(-d)));
    }
    return out;
}

const IsogenyPair& side_pair(const IsogenyPair& pair, IsogenySide side, IsogenyPair& storage) {
    if (side == IsogenySide::forward) return pair;
    storage = pair.dual();
    return storage;
}

bool torsor_everywhere_solvable(const IsogenyPair& pair, const SquareClass& d) {
    const Torsor t = Torsor::make(pair, d);
    if (!real_solvable(t)) return false;
    for (const auto& p : pair.primes)
        if (!locally_solvable(t, Place::prime(p))) return false;
    return true;
}

}  // namespace

std::vector<SquareClass> phi_selmer(const IsogenyPair& pair, IsogenySide side) {
    IsogenyPair storage;
    const IsogenyPair& use = side_pair(pair, side, storage);
    // The Selmer set is a group: members of the span of known members need
    // no test, and a failed d rules out its whole coset.
    std::set<SquareClass> members{SquareClass()};
    std::set<SquareClass> rejected;
    for (const auto& d : candidate_classes(use.b, use.primes)) {
        if (members.count(d) || rejected.count(d)) continue;
        if (torsor_everywhere_solvable(use, d)) {
            std::vector<SquareClass> grown;
            for (const auto& m : members) grown.push_back(m * d);
            members.insert(grown.begin(), grown.end());
        } else {
            for (const auto& m : members) rejected.insert(m * d);
        }
    }
    std::vector<SquareClass> out(members.begin(), members.end());
    if (!std::has_single_bit(out.size())) throw std::logic_error("phi_selmer: set size is not a power of two");
    return out;
}

std::vector<TorsorVerdict> phi_selmer_verdicts(const IsogenyPair& pair, IsogenySide side) {
    IsogenyPair storage;
    const IsogenyPair& use = side_pair(pair, side, storage);
    std::vector<TorsorVerdict> out;
    for (const auto& d : candidate_classes(use.b, use.primes)) {
        const Torsor t = Torsor::make(use, d);
        TorsorVerdict v{.d = d, .in_selmer = true};
        const bool real = real_solvable(t);
        v.places.push_back({"inf", real});
        v.in_selmer = real;
        for (const auto& p : use.primes) {
            const bool ok = locally_solvable(t, Place::prime(p));
            v.places.push_back({p.get_str(), ok});
            v.in_selmer = v.in_selmer && ok;
        }
        out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end(), [](const TorsorVerdict& a, const TorsorVerdict& b) { return a.d < b.d; });
    return out;
}

namespace {

int log2_exact(std::size_t v) { return std::countr_zero(v); }

int selmer_rank_from(std::size_t forward, std::size_t dual) {
    const int s = log2_exact(forward) + log2_exact(dual) - 2;
    if (s < 0) throw std::logic_error("selmer_rank: negative rank (torsion classes missing)");
    return s;
}

}  // namespace

int selmer_rank(const CurveQ& e) {
    const IsogenyPair pair = IsogenyPair::of(e);
    return selmer_rank_from(phi_selmer(pair, IsogenySide::forward).size(), phi_selmer(pair, IsogenySide::dual).size());
}

// ---------------------------------------------------------------------------
// Full 2-Selmer group by complete 2-descent

namespace {

// Q_v^* / Q_v^*2 as a bit vector: the sign at infinity; (valuation parity,
// unit non-residue) at odd p; (valuation parity, unit = 3 mod 4, unit = +-3
// mod 8) at p = 2.
struct LocalField {
    BigInt p;  // 0 for the real place
    unsigned bits = 0;

    explicit LocalField(BigInt prime) : p(std::move(prime)), bits(p == 0 ? 1 : (p == 2 ? 3 : 2)) {}

    unsigned integer_class(BigInt v) const {
        if (p == 0) return v < 0 ? 1u : 0u;
        unsigned parity = 0;
        while (mpz_divisible_p(v.get_mpz_t(), p.get_mpz_t())) {
            mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t());
            parity ^= 1u;
        }
        if (p == 2) {
            const auto u = static_cast<unsigned>(mpz_fdiv_ui(v.get_mpz_t(), 8));
            return parity | (u % 4 == 3 ? 2u : 0u) | (u == 3 || u == 5 ? 4u : 0u);
        }
        return parity | (mpz_legendre(v.get_mpz_t(), p.get_mpz_t()) == -1 ? 2u : 0u);
    }

    // The class of num/den equals that of num*den.
    unsigned rational_class(const Rational& q) const { return integer_class(q.get_num() * q.get_den()); }
};

// Image of E(Q_v) in (Q_v^*/Q_v^*2)^2 under P -> (x - e0, x - e1), as an F2
// span of vectors of 2 * bits bits.
class LocalImage {
public:
    LocalImage(const std::array<BigInt, 3>& roots, const LocalField& field) : roots_(roots), field_(field) {}

    int dimension() const { return static_cast<int>(pivots_.size()); }
    const std::map<unsigned, unsigned>& basis() const { return pivots_; }

    void add_torsion() {
        for (std::size_t i = 0; i < 3; ++i) {
            std::array<unsigned, 3> c{};
            for (std::size_t j = 0; j < 3; ++j)
                if (j != i) c[j] = field_.integer_class(roots_[i] - roots_[j]);
            c[i] = c[(i + 1) % 3] ^ c[(i + 2) % 3];
            insert(c[0] | (c[1] << field_.bits));
        }
    }

    // Adds the image of a local point with this abscissa, if there is one.
    void try_abscissa(const Rational& x) {
        std::array<Rational, 3> d;
        Rational f = 1;
        for (std::size_t i = 0; i < 3; ++i) {
            d[i] = x - Rational(roots_[i]);
            if (d[i] == 0) return;
            f *= d[i];
        }
        if (field_.rational_class(f) != 0) return;
        insert(field_.rational_class(d[0]) | (field_.rational_class(d[1]) << field_.bits));
    }

private:
    void insert(unsigned v) {
        while (v) {
            const unsigned lead = std::bit_width(v) - 1;
            auto it = pivots_.find(lead);
            if (it == pivots_.end()) {
                pivots_.emplace(lead, v);
                return;
            }
            v ^= it->second;
        }
    }

    const std::array<BigInt, 3>& roots_;
    const LocalField& field_;
    std::map<unsigned, unsigned> pivots_;
};

// dim E(Q_v)/2E(Q_v) for full rational 2-torsion and three real roots.
int local_image_dimension(const LocalField& field) { return field.p == 0 ? 1 : (field.p == 2 ? 3 : 2); }

LocalImage local_image(const std::array<BigInt, 3>& roots, const LocalField& field) {
    LocalImage image(roots, field);
    image.add_torsion();
    const int target = local_image_dimension(field);
    auto sorted = roots;
    std::sort(sorted.begin(), sorted.end());
    if (field.p == 0) {
        // Between the two smaller roots the cubic is positive.
        Rational mid(sorted[0] + sorted[1], 2);
        mid.canonicalize();
        image.try_abscissa(mid);
    } else {
        // Integral abscissae near each root, then abscissae of negative
        // valuation.
        for (unsigned k = 0; image.dimension() < target && k <= 12; ++k) {
            BigInt pk;
            mpz_pow_ui(pk.get_mpz_t(), field.p.get_mpz_t(), k);
            for (long t = 1; image.dimension() < target && t <= 64; ++t)
                for (const BigInt& base : roots)
                    for (long sign : {1L, -1L}) image.try_abscissa(Rational(base + sign * t * pk));
        }
        for (unsigned k = 1; image.dimension() < target && k <= 4; ++k) {
            BigInt pk;
            mpz_pow_ui(pk.get_mpz_t(), field.p.get_mpz_t(), 2 * k);
            for (long t = 1; image.dimension() < target && t <= 64; ++t)
                for (long sign : {1L, -1L}) image.try_abscissa(Rational(BigInt(sign * t), pk));
        }
    }
    if (image.dimension() != target)
        throw std::logic_error("two-descent: local image at " + (field.p == 0 ? std::string("inf") : field.p.get_str()) +
                               " has dimension " + std::to_string(image.dimension()) + ", expected " +
                               std::to_string(target));
    return image;
}

using Row = unsigned __int128;

unsigned leading_bit(Row r) {
    const auto hi = static_cast<std::uint64_t>(r >> 64);
    return hi ? 64 + (std::bit_width(hi) - 1) : std::bit_width(static_cast<std::uint64_t>(r)) - 1;
}

// Reduced echelon basis keyed by leading bit.
class F2Basis {
public:
    bool insert(Row r) {
        for (const auto& [lead, v] : rows_)
            if ((r >> lead) & 1) r ^= v;
        if (!r) return false;
        const unsigned lead = leading_bit(r);
        for (auto& [l, v] : rows_)
            if ((v >> lead) & 1) v ^= r;
        rows_.emplace(lead, r);
        return true;
    }
    std::size_t size() const { return rows_.size(); }
    const std::map<unsigned, Row>& rows() const { return rows_; }

private:
    std::map<unsigned, Row> rows_;
};

// Elements (d0, d1) of Sel^2 for y^2 = (x - e0)(x - e1)(x - e2), with d_i
// the class of x - e_i, as 2m-bit vectors over the generators -1, primes.
struct SelmerTwo {
    std::vector<BigInt> generators;
    std::vector<Row> basis;
};

SelmerTwo selmer_two(const std::array<BigInt, 3>& roots, const std::vector<BigInt>& primes) {
    SelmerTwo sel;
    sel.generators = {-1};
    sel.generators.insert(sel.generators.end(), primes.begin(), primes.end());
    const std::size_t m = sel.generators.size();
    if (2 * m > 128) throw std::invalid_argument("two-descent: too many bad primes");

    F2Basis equations;
    std::vector<BigInt> places = {0};
    places.insert(places.end(), primes.begin(), primes.end());
    for (const BigInt& p : places) {
        const LocalField field(p);
        const LocalImage image = local_image(roots, field);
        const unsigned width = 2 * field.bits;
        std::vector<unsigned> local(m);
        for (std::size_t j = 0; j < m; ++j) local[j] = field.integer_class(sel.generators[j]);
        // Every functional vanishing on the local image gives one equation.
        for (unsigned c = 1; c < (1u << width); ++c) {
            bool annihilates = true;
            for (const auto& [lead, w] : image.basis())
                if (std::popcount(c & w) % 2) {
                    annihilates = false;
                    break;
                }
            if (!annihilates) continue;
            Row r = 0;
            for (std::size_t j = 0; j < m; ++j) {
                if (std::popcount(c & local[j]) % 2) r |= Row{1} << j;
                if (std::popcount(c & (local[j] << field.bits)) % 2) r |= Row{1} << (m + j);
            }
            equations.insert(r);
        }
    }
    // Null space of the reduced equations: one vector per free bit.
    std::vector<bool> pivot(2 * m, false);
    for (const auto& [lead, r] : equations.rows()) pivot[lead] = true;
    for (std::size_t f = 0; f < 2 * m; ++f) {
        if (pivot[f]) continue;
        Row v = Row{1} << f;
        for (const auto& [lead, r] : equations.rows())
            if ((r >> f) & 1) v |= Row{1} << lead;
        sel.basis.push_back(v);
    }
    if (sel.basis.size() < 2) throw std::logic_error("two-descent: Selmer group misses the 2-torsion");
    return sel;
}

}  // namespace

std::vector<std::array<SquareClass, 2>> two_selmer_basis(const CurveQ& e) {
    const SelmerTwo sel = selmer_two(e.roots, IsogenyPair::of(e).primes);
    const std::size_t m = sel.generators.size();
    std::vector<std::array<SquareClass, 2>> out;
    for (Row v : sel.basis) {
        std::array<BigInt, 2> d = {1, 1};
        for (std::size_t j = 0; j < m; ++j) {
            if ((v >> j) & 1) d[0] *= sel.generators[j];
            if ((v >> (m + j)) & 1) d[1] *= sel.generators[j];
        }
        out.push_back({SquareClass::from_squarefree(d[0]), SquareClass::from_squarefree(d[1])});
    }
    return out;
}

int two_selmer_rank(const CurveQ& e) {
    return static_cast<int>(selmer_two(e.roots, IsogenyPair::of(e).primes).basis.size()) - 2;
}

// ---------------------------------------------------------------------------
// Complete 2-descent map and rank lower bounds

std::array<SquareClass, 3> descent_image(const PointQ& pt, const CurveQ& e) {
    if (pt.infinity) throw std::invalid_argument("descent_image: point at infinity");
    const std::vector<BigInt> support = IsogenyPair::of(e).primes;
    const BigInt& num = pt.x.get_num();
    const BigInt& den = pt.x.get_den();
    std::array<SquareClass, 3> out;
    int vanishing = -1;
    for (std::size_t i = 0; i < 3; ++i) {
        const BigInt v = num - e.roots[i] * den;
        if (v == 0) {
            vanishing = static_cast<int>(i);
            continue;
        }
        // den is a square for points on the curve, so the class is that of v.
        const auto cls = squarefree_part_over(v, support);
        out[i] = SquareClass::from_squarefree(cls ? *cls : squarefree_part(v));
    }
    if (vanishing >= 0) {
        const auto i = static_cast<std::size_t>(vanishing);
        out[i] = out[(i + 1) % 3] * out[(i + 2) % 3];
    }
    return out;
}

namespace {

// Maps squarefree classes to F2 vectors: bit 0 is the sign, later bits
// index primes as they are first seen.
class ClassEncoder {
public:
    explicit ClassEncoder(std::vector<BigInt> primes) : primes_(std::move(primes)) {}

    std::vector<std::size_t> bits(const SquareClass& c) {
        std::vector<std::size_t> out;
        if (sgn(c.value()) < 0) out.push_back(0);
        BigInt rest = abs(c.value());
        for (std::size_t i = 0; i < primes_.size() && rest != 1; ++i) {
            if (mpz_divisible_p(rest.get_mpz_t(), primes_[i].get_mpz_t())) {
                rest /= primes_[i];
                out.push_back(i + 1);
            }
        }
        if (rest != 1) {
            for (const auto& p : factorize(rest).primes()) {
                primes_.push_back(p);
                out.push_back(primes_.size());
            }
        }
        return out;
    }

    std::size_t width() const { return primes_.size() + 1; }

private:
    std::vector<BigInt> primes_;
};


// Incremental F2 basis over the concatenated class vectors of descent images.
class ImageBasis {
public:
    explicit ImageBasis(const CurveQ& e) : curve_(e), encoder_(IsogenyPair::of(e).primes) {}

    /// True when the image of p enlarges the span.
    bool insert(const PointQ& p) {
        if (p.infinity) return false;
        const auto image = descent_image(p, curve_);
        std::set<std::size_t> v;
        for (std::size_t slot = 0; slot < 3; ++slot)
            for (std::size_t b : encoder_.bits(image[slot])) v.insert(slot * kStride + b);
        while (!v.empty()) {
            const std::size_t lead = *v.rbegin();
            auto it = pivots_.find(lead);
            if (it == pivots_.end()) {
                pivots_.emplace(lead, std::move(v));
                return true;
            }
            std::set<std::size_t> next;
            std::set_symmetric_difference(v.begin(), v.end(), it->second.begin(), it->second.end(),
                                          std::inserter(next, next.end()));
            v = std::move(next);
        }
        return false;
    }

    int dimension() const { return static_cast<int>(pivots_.size()); }

private:
    static constexpr std::size_t kStride = std::size_t{1} << 20;

    const CurveQ& curve_;
    ClassEncoder encoder_;
    std::map<std::size_t, std::set<std::size_t>> pivots_;
};

// gcd of #E(F_p) over good odd primes; the torsion order divides it.
std::uint64_t torsion_order_bound(const CurveQ& e) {
    std::uint64_t g = 0;
    int used = 0;
    for (std::uint32_t p : primes_below(1000)) {
        if (p == 2 || !has_good_reduction(e, p)) continue;
        g = std::gcd(g, count_points(e, p).np);
        if (++used >= 12 && g == 4) break;
    }
    return g;
}

// Integer roots of rhs(x) = target (target > 0).
std::vector<BigInt> integer_abscissae(const CurveQ& e, const BigInt& target) {
    std::vector<BigInt> out;
    const BigInt bound = 1 + abs(e.a2) + abs(e.a4) + target;
    // Critical points (-a2 +- sqrt(a2^2 - 3 a4)) / 3, floored approximately.
    BigInt root;
    const BigInt disc = e.a2 * e.a2 - 3 * e.a4;
    mpz_sqrt(root.get_mpz_t(), disc.get_mpz_t());
    BigInt k1, k2;
    mpz_fdiv_q_ui(k1.get_mpz_t(), BigInt(-e.a2 - root).get_mpz_t(), 3);
    mpz_fdiv_q_ui(k2.get_mpz_t(), BigInt(-e.a2 + root).get_mpz_t(), 3);
    std::set<BigInt> found;
    auto check = [&](const BigInt& x) {
        if (e.rhs(x) == target) found.insert(x);
    };
    // Binary search on a range where rhs is monotone.
    auto search = [&](BigInt lo, BigInt hi, bool increasing) {
        if (lo > hi) return;
        while (lo < hi) {
            BigInt mid = lo + (hi - lo) / 2;
            const int c = cmp(e.rhs(mid), target);
            if ((increasing ? c : -c) >= 0) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        check(lo);
    };
    search(-bound, k1 - 2, true);
    search(k1 + 2, k2 - 2, false);
    search(k2 + 2, bound, true);
    for (int d = -2; d <= 2; ++d) {
        check(k1 + d);
        check(k2 + d);
    }
    out.assign(found.begin(), found.end());
    return out;
}

void positive_divisors(const Factorization& f, std::size_t i, const BigInt& acc, std::vector<BigInt>& out) {
    if (i == f.factors.size()) {
        out.push_back(acc);
        return;
    }
    BigInt v = acc;
    for (unsigned k = 0; k <= f.factors[i].exponent; ++k) {
        positive_divisors(f, i + 1, v, out);
        v *= f.factors[i].prime;
    }
}

}  // namespace

bool is_torsion(const PointQ& p, const CurveQ& e) {
    if (p.infinity || p.y == 0) return true;
    // Nagell-Lutz: torsion points are integral. Mazur: order <= 12.
    if (p.x.get_den() != 1 || p.y.get_den() != 1) return false;
    PointQ q = p;
    for (int k = 2; k <= 12; ++k) {
        q = add(q, p, e);
        if (q.infinity) return true;
        if (q.x.get_den() != 1 || q.y.get_den() != 1) return false;
    }
    return false;
}

std::vector<PointQ> torsion_points(const CurveQ& e) {
    const auto two = two_torsion(e);
    std::vector<PointQ> out(two.begin(), two.end());
    if (torsion_order_bound(e) == 4) return out;
    // Nagell-Lutz: y^2 divides disc(x (x - e1)(x - e2)), i.e. y | M below.
    const BigInt m = abs((e.roots[0] - e.roots[1]) * (e.roots[0] - e.roots[2]) * (e.roots[1] - e.roots[2]));
    std::vector<BigInt> ys;
    positive_divisors(factorize(m), 0, 1, ys);
    for (const auto& y : ys) {
        for (const auto& x : integer_abscissae(e, y * y)) {
            for (int sign : {1, -1}) {
                PointQ p{Rational(x), Rational(BigInt(sign * y)), false};
                if (is_torsion(p, e)) out.push_back(std::move(p));
            }
        }
    }
    return out;
}

int rank_lower_bound(const std::vector<PointQ>& points, const CurveQ& e) {
    for (const auto& p : points)
        if (!is_on_curve(p, e)) throw std::invalid_argument("rank_lower_bound: point " + format_point(p) + " is not on " + e.equation());
    ImageBasis basis(e);
    for (const auto& t : torsion_points(e)) basis.insert(t);
    const int torsion_dim = basis.dimension();
    for (const auto& p : points) basis.insert(p);
    return basis.dimension() - torsion_dim;
}

std::vector<PointQ> independent_points(const std::vector<PointQ>& points, const CurveQ& e) {
    ImageBasis basis(e);
    for (const auto& t : torsion_points(e)) basis.insert(t);
    std::vector<PointQ> out;
    for (const auto& p : points) {
        if (!is_on_curve(p, e)) throw std::invalid_argument("independent_points: point " + format_point(p) + " is not on " + e.equation());
        if (basis.insert(p)) out.push_back(p);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Point search

namespace {

struct SearchTorsor {
    BigInt d, a, e;
    bool dual = false;
};

// Bits needed for |v|.
std::size_t bits_of(const BigInt& v) { return v == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2); }

__int128 to_i128(const BigInt& v) {
    // Caller guarantees |v| < 2^100.
    BigInt mag = abs(v);
    unsigned __int128 out = 0;
    std::size_t count = 0;
    std::uint64_t words[2] = {0, 0};
    mpz_export(words, &count, -1, sizeof(std::uint64_t), 0, 0, mag.get_mpz_t());
    out = (static_cast<unsigned __int128>(words[1]) << 64) | words[0];
    return sgn(v) < 0 ? -static_cast<__int128>(out) : static_cast<__int128>(out);
}

BigInt from_i128(__int128 v) { return BigInt(to_string(v)); }

class PointCollector {
public:
    PointCollector(const CurveQ& e, std::optional<int> target) : curve_(e), basis_(e), target_(target) {
        for (const auto& t : torsion_points(e)) basis_.insert(t);
        torsion_dim_ = basis_.dimension();
    }

    /// Returns true when the search may stop.
    bool offer(PointQ p) {
        if (!is_on_curve(p, curve_)) throw std::logic_error("point search produced an off-curve point " + format_point(p));
        if (is_torsion(p, curve_)) return done();
        if (!seen_.insert(p.x).second) return done();
        if (target_) basis_.insert(p);
        points_.push_back(std::move(p));
        return done();
    }

    bool done() const { return target_ && basis_.dimension() - torsion_dim_ >= *target_; }
    std::vector<PointQ> take() { return std::move(points_); }

private:
    const CurveQ& curve_;
    ImageBasis basis_;
    std::optional<int> target_;
    int torsion_dim_ = 0;
    std::set<Rational> seen_;
    std::vector<PointQ> points_;
};

bool direct_sweep(const CurveQ& e, std::uint64_t bound, PointCollector& sink) {
    const auto b = static_cast<std::int64_t>(bound);
    // |m| <= B and k^4 <= B^2, so every term of m (m^2 + a2 m k^2 + a4 k^4)
    // is below max|coeff| * B^4.
    const auto bound_bits = static_cast<std::size_t>(64 - std::countl_zero(bound));
    const bool small = std::max(bits_of(e.a2), bits_of(e.a4)) + 4 * bound_bits + 3 < 126;
    const __int128 a2 = small ? to_i128(e.a2) : 0;
    const __int128 a4 = small ? to_i128(e.a4) : 0;
    for (std::int64_t k = 1; k * k <= b; ++k) {
        const __int128 k2 = static_cast<__int128>(k) * k;
        for (std::int64_t m = -b; m <= b; ++m) {
            if (m == 0 || std::gcd(m, k) != 1) continue;
            bool square = false;
            BigInt value;
            if (small) {
                const __int128 mm = m;
                const __int128 v = mm * (mm * mm + a2 * mm * k2 + a4 * k2 * k2);
                if (!is_perfect_square(v)) continue;
                value = from_i128(v);
                square = true;
            } else {
                const BigInt mb = static_cast<long>(m), kb2 = static_cast<long>(k * k);
                value = mb * (mb * mb + e.a2 * mb * kb2 + e.a4 * kb2 * kb2);
                square = is_perfect_square(value);
            }
            if (!square) continue;
            BigInt w;
            mpz_sqrt(w.get_mpz_t(), value.get_mpz_t());
            const BigInt kb = static_cast<long>(k);
            if (sink.offer(PointQ::affine(Rational(BigInt(m), kb * kb), Rational(w, kb * kb * kb)))) return true;
        }
    }
    return false;
}

std::optional<BigInt> quartic_square_root(const SearchTorsor& t, bool small, const __int128 (&c)[3], std::uint64_t u,
                                          std::uint64_t v) {
    if (small) {
        const __int128 u2 = static_cast<__int128>(u) * u, v2 = static_cast<__int128>(v) * v;
        const __int128 q = c[0] * u2 * u2 + c[1] * u2 * v2 + c[2] * v2 * v2;
        if (!is_perfect_square(q)) return std::nullopt;
        BigInt w, qb = from_i128(q);
        mpz_sqrt(w.get_mpz_t(), qb.get_mpz_t());
        return w;
    }
    const BigInt ub = static_cast<unsigned long>(u), vb = static_cast<unsigned long>(v);
    const BigInt u2 = ub * ub, v2 = vb * vb;
    const BigInt q = t.d * u2 * u2 + t.a * u2 * v2 + t.e * v2 * v2;
    if (!is_perfect_square(q)) return std::nullopt;
    BigInt w;
    mpz_sqrt(w.get_mpz_t(), q.get_mpz_t());
    return w;
}

PointQ torsor_point(const SearchTorsor& t, const IsogenyPair& dual, std::uint64_t u, std::uint64_t v, const BigInt& w) {
    const BigInt ub = static_cast<unsigned long>(u), vb = static_cast<unsigned long>(v);
    const Rational x(t.d * ub * ub, vb * vb);
    const Rational y(t.d * ub * w, vb * vb * vb);
    if (!t.dual) return PointQ::affine(x, y);
    // Push (X, Y) on E' down to E through the dual isogeny.
    const Rational x2 = x * x;
    return PointQ::affine(y * y / (4 * x2), y * (Rational(dual.b) - x2) / (8 * x2));
}

bool torsor_sweep(const std::vector<SearchTorsor>& torsors, const IsogenyPair& dual, std::uint64_t bound,
                  PointCollector& sink) {
    const int bound_bits = 64 - std::countl_zero(bound);
    struct Prepared {
        bool small;
        __int128 c[3];
    };
    std::vector<Prepared> prepared;
    for (const auto& t : torsors) {
        Prepared p{};
        const std::size_t widest = std::max({bits_of(t.d), bits_of(t.a), bits_of(t.e)});
        p.small = widest + 4 * static_cast<std::size_t>(bound_bits) + 3 < 126;
        if (p.small) {
            p.c[0] = to_i128(t.d);
            p.c[1] = to_i128(t.a);
            p.c[2] = to_i128(t.e);
        }
        prepared.push_back(p);
    }
    auto visit = [&](std::size_t i, std::uint64_t u, std::uint64_t v) {
        if (std::gcd(u, v) != 1) return false;
        const auto w = quartic_square_root(torsors[i], prepared[i].small, prepared[i].c, u, v);
        if (!w) return false;
        return sink.offer(torsor_point(torsors[i], dual, u, v, *w));
    };
    // Shells of max(u, v) so that small points on every torsor come first.
    for (std::uint64_t s = 1; s <= bound; ++s) {
        for (std::size_t i = 0; i < torsors.size(); ++i) {
            for (std::uint64_t v = 1; v <= s; ++v)
                if (visit(i, s, v)) return true;
            for (std::uint64_t u = 1; u < s; ++u)
                if (visit(i, u, s)) return true;
        }
    }
    return false;
}

std::vector<PointQ> search_with(const CurveQ& e, const std::vector<SquareClass>& forward,
                                const std::vector<SquareClass>& dual_classes, const SearchOptions& opts) {
    if (opts.height_bound < 1) throw std::invalid_argument("search_points: height bound must be >= 1");
    PointCollector sink(e, opts.target_rank);
    if (sink.done()) return {};
    const IsogenyPair pair = IsogenyPair::of(e);
    const IsogenyPair dual = pair.dual();
    if (opts.direct_sweep && direct_sweep(e, opts.height_bound, sink)) return sink.take();
    if (opts.torsor_sweep) {
        std::vector<SearchTorsor> torsors;
        for (const auto& d : forward) torsors.push_back({d.value(), pair.a, pair.b / d.value(), false});
        for (const auto& d : dual_classes) torsors.push_back({d.value(), dual.a, dual.b / d.value(), true});
        torsor_sweep(torsors, dual, opts.height_bound, sink);
    }
    return sink.take();
}

}  // namespace

std::vector<PointQ> search_points(const CurveQ& e, const SearchOptions& opts) {
    const IsogenyPair pair = IsogenyPair::of(e);
    std::vector<SquareClass> forward, dual;
    if (opts.torsor_sweep) {
        forward = phi_selmer(pair, IsogenySide::forward);
        dual = phi_selmer(pair, IsogenySide::dual);
    }
    return search_with(e, forward, dual, opts);
}

DescentReport run_descent(const CurveQ& e, std::uint64_t height_bound) {
    const IsogenyPair pair = IsogenyPair::of(e);
    DescentReport report;
    report.selmer_phi = phi_selmer(pair, IsogenySide::forward);
    report.selmer_phi_dual = phi_selmer(pair, IsogenySide::dual);
    report.selmer_rank = selmer_rank_from(report.selmer_phi.size(), report.selmer_phi_dual.size());
    report.two_selmer_rank = two_selmer_rank(e);
    if (height_bound > 0) {
        report.points_found = search_with(e, report.selmer_phi, report.selmer_phi_dual,
                                          {.height_bound = height_bound, .target_rank = report.two_selmer_rank});
        report.rank_lb = rank_lower_bound(report.points_found, e);
    }
    return report;
}

DescentReport run_descent_iterative(const CurveQ& e, std::uint64_t max_bound) {
    DescentReport report = run_descent(e, 0);
    for (std::uint64_t bound = 10; report.rank_lb < report.two_selmer_rank; bound *= 10) {
        const std::uint64_t b = std::min(bound, max_bound);
        report.points_found = search_with(e, report.selmer_phi, report.selmer_phi_dual,
                                          {.height_bound = b, .target_rank = report.two_selmer_rank});
        report.rank_lb = rank_lower_bound(report.points_found, e);
        if (b == max_bound) break;
    }
    return report;
}

}  // namespace thetarank
