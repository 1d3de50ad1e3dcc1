#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thetarank/curves.hpp"

namespace thetarank {

/// An element of Q*/(Q*)^2, stored as its signed squarefree representative.
class SquareClass {
public:
    SquareClass() = default;
    /// Class of a nonzero integer or rational (factorizes).
    static SquareClass of(const BigInt& m);
    static SquareClass of(const Rational& q);
    /// Wraps a value already known to be squarefree.
    static SquareClass from_squarefree(BigInt d) { return SquareClass(std::move(d)); }

    const BigInt& value() const { return d_; }
    bool is_trivial() const { return d_ == 1; }

    friend SquareClass operator*(const SquareClass& a, const SquareClass& b);
    friend bool operator==(const SquareClass&, const SquareClass&) = default;
    friend bool operator<(const SquareClass& a, const SquareClass& b) { return a.d_ < b.d_; }

private:
    explicit SquareClass(BigInt d) : d_(std::move(d)) {}
    BigInt d_ = 1;
};

/// E: y^2 = x (x^2 + a x + b) together with the primes of 2 b (a^2 - 4b).
struct IsogenyPair {
    BigInt a;
    BigInt b;
    /// Increasing primes dividing 2 * b * (a^2 - 4b).
    std::vector<BigInt> primes;

    static IsogenyPair of(const CurveQ& e);
    /// The 2-isogenous curve y^2 = x (x^2 - 2a x + (a^2 - 4b)).
    IsogenyPair dual() const;
};

enum class IsogenySide { forward, dual };

/// Homogeneous space w^2 = d u^4 + a u^2 v^2 + (b/d) v^4.
struct Torsor {
    SquareClass d;
    BigInt a;
    BigInt e;  // b / d

    static Torsor make(const IsogenyPair& pair, const SquareClass& d);
    /// Discriminant of the quartic d x^4 + a x^2 + e.
    BigInt quartic_discriminant() const;
};

/// A place of Q: the real place or a finite prime.
class Place {
public:
    static Place real() { return Place(std::nullopt); }
    static Place prime(BigInt p) { return Place(std::move(p)); }

    bool is_real() const { return !p_.has_value(); }
    const BigInt& p() const { return *p_; }
    std::string name() const { return is_real() ? "inf" : p_->get_str(); }

private:
    explicit Place(std::optional<BigInt> p) : p_(std::move(p)) {}
    std::optional<BigInt> p_;
};

/// Strategy for the p-adic test. `automatic` uses residue roots for odd p
/// and the valuation lemmas at p = 2.
enum class LocalMethod { automatic, valuation_lemmas, residue_roots };

/// Whether the torsor has a point over R or Q_p.
bool locally_solvable(const Torsor& t, const Place& place, LocalMethod method = LocalMethod::automatic);

/// Whether w^2 = c4 x^4 + c3 x^3 + c2 x^2 + c1 x + c0 has a solution with
/// (x : 1) or (1 : z) primitive over Z_p. Coefficients low to high.
bool quartic_solvable_at(const std::array<BigInt, 5>& coeffs, const BigInt& p,
                         LocalMethod method = LocalMethod::automatic);

struct PlaceVerdict {
    std::string place;
    bool solvable = false;
};

struct TorsorVerdict {
    SquareClass d;
    bool in_selmer = false;
    /// Places checked in order; a full sweep records every place, the fast
    /// sweep stops at the first failure.
    std::vector<PlaceVerdict> places;
};

/// Selmer group of the isogeny on the given side: squarefree d | b whose
/// torsor is solvable at infinity and at every p | 2 b (a^2 - 4b). Sorted.
std::vector<SquareClass> phi_selmer(const IsogenyPair& pair, IsogenySide side);

/// As phi_selmer, with a verdict for every candidate d.
std::vector<TorsorVerdict> phi_selmer_verdicts(const IsogenyPair& pair, IsogenySide side);

/// log2(|S^phi| |S^phi'|) - 2.
int selmer_rank(const CurveQ& e);

/// Basis of the 2-Selmer group from complete 2-descent, as classes of
/// (x - e0, x - e1); the class of x - e2 is their product.
std::vector<std::array<SquareClass, 2>> two_selmer_basis(const CurveQ& e);
/// dim Sel^2(E/Q) - 2. Never exceeds selmer_rank.
int two_selmer_rank(const CurveQ& e);

/// Classes of (x - e_i) for the three 2-torsion abscissae; at x = e_i the
/// vanishing slot takes the product of the other two. Throws for infinity.
std::array<SquareClass, 3> descent_image(const PointQ& p, const CurveQ& e);

/// Full rational torsion subgroup (2-torsion plus any extra torsion).
std::vector<PointQ> torsion_points(const CurveQ& e);

bool is_torsion(const PointQ& p, const CurveQ& e);

/// F2-rank of the span of descent images of `points` modulo the span of
/// the torsion images. Throws std::invalid_argument for off-curve points.
int rank_lower_bound(const std::vector<PointQ>& points, const CurveQ& e);

/// The points, in order, whose descent images enlarge the span; their
/// count is rank_lower_bound(points, e).
std::vector<PointQ> independent_points(const std::vector<PointQ>& points, const CurveQ& e);

struct SearchOptions {
    std::uint64_t height_bound = 1000;
    /// Stop once rank_lower_bound of the found points reaches this.
    std::optional<int> target_rank;
    bool direct_sweep = true;
    bool torsor_sweep = true;
};

/// Non-torsion points from (i) x = m / k^2 with |m| <= B, k^2 <= B and (ii)
/// primitive (u, v) with u, v <= B on every Selmer torsor of E and E',
/// mapped back to E. Deduplicated up to sign of y, ordered by discovery.
std::vector<PointQ> search_points(const CurveQ& e, const SearchOptions& opts);
inline std::vector<PointQ> search_points(const CurveQ& e, std::uint64_t height_bound) {
    return search_points(e, SearchOptions{.height_bound = height_bound});
}

struct DescentReport {
    std::vector<SquareClass> selmer_phi;
    std::vector<SquareClass> selmer_phi_dual;
    int selmer_rank = 0;
    /// Sharper upper bound from complete 2-descent.
    int two_selmer_rank = 0;
    int rank_lb = 0;
    std::vector<PointQ> points_found;
};

/// Selmer sets, then a point search (when height_bound > 0) whose results
/// give rank_lb. The search stops early once rank_lb reaches
/// two_selmer_rank.
DescentReport run_descent(const CurveQ& e, std::uint64_t height_bound);

/// Deepens the point search through 10, 100, ... up to max_bound until the
/// lower bound meets two_selmer_rank.
DescentReport run_descent_iterative(const CurveQ& e, std::uint64_t max_bound);

}  // namespace thetarank
