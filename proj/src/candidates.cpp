#include "thetarank/candidates.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <stdexcept>

namespace thetarank {

BigInt kan_number(std::uint64_t p, std::uint64_t q, const ThetaParams& theta) {
    if (p == 0 || q == 0) throw std::invalid_argument("kan_number: p and q must be positive");
    if (std::gcd(p, q) != 1) throw std::invalid_argument("kan_number: gcd(p, q) must be 1");
    const BigInt pb = static_cast<unsigned long>(p), qb = static_cast<unsigned long>(q);
    const BigInt r = static_cast<long>(theta.r()), s = static_cast<long>(theta.s());
    // 2rq + p(r - s) > 0 since r > |s|.
    return squarefree_part(BigInt(pb * qb * (pb + qb) * (2 * r * qb + pb * (r - s))));
}

int omega_odd(const BigInt& n) {
    if (n < 1) throw std::invalid_argument("omega_odd: n must be positive");
    const Factorization f = factorize(n);
    return static_cast<int>(std::count_if(f.factors.begin(), f.factors.end(),
                                          [](const PrimePower& pp) { return pp.prime != 2; }));
}

bool yoshida_class(const BigInt& n, const ThetaParams& theta) {
    static constexpr std::array<unsigned, 9> kPiOver3 = {6, 10, 11, 13, 17, 18, 21, 22, 23};
    static constexpr std::array<unsigned, 9> kTwoPiOver3 = {5, 9, 10, 15, 17, 19, 21, 22, 23};
    const auto residue = static_cast<unsigned>(mpz_fdiv_ui(n.get_mpz_t(), 24));
    if (theta.is_pi_over_3()) return std::find(kPiOver3.begin(), kPiOver3.end(), residue) != kPiOver3.end();
    if (theta.is_two_pi_over_3())
        return std::find(kTwoPiOver3.begin(), kTwoPiOver3.end(), residue) != kTwoPiOver3.end();
    throw std::invalid_argument("yoshida_class: only pi/3 and 2pi/3 have residue sets");
}

std::vector<CandidateRecord> generate_candidates(const CandidateGrid& grid, const ThetaParams& theta) {
    if (grid.pmin < 1 || grid.qmin < 1) throw std::invalid_argument("generate_candidates: bounds must be >= 1");
    std::map<BigInt, CandidateRecord> by_n;
    std::set<BigInt> too_few_primes;
    for (std::uint64_t p = grid.pmin; p <= grid.pmax; ++p) {
        for (std::uint64_t q = grid.qmin; q <= grid.qmax; ++q) {
            if (std::gcd(p, q) != 1) continue;
            const BigInt n = kan_number(p, q, theta);
            auto it = by_n.find(n);
            if (it == by_n.end()) {
                if (too_few_primes.count(n)) continue;
                const int omega = omega_odd(n);
                if (omega < grid.min_omega) {
                    too_few_primes.insert(n);
                    continue;
                }
                CandidateRecord rec{.n = n, .theta = theta, .omega_odd = omega};
                it = by_n.emplace(n, std::move(rec)).first;
            }
            it->second.provenance.emplace_back(p, q);
        }
    }
    std::vector<CandidateRecord> out;
    out.reserve(by_n.size());
    for (auto& [n, rec] : by_n) out.push_back(std::move(rec));
    return out;
}

}  // namespace thetarank
