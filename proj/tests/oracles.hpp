#pragma once

#include <array>

#include "thetarank/arith.hpp"

namespace thetarank::oracles {

enum class Oracle { yes, no, unknown };

// Exhaustive search modulo p^depth for a primitive point of
// w^2 = c4 x^4 + ... + c0: residue classes of x that are not yet decided are
// refined one p-adic digit at a time.
struct QuarticOracle {
    std::array<BigInt, 5> c;
    BigInt p;
    int depth;

    BigInt eval(const std::array<BigInt, 5>& k, const BigInt& x) const {
        BigInt v = k[4];
        for (int i = 3; i >= 0; --i) v = v * x + k[i];
        return v;
    }

    // Value of q on x + p^k Z_p is known mod p^k.
    Oracle classify(const std::array<BigInt, 5>& k, const BigInt& x, int level) const {
        const BigInt pk = pow(level);
        BigInt q = eval(k, x) % pk;
        if (q < 0) q += pk;
        if (q == 0) return Oracle::unknown;
        int m = 0;
        while (q % p == 0) {
            q /= p;
            ++m;
        }
        const int known = level - m;  // unit part known mod p^known
        if (m % 2) return Oracle::no;
        if (p == 2) {
            if (known < 3) return Oracle::unknown;
            return q % 8 == 1 ? Oracle::yes : Oracle::no;
        }
        return legendre(BigInt(q % p).get_si(), p.get_ui()) == 1 ? Oracle::yes : Oracle::no;
    }

    BigInt pow(int k) const {
        BigInt r = 1;
        for (int i = 0; i < k; ++i) r *= p;
        return r;
    }

    // Search x in start + p^level Z_p (x in Z_p chart) up to depth.
    Oracle search(const std::array<BigInt, 5>& k, const BigInt& start, int level) const {
        const Oracle here = classify(k, start, level);
        if (here != Oracle::unknown || level >= depth) return here;
        bool unknown = false;
        const BigInt step = pow(level);
        for (BigInt digit = 0; digit < p; ++digit) {
            const Oracle sub = search(k, start + digit * step, level + 1);
            if (sub == Oracle::yes) return Oracle::yes;
            unknown |= sub == Oracle::unknown;
        }
        return unknown ? Oracle::unknown : Oracle::no;
    }

    Oracle run() const {
        // Chart (x : 1), x in Z_p.
        bool unknown = false;
        for (BigInt digit = 0; digit < p; ++digit) {
            const Oracle r = search(c, digit, 1);
            if (r == Oracle::yes) return Oracle::yes;
            unknown |= r == Oracle::unknown;
        }
        // Chart (1 : z), z in p Z_p: reversed coefficients.
        const std::array<BigInt, 5> rev = {c[4], c[3], c[2], c[1], c[0]};
        const Oracle r = search(rev, 0, 1);
        if (r == Oracle::yes) return Oracle::yes;
        unknown |= r == Oracle::unknown;
        return unknown ? Oracle::unknown : Oracle::no;
    }
};

}  // namespace thetarank::oracles
