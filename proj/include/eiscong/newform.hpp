#pragma once

// q-expansion of the weight-2 newform attached to a semistable curve.

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "eiscong/arith.hpp"
#include "eiscong/curves.hpp"
#include "eiscong/error.hpp"
#include "eiscong/series.hpp"

namespace eiscong {

struct NewformExpansion {
    WeierstrassCurve curve;
    std::uint64_t level = 0;
    RationalSeries series;  // a_0 = 0, a_1 = 1, integer coefficients
};

/// a_p for every prime p <= bound (good primes from point counts, bad primes +-1).
inline std::map<std::uint64_t, std::int64_t> prime_coefficients(const WeierstrassCurve& c, std::uint64_t bound) {
    std::map<std::uint64_t, std::int64_t> out;
    for (auto p : primes_up_to(bound)) out[p] = reduction_data(c, p).a_p;
    return out;
}

/// Coefficient table from a_p: the three-term recursion at good primes, a_p^k at
/// bad ones, and multiplicativity across coprime factors.
inline std::vector<Integer> newform_coefficients(const std::map<std::uint64_t, std::int64_t>& a_prime,
                                                 std::uint64_t level, std::size_t precision) {
    std::vector<Integer> a(precision + 1, 0);
    if (precision == 0) return a;
    a[1] = 1;
    std::vector<std::uint64_t> spf(precision + 1, 0);
    for (std::uint64_t i = 2; i <= precision; ++i) {
        if (spf[i] != 0) continue;
        for (std::uint64_t j = i; j <= precision; j += i) {
            if (spf[j] == 0) spf[j] = i;
        }
    }
    for (std::uint64_t n = 2; n <= precision; ++n) {
        const std::uint64_t p = spf[n];
        std::uint64_t pk = 1;
        unsigned k = 0;
        std::uint64_t m = n;
        while (m % p == 0) {
            m /= p;
            pk *= p;
            ++k;
        }
        if (m > 1) {
            a[n] = a[pk] * a[m];
            continue;
        }
        const Integer ap(static_cast<long>(a_prime.at(p)));
        if (k == 1) {
            a[n] = ap;
        } else if (level % p == 0) {
            a[n] = ap * a[pk / p];
        } else {
            a[n] = ap * a[pk / p] - Integer(static_cast<unsigned long>(p)) * a[pk / (p * p)];
        }
    }
    return a;
}

inline NewformExpansion af_coeffs(const WeierstrassCurve& c, std::size_t precision) {
    const std::uint64_t N = conductor_semistable(c);
    const auto a_prime = prime_coefficients(c, precision);
    auto ints = newform_coefficients(a_prime, N, precision);
    std::vector<Rational> coeffs(ints.begin(), ints.end());
    return NewformExpansion{c, N, RationalSeries(RationalField{}, precision, std::move(coeffs))};
}

struct OrdinarityResult {
    bool ordinary = false;       // a_r not divisible by r
    bool congruent_to_one = false;  // a_r = 1 mod r
    std::int64_t a_r = 0;
};

inline OrdinarityResult ordinarity_check(const WeierstrassCurve& c, std::uint64_t r) {
    if (!is_prime(r)) throw InvalidArgument(std::to_string(r) + " is not prime");
    const std::uint64_t N = conductor_semistable(c);
    if (N % r == 0) throw BadPrimeQuery("r = " + std::to_string(r) + " divides the conductor " + std::to_string(N));
    const auto rd = reduction_data(c, r);
    const std::uint64_t res = residue(rd.a_p, r);
    return OrdinarityResult{res != 0, res == 1 % r, rd.a_p};
}

} // namespace eiscong
