#pragma once

// Elementary number theory on machine words and GMP integers.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "eiscong/error.hpp"

namespace eiscong {

using Integer = mpz_class;
using Rational = mpq_class;

namespace detail {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

} // namespace detail

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1U) result = detail::mul_mod(result, base, m);
        base = detail::mul_mod(base, base, m);
        exp >>= 1U;
    }
    return result;
}

/// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1U) == 0) {
        d >>= 1U;
        ++s;
    }
    for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned i = 1; i < s; ++i) {
            x = detail::mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

inline bool is_prime(const Integer& n) {
    if (n < 2) return false;
    if (n.fits_ulong_p()) return is_prime(static_cast<std::uint64_t>(n.get_ui()));
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

/// Modular inverse of a modulo a prime (or any modulus coprime to a).
inline std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        std::tie(t, new_t) = std::pair{new_t, t - q * new_t};
        std::tie(r, new_r) = std::pair{new_r, r - q * new_r};
    }
    if (r != 1) throw InvalidArgument("value is not invertible modulo " + std::to_string(m));
    if (t < 0) t += static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(t);
}

/// Least non-negative residue of an arbitrary integer.
inline std::uint64_t residue(const Integer& n, std::uint64_t m) {
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), n.get_mpz_t(), m);
    return r.get_ui();
}

inline std::uint64_t residue(std::int64_t n, std::uint64_t m) {
    std::int64_t r = n % static_cast<std::int64_t>(m);
    if (r < 0) r += static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(r);
}

/// Sum of the positive divisors of n.
inline std::uint64_t sigma(std::uint64_t n) {
    if (n == 0) throw InvalidArgument("sigma is undefined at 0");
    std::uint64_t total = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        std::uint64_t power_sum = 1, power = 1;
        while (n % p == 0) {
            n /= p;
            power *= p;
            power_sum += power;
        }
        total *= power_sum;
    }
    if (n > 1) total *= n + 1;
    return total;
}

/// Distinct prime divisors in ascending order.
inline std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
    std::vector<std::uint64_t> primes;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        primes.push_back(p);
        while (n % p == 0) n /= p;
    }
    if (n > 1) primes.push_back(n);
    return primes;
}

inline bool is_squarefree(std::uint64_t n) {
    if (n == 0) return false;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % (p * p) == 0) return false;
        if (n % p == 0) n /= p;
    }
    return true;
}

/// Exponent of p in n (n > 0, p prime).
inline unsigned valuation(std::uint64_t n, std::uint64_t p) {
    unsigned e = 0;
    while (n % p == 0) {
        n /= p;
        ++e;
    }
    return e;
}

inline std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) {
    std::vector<std::uint64_t> primes;
    if (bound < 2) return primes;
    std::vector<bool> composite(bound + 1, false);
    for (std::uint64_t i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
    }
    return primes;
}

namespace detail {

// Brent's variant of Pollard rho; n odd composite.
inline Integer pollard_rho(const Integer& n) {
    for (unsigned long c = 1;; ++c) {
        Integer y = 2, x, g = 1, q = 1, ys;
        unsigned long r = 1;
        const unsigned long m = 128;
        auto f = [&](const Integer& v) {
            Integer w = v * v + c;
            mpz_mod(w.get_mpz_t(), w.get_mpz_t(), n.get_mpz_t());
            return w;
        };
        do {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = f(y);
            unsigned long k = 0;
            do {
                ys = y;
                for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    Integer diff = abs(x - y);
                    q = q * diff;
                    mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                Integer diff = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

inline void factor_into(Integer n, std::map<Integer, unsigned>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    Integer d = pollard_rho(n);
    factor_into(d, out);
    factor_into(Integer(n / d), out);
}

} // namespace detail

/// Prime factorisation of |n| (n != 0), trial division then Pollard rho.
inline std::map<Integer, unsigned> factor(const Integer& n) {
    if (n == 0) throw InvalidArgument("cannot factor zero");
    std::map<Integer, unsigned> out;
    Integer m = abs(n);
    for (unsigned long p = 2; p < 10000; p += (p == 2 ? 1 : 2)) {
        if (mpz_divisible_ui_p(m.get_mpz_t(), p) == 0) continue;
        unsigned e = 0;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p) != 0) {
            mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
            ++e;
        }
        out[Integer(p)] = e;
    }
    detail::factor_into(m, out);
    return out;
}

/// Largest x with x*x <= n (n >= 0).
inline Integer isqrt(const Integer& n) {
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

} // namespace eiscong
