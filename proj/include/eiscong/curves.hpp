#pragma once

// Elliptic curves over Q given by integral Weierstrass models: invariants,
// point counts over F_p, local reduction data and the rational torsion order.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eiscong/arith.hpp"
#include "eiscong/error.hpp"

namespace eiscong {

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6. Callers supply globally
/// minimal models; conductor and torsion are only meaningful under that contract.
struct WeierstrassCurve {
    std::array<Integer, 5> a;  // a1, a2, a3, a4, a6
    std::optional<std::string> label;
    std::optional<bool> optimal;

    const Integer& a1() const { return a[0]; }
    const Integer& a2() const { return a[1]; }
    const Integer& a3() const { return a[2]; }
    const Integer& a4() const { return a[3]; }
    const Integer& a6() const { return a[4]; }

    std::string name() const { return label.value_or(coefficient_string()); }

    std::string coefficient_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < 5; ++i) {
            if (i) s += ",";
            s += a[i].get_str();
        }
        return s + "]";
    }
};

inline WeierstrassCurve make_curve(long a1, long a2, long a3, long a4, long a6,
                                   std::optional<std::string> label = std::nullopt) {
    return WeierstrassCurve{{Integer(a1), Integer(a2), Integer(a3), Integer(a4), Integer(a6)}, std::move(label), {}};
}

struct Invariants {
    Integer b2, b4, b6, b8, c4, c6, discriminant;
};

inline Invariants invariants(const WeierstrassCurve& c) {
    const auto& [a1, a2, a3, a4, a6] = c.a;
    Invariants inv;
    inv.b2 = a1 * a1 + 4 * a2;
    inv.b4 = 2 * a4 + a1 * a3;
    inv.b6 = a3 * a3 + 4 * a6;
    inv.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    inv.c4 = inv.b2 * inv.b2 - 24 * inv.b4;
    inv.c6 = -inv.b2 * inv.b2 * inv.b2 + 36 * inv.b2 * inv.b4 - 216 * inv.b6;
    inv.discriminant = -inv.b2 * inv.b2 * inv.b8 - 8 * inv.b4 * inv.b4 * inv.b4 - 27 * inv.b6 * inv.b6 +
                       9 * inv.b2 * inv.b4 * inv.b6;
    if (1728 * inv.discriminant != inv.c4 * inv.c4 * inv.c4 - inv.c6 * inv.c6) {
        throw InternalError("invariant identity 1728*disc = c4^3 - c6^2 failed");
    }
    if (inv.discriminant == 0) throw SingularCurve("curve " + c.name() + " has zero discriminant");
    return inv;
}

/// Product of the primes dividing the discriminant, after checking that each of
/// them gives multiplicative reduction (p does not divide c4).
inline std::uint64_t conductor_semistable(const WeierstrassCurve& c) {
    const auto inv = invariants(c);
    Integer N = 1;
    for (const auto& [p, e] : factor(inv.discriminant)) {
        if (mpz_divisible_p(inv.c4.get_mpz_t(), p.get_mpz_t()) != 0) {
            throw NotSemistable(p.fits_ulong_p() ? p.get_ui() : 0);
        }
        N *= p;
    }
    if (!N.fits_ulong_p()) throw InvalidArgument("conductor does not fit in 64 bits");
    return N.get_ui();
}

struct PointCount {
    std::uint64_t total_smooth = 0;  // includes the point at infinity
    bool singular_reduction = false;
};

namespace detail {

struct ReducedCurve {
    std::uint64_t p;
    std::array<std::uint64_t, 5> a;
};

inline ReducedCurve reduce(const WeierstrassCurve& c, std::uint64_t p) {
    ReducedCurve r{p, {}};
    for (std::size_t i = 0; i < 5; ++i) r.a[i] = residue(c.a[i], p);
    return r;
}

} // namespace detail

/// Exhaustive O(p^2) enumeration of smooth points of the reduction.
inline PointCount count_points_exhaustive(const WeierstrassCurve& c, std::uint64_t p) {
    const auto inv = invariants(c);
    const auto rc = detail::reduce(c, p);
    const auto [a1, a2, a3, a4, a6] = rc.a;
    auto mul = [p](std::uint64_t x, std::uint64_t y) { return detail::mul_mod(x, y, p); };
    auto neg = [p](std::uint64_t x) { return x == 0 ? 0 : p - x; };
    std::uint64_t count = 1;
    for (std::uint64_t x = 0; x < p; ++x) {
        const std::uint64_t x2 = mul(x, x);
        const std::uint64_t rhs = (mul(x2, x) + mul(a2, x2) + mul(a4, x) + a6) % p;
        // F_x = a1 y - 3x^2 - 2 a2 x - a4, F_y = 2y + a1 x + a3
        const std::uint64_t fx_const = (mul(3, x2) + mul(mul(2, a2), x) + a4) % p;
        for (std::uint64_t y = 0; y < p; ++y) {
            const std::uint64_t lhs = (mul(y, y) + mul(mul(a1, x), y) + mul(a3, y)) % p;
            if (lhs != rhs) continue;
            const std::uint64_t fx = (mul(a1, y) + neg(fx_const)) % p;
            const std::uint64_t fy = (mul(2, y) + mul(a1, x) + a3) % p;
            if (fx == 0 && fy == 0) continue;
            ++count;
        }
    }
    return PointCount{count, residue(inv.discriminant, p) == 0};
}

/// #E(F_p) = p + 1 + sum_x chi(x^3 + A x + B) on the model y^2 = x^3 - 27 c4 x - 54 c6.
/// Only valid for good reduction at p > 3.
inline PointCount count_points_character_sum(const WeierstrassCurve& c, std::uint64_t p) {
    if (p <= 3) throw InvalidArgument("character sums need p > 3");
    const auto inv = invariants(c);
    if (residue(inv.discriminant, p) == 0) throw InvalidArgument("character sums need good reduction");
    const std::uint64_t A = residue(Integer(-27 * inv.c4), p);
    const std::uint64_t B = residue(Integer(-54 * inv.c6), p);
    std::vector<std::int8_t> chi(p, -1);
    chi[0] = 0;
    for (std::uint64_t y = 1; y <= p / 2; ++y) chi[detail::mul_mod(y, y, p)] = 1;
    std::int64_t sum = 0;
    for (std::uint64_t x = 0; x < p; ++x) {
        const std::uint64_t x2 = detail::mul_mod(x, x, p);
        const std::uint64_t v = (detail::mul_mod(x2, x, p) + detail::mul_mod(A, x, p) + B) % p;
        sum += chi[v];
    }
    return PointCount{static_cast<std::uint64_t>(static_cast<std::int64_t>(p) + 1 + sum), false};
}

/// Smooth points of the reduction mod p, point at infinity included.
inline PointCount count_points(const WeierstrassCurve& c, std::uint64_t p) {
    if (!is_prime(p)) throw InvalidArgument(std::to_string(p) + " is not prime");
    const auto inv = invariants(c);
    const bool good = residue(inv.discriminant, p) != 0;
    if (good && p > 3) return count_points_character_sum(c, p);
    return count_points_exhaustive(c, p);
}

enum class ReductionKind { Good, MultiplicativeSplit, MultiplicativeNonSplit, Additive };

inline std::string to_string(ReductionKind k) {
    switch (k) {
        case ReductionKind::Good: return "good";
        case ReductionKind::MultiplicativeSplit: return "split multiplicative";
        case ReductionKind::MultiplicativeNonSplit: return "non-split multiplicative";
        case ReductionKind::Additive: return "additive";
    }
    return "?";
}

struct ReductionData {
    std::uint64_t p = 0;
    ReductionKind kind = ReductionKind::Good;
    std::int64_t a_p = 0;
    std::optional<int> w_p;  // Atkin-Lehner sign, multiplicative primes only

    bool multiplicative() const {
        return kind == ReductionKind::MultiplicativeSplit || kind == ReductionKind::MultiplicativeNonSplit;
    }
};

inline ReductionData reduction_data(const WeierstrassCurve& c, std::uint64_t p) {
    const auto inv = invariants(c);
    const auto count = count_points(c, p);
    const auto P = static_cast<std::int64_t>(p);
    const auto n = static_cast<std::int64_t>(count.total_smooth);
    ReductionData rd;
    rd.p = p;
    if (!count.singular_reduction) {
        rd.kind = ReductionKind::Good;
        rd.a_p = P + 1 - n;
        if (static_cast<double>(rd.a_p) * static_cast<double>(rd.a_p) > 4.0 * static_cast<double>(p)) {
            throw InternalError("Hasse bound violated at p = " + std::to_string(p));
        }
        return rd;
    }
    if (residue(inv.c4, p) == 0) {
        rd.kind = ReductionKind::Additive;
        rd.a_p = 0;
        return rd;
    }
    rd.a_p = P - n;
    if (rd.a_p != 1 && rd.a_p != -1) {
        throw InternalError("multiplicative reduction with a_p = " + std::to_string(rd.a_p));
    }
    rd.kind = rd.a_p == 1 ? ReductionKind::MultiplicativeSplit : ReductionKind::MultiplicativeNonSplit;
    rd.w_p = static_cast<int>(-rd.a_p);
    return rd;
}

/// Affine point with rational coordinates, or the point at infinity.
struct Point {
    bool infinity = true;
    Rational x, y;

    static Point at_infinity() { return Point{}; }
    static Point affine(Rational x, Rational y) { return Point{false, std::move(x), std::move(y)}; }

    friend bool operator==(const Point& P, const Point& Q) {
        if (P.infinity || Q.infinity) return P.infinity == Q.infinity;
        return P.x == Q.x && P.y == Q.y;
    }

    std::string to_string() const {
        if (infinity) return "O";
        return "(" + x.get_str() + "," + y.get_str() + ")";
    }
};

inline bool on_curve(const WeierstrassCurve& c, const Point& P) {
    if (P.infinity) return true;
    Rational a1(c.a1()), a2(c.a2()), a3(c.a3()), a4(c.a4()), a6(c.a6());
    Rational lhs = P.y * P.y + a1 * P.x * P.y + a3 * P.y;
    Rational rhs = P.x * P.x * P.x + a2 * P.x * P.x + a4 * P.x + a6;
    return lhs == rhs;
}

inline Point negate(const WeierstrassCurve& c, const Point& P) {
    if (P.infinity) return P;
    Rational y = -P.y - Rational(c.a1()) * P.x - Rational(c.a3());
    return Point::affine(P.x, y);
}

inline Point point_add(const WeierstrassCurve& c, const Point& P, const Point& Q) {
    if (!on_curve(c, P) || !on_curve(c, Q)) throw OffCurve("point is not on " + c.name());
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    Rational a1(c.a1()), a2(c.a2()), a3(c.a3()), a4(c.a4());
    Rational lambda;
    if (P.x == Q.x) {
        if (Q == negate(c, P)) return Point::at_infinity();
        lambda = (3 * P.x * P.x + 2 * a2 * P.x + a4 - a1 * P.y) / (2 * P.y + a1 * P.x + a3);
    } else {
        lambda = (Q.y - P.y) / (Q.x - P.x);
    }
    Rational nu = P.y - lambda * P.x;
    Rational x3 = lambda * lambda + a1 * lambda - a2 - P.x - Q.x;
    Rational y3 = -(lambda + a1) * x3 - nu - a3;
    x3.canonicalize();
    y3.canonicalize();
    return Point::affine(x3, y3);
}

/// Torsion orders above this cap are reported as non-torsion.
inline constexpr unsigned kMaxTorsionOrder = 16;

/// Order of P by repeated addition, or nullopt if it exceeds kMaxTorsionOrder.
inline std::optional<unsigned> point_order(const WeierstrassCurve& c, const Point& P) {
    if (!on_curve(c, P)) throw OffCurve("point " + P.to_string() + " is not on " + c.name());
    Point Q = P;
    for (unsigned k = 1; k <= kMaxTorsionOrder; ++k) {
        if (Q.infinity) return k;
        Q = point_add(c, Q, P);
    }
    return std::nullopt;
}

struct TorsionPoint {
    Point point;
    unsigned order;
};

struct TorsionResult {
    unsigned order = 1;
    std::vector<std::uint64_t> prime_divisors;
    std::vector<TorsionPoint> witness_points;  // every nontrivial torsion point
    std::uint64_t point_count_bound = 0;       // gcd of #E(F_l) over sampled good primes
};

namespace detail {

/// Integer roots of X^3 + A X + C, found by bisection on monotone pieces.
inline std::vector<Integer> integer_roots_depressed_cubic(const Integer& A, const Integer& C) {
    auto f = [&](const Integer& X) { return Integer(X * X * X + A * X + C); };
    const Integer bound = 1 + std::max(abs(A), abs(C));
    std::vector<std::pair<Integer, Integer>> pieces;  // [lo, hi], monotone increasing or decreasing
    if (A >= 0) {
        pieces.emplace_back(-bound, bound);
    } else {
        Integer k = isqrt(Integer(-A / 3));
        // the critical point sqrt(-A/3) lies in [k, k+1]
        pieces.emplace_back(-bound, -k - 1);
        pieces.emplace_back(-k, k);
        pieces.emplace_back(k + 1, bound);
    }
    std::set<Integer> roots;
    for (auto [lo, hi] : pieces) {
        if (lo > hi) continue;
        Integer flo = f(lo), fhi = f(hi);
        if (flo == 0) roots.insert(lo);
        if (fhi == 0) roots.insert(hi);
        const bool increasing = flo <= fhi;
        while (hi - lo > 1) {
            Integer mid = (lo + hi) / 2;
            if (mid <= lo) mid = lo + 1;
            Integer fm = f(mid);
            if (fm == 0) {
                roots.insert(mid);
                break;
            }
            if ((fm < 0) == increasing) lo = mid;
            else hi = mid;
        }
    }
    return {roots.begin(), roots.end()};
}

inline void positive_square_divisors(const std::vector<std::pair<Integer, unsigned>>& fac, std::size_t i,
                                     const Integer& acc, std::vector<Integer>& out) {
    if (i == fac.size()) {
        out.push_back(acc);
        return;
    }
    Integer power = acc;
    for (unsigned e = 0; 2 * e <= fac[i].second; ++e) {
        positive_square_divisors(fac, i + 1, power, out);
        power *= fac[i].first;
    }
}

} // namespace detail

/// gcd of #E(F_l) over every good prime l in (3, 200].
inline std::uint64_t torsion_bound_from_point_counts(const WeierstrassCurve& c) {
    const auto inv = invariants(c);
    std::uint64_t g = 0;
    unsigned used = 0;
    for (auto ell : primes_up_to(200)) {
        if (ell <= 3 || residue(inv.discriminant, ell) == 0) continue;
        g = std::gcd(g, count_points(c, ell).total_smooth);
        ++used;
    }
    if (used < 10) throw InternalError("fewer than 10 good primes below 200");
    return g;
}

/// Rational torsion via Lutz-Nagell on Y^2 = X^3 - 27 c4 X - 54 c6 (the u = 6
/// integral short model): torsion points have Y = 0 or Y^2 | 4A^3 + 27B^2.
inline TorsionResult torsion_order(const WeierstrassCurve& c) {
    const auto inv = invariants(c);
    TorsionResult result;
    result.point_count_bound = torsion_bound_from_point_counts(c);

    const Integer A = -27 * inv.c4;
    const Integer B = -54 * inv.c6;
    const Integer D = 4 * A * A * A + 27 * B * B;
    std::vector<std::pair<Integer, unsigned>> fac;
    for (const auto& [p, e] : factor(D)) fac.emplace_back(p, e);
    std::vector<Integer> ys{0};
    detail::positive_square_divisors(fac, 0, Integer(1), ys);

    std::vector<Point> candidates;
    for (const auto& y0 : ys) {
        std::vector<Integer> signed_ys{y0};
        if (y0 != 0) signed_ys.push_back(-y0);
        for (const Integer& Y : signed_ys) {
            for (const auto& X : detail::integer_roots_depressed_cubic(A, Integer(B - Y * Y))) {
                // back to the given model: X = 36x + 3b2, Y = 108(2y + a1 x + a3)
                Rational x = Rational(X - 3 * inv.b2) / 36;
                Rational y = (Rational(Y) / 108 - Rational(c.a1()) * x - Rational(c.a3())) / 2;
                x.canonicalize();
                y.canonicalize();
                candidates.push_back(Point::affine(x, y));
            }
        }
    }
    for (const auto& P : candidates) {
        if (!on_curve(c, P)) throw InternalError("Lutz-Nagell candidate failed to map onto the curve");
        if (auto k = point_order(c, P)) result.witness_points.push_back({P, *k});
    }
    result.order = static_cast<unsigned>(result.witness_points.size() + 1);

    static constexpr std::array<unsigned, 12> kAllowed{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 16};
    if (std::find(kAllowed.begin(), kAllowed.end(), result.order) == kAllowed.end()) {
        throw InternalError("torsion order " + std::to_string(result.order) + " on " + c.name() +
                            " is impossible over Q");
    }
    if (result.point_count_bound % result.order != 0) {
        throw InternalError("torsion order does not divide the point-count bound");
    }
    result.prime_divisors = prime_divisors(result.order);
    return result;
}

/// First good prime l <= bound where the two curves have different #E(F_l), if any.
inline std::optional<std::uint64_t> point_count_disagreement(const WeierstrassCurve& c1,
                                                             const WeierstrassCurve& c2, std::uint64_t bound) {
    const auto d1 = invariants(c1).discriminant;
    const auto d2 = invariants(c2).discriminant;
    for (auto ell : primes_up_to(bound)) {
        if (residue(d1, ell) == 0 || residue(d2, ell) == 0) continue;
        if (count_points(c1, ell).total_smooth != count_points(c2, ell).total_smooth) return ell;
    }
    return std::nullopt;
}

} // namespace eiscong
