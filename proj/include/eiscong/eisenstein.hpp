#pragma once

// Weight-2 Eisenstein eigenseries on Gamma_0(N), N square-free, built from the
// level-1 series e by repeated level raising.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eiscong/arith.hpp"
#include "eiscong/error.hpp"
#include "eiscong/series.hpp"

namespace eiscong {

/// Square-free level together with the U_p eigenvalue (1 or p) chosen at each p | N.
class EisensteinSpec {
public:
    EisensteinSpec(std::uint64_t level, std::map<std::uint64_t, std::uint64_t> deltas)
        : level_(level), deltas_(std::move(deltas)) {
        if (level_ < 2 || !is_squarefree(level_)) {
            throw SpecViolation("level " + std::to_string(level_) + " must be square-free and > 1");
        }
        auto primes = prime_divisors(level_);
        if (primes.size() != deltas_.size()) {
            throw SpecViolation("deltas must cover exactly the prime divisors of " + std::to_string(level_));
        }
        bool has_one = false;
        for (auto p : primes) {
            auto it = deltas_.find(p);
            if (it == deltas_.end()) {
                throw SpecViolation("missing delta for prime " + std::to_string(p));
            }
            if (it->second != 1 && it->second != p) {
                throw SpecViolation("delta_" + std::to_string(p) + " must be 1 or " + std::to_string(p));
            }
            has_one = has_one || it->second == 1;
        }
        if (!has_one) {
            throw SpecViolation("at least one prime p | N must have delta_p = 1");
        }
    }

    std::uint64_t level() const noexcept { return level_; }
    const std::map<std::uint64_t, std::uint64_t>& deltas() const noexcept { return deltas_; }
    std::uint64_t delta(std::uint64_t p) const { return deltas_.at(p); }
    std::vector<std::uint64_t> primes() const {
        std::vector<std::uint64_t> ps;
        for (const auto& [p, d] : deltas_) ps.push_back(p);
        return ps;
    }
    bool all_deltas_one() const {
        return std::all_of(deltas_.begin(), deltas_.end(), [](const auto& kv) { return kv.second == 1; });
    }

    /// Every valid delta assignment at a square-free level.
    static std::vector<EisensteinSpec> all_for_level(std::uint64_t level) {
        auto primes = prime_divisors(level);
        std::vector<EisensteinSpec> specs;
        const std::size_t k = primes.size();
        for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << k); ++mask) {
            // bit set means delta_p = p; the all-ones mask is excluded
            std::map<std::uint64_t, std::uint64_t> deltas;
            for (std::size_t i = 0; i < k; ++i) deltas[primes[i]] = (mask >> i & 1U) ? primes[i] : 1;
            specs.emplace_back(level, std::move(deltas));
        }
        return specs;
    }

    friend bool operator==(const EisensteinSpec&, const EisensteinSpec&) = default;

private:
    std::uint64_t level_;
    std::map<std::uint64_t, std::uint64_t> deltas_;
};

enum class EigenRaiseVariant { EigenvalueOne, EigenvalueR };

/// Level-1 series normalised with a_1 = 1: a_0 = -1/24, a_n = sigma(n).
inline RationalSeries e_series(std::size_t precision) {
    std::vector<Rational> coeffs;
    coeffs.reserve(precision + 1);
    coeffs.emplace_back(-1, 24);
    for (std::size_t n = 1; n <= precision; ++n) coeffs.emplace_back(Integer(static_cast<unsigned long>(sigma(n))));
    return RationalSeries(RationalField{}, precision, std::move(coeffs));
}

/// g - r B_r(g) (U_r-eigenvalue 1) or g - B_r(g) (eigenvalue r). For the
/// eigenvalue claims to hold, a_r(g) must equal 1 + r.
inline RationalSeries raise_level(const RationalSeries& g, std::uint64_t r, const Rational& a_r_of_g,
                                  EigenRaiseVariant variant) {
    if (g.precision() < 1 || g[1] != 1) throw InvalidArgument("level raising needs a normalised series (a_1 = 1)");
    if (g.precision() >= r && g[r] != a_r_of_g) {
        throw InvalidArgument("stated a_" + std::to_string(r) + " = " + a_r_of_g.get_str() +
                              " disagrees with the series (" + g[r].get_str() + ")");
    }
    Rational factor = variant == EigenRaiseVariant::EigenvalueOne ? Rational(Integer(static_cast<unsigned long>(r)))
                                                                  : Rational(1);
    return sub(g, scale(factor, b_op(r, g)));
}

/// Builds E raising at the primes in `order`. The first prime must carry delta = 1.
inline RationalSeries build_E_in_order(const EisensteinSpec& spec, std::size_t precision,
                                       std::span<const std::uint64_t> order) {
    auto primes = spec.primes();
    std::vector<std::uint64_t> sorted(order.begin(), order.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted != primes) throw InvalidArgument("raise order must list each prime of the level once");
    if (spec.delta(order.front()) != 1) {
        throw SpecViolation("the first raise must use a prime with delta_p = 1");
    }
    RationalSeries g = e_series(precision);
    for (auto p : order) {
        auto variant = spec.delta(p) == 1 ? EigenRaiseVariant::EigenvalueOne : EigenRaiseVariant::EigenvalueR;
        g = raise_level(g, p, Rational(Integer(static_cast<unsigned long>(p + 1))), variant);
    }
    return g;
}

/// Smallest prime with delta_p = 1 first, then the rest ascending.
inline std::vector<std::uint64_t> default_raise_order(const EisensteinSpec& spec) {
    auto primes = spec.primes();
    auto first = std::find_if(primes.begin(), primes.end(), [&](auto p) { return spec.delta(p) == 1; });
    std::rotate(primes.begin(), first, first + 1);
    return primes;
}

inline RationalSeries build_E(const EisensteinSpec& spec, std::size_t precision) {
    auto order = default_raise_order(spec);
    return build_E_in_order(spec, precision, order);
}

/// a_n(E) from multiplicativity: sigma of the prime-to-N part times prod delta_p^{ord_p n}.
inline Rational closed_form_coeff(const EisensteinSpec& spec, std::uint64_t n) {
    if (n == 0) {
        if (!spec.all_deltas_one()) return 0;
        Rational c(-1, 24);
        for (auto p : spec.primes()) c *= Rational(1 - static_cast<long>(p));
        c.canonicalize();
        return c;
    }
    Integer value = 1;
    std::uint64_t m = n;
    for (const auto& [p, delta] : spec.deltas()) {
        while (m % p == 0) {
            m /= p;
            value *= static_cast<unsigned long>(delta);
        }
    }
    value *= static_cast<unsigned long>(sigma(m));
    return Rational(value);
}

struct EigenCheck {
    char op = 'T';  // 'T' for l not dividing N, 'U' for p | N
    std::uint64_t prime = 0;
    std::int64_t eigenvalue = 0;
    std::size_t checked_precision = 0;
    bool passed = false;
    std::size_t first_mismatch = 0;  // meaningful only when !passed
};

struct EigenReport {
    std::vector<EigenCheck> checks;

    bool all_passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const EigenCheck& c) { return c.passed; });
    }
};

namespace detail {

inline EigenCheck compare_eigen(char op, std::uint64_t prime, std::int64_t eigenvalue, const RationalSeries& image,
                                const RationalSeries& E) {
    auto expected = scale(Rational(Integer(static_cast<long>(eigenvalue))), E);
    std::size_t upto = image.precision();
    std::size_t bad = first_mismatch(image, expected, 0, upto);
    return EigenCheck{op, prime, eigenvalue, upto, bad > upto, bad > upto ? 0 : bad};
}

} // namespace detail

/// Checks T_l E = (l+1) E for primes l <= bound with l not dividing N, and
/// U_p E = delta_p E for p | N, each on the shrunken precision window.
inline EigenReport verify_eigen(const RationalSeries& E, const EisensteinSpec& spec, std::uint64_t bound = 20) {
    EigenReport report;
    const std::uint64_t N = spec.level();
    for (auto ell : primes_up_to(bound)) {
        if (N % ell == 0 || E.precision() < ell) continue;
        report.checks.push_back(detail::compare_eigen('T', ell, static_cast<std::int64_t>(ell + 1), t_op(ell, E, N), E));
    }
    for (const auto& [p, delta] : spec.deltas()) {
        if (E.precision() < p) {
            throw InsufficientPrecision("U_" + std::to_string(p) + " needs precision >= " + std::to_string(p));
        }
        report.checks.push_back(detail::compare_eigen('U', p, static_cast<std::int64_t>(delta), u_op(p, E), E));
    }
    if (report.checks.empty()) throw InsufficientPrecision("no Hecke operator can be compared at this precision");
    return report;
}

/// Matrix of U_r on span(g, B_r g), read off from the operator's action.
/// Column j holds the coordinates of U_r applied to basis vector j.
struct UMatrix {
    std::array<std::array<Rational, 2>, 2> m;
    bool consistent = false;  // the fitted coordinates reproduce every shared coefficient

    Rational trace() const { return m[0][0] + m[1][1]; }
    Rational determinant() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
};

inline UMatrix u_operator_matrix(const RationalSeries& g, std::uint64_t r) {
    if (g.precision() < 1 || g[1] != 1) throw InvalidArgument("basis series must be normalised");
    const RationalSeries Bg = b_op(r, g);
    const RationalSeries images[2] = {u_op(r, g), u_op(r, Bg)};
    UMatrix result;
    result.consistent = true;
    for (int j = 0; j < 2; ++j) {
        const auto& img = images[j];
        if (img.precision() < r) {
            throw InsufficientPrecision("need precision >= r^2 to separate g from B_r g");
        }
        // q^1 only sees g; q^r then fixes the B_r g coordinate.
        Rational alpha = img[1];
        Rational beta = img[r] - alpha * g[r];
        result.m[0][j] = alpha;
        result.m[1][j] = beta;
        auto fitted = add(scale(alpha, g), scale(beta, Bg));
        std::size_t upto = img.precision();
        if (first_mismatch(img, fitted, 0, upto) <= upto) result.consistent = false;
    }
    return result;
}

} // namespace eiscong
