#pragma once

// Truncated q-expansions over exact coefficient domains, and the index-mixing
// operators B_r, U_r and T_l acting on them.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eiscong/arith.hpp"
#include "eiscong/error.hpp"

namespace eiscong {

/// Exact rationals; every value is kept in canonical form.
class RationalField {
public:
    using value_type = Rational;

    value_type zero() const { return 0; }
    value_type from_integer(std::int64_t n) const { return Rational(Integer(static_cast<long>(n))); }
    value_type normalize(value_type v) const {
        v.canonicalize();
        return v;
    }
    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    bool equal(const value_type& a, const value_type& b) const { return a == b; }
    bool is_zero(const value_type& a) const { return sgn(a) == 0; }
    std::string to_string(const value_type& a) const { return a.get_str(); }
    std::string name() const { return "ExactRational"; }

    friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

/// Z/rZ for a prime r; residues are stored in [0, r).
class PrimeField {
public:
    using value_type = std::uint64_t;

    explicit PrimeField(std::uint64_t r) : r_(r) {
        if (!is_prime(r)) throw InvalidArgument("modulus " + std::to_string(r) + " is not prime");
    }

    std::uint64_t modulus() const noexcept { return r_; }

    value_type zero() const { return 0; }
    value_type from_integer(std::int64_t n) const { return residue(n, r_); }
    value_type normalize(value_type v) const { return v % r_; }
    value_type add(value_type a, value_type b) const {
        value_type s = a + b;
        return s >= r_ ? s - r_ : s;
    }
    value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + r_ - b; }
    value_type mul(value_type a, value_type b) const { return detail::mul_mod(a, b, r_); }
    value_type inverse(value_type a) const { return inverse_mod(a, r_); }
    bool equal(value_type a, value_type b) const { return a == b; }
    bool is_zero(value_type a) const { return a == 0; }
    std::string to_string(value_type a) const { return std::to_string(a); }
    std::string name() const { return "ModPrime(" + std::to_string(r_) + ")"; }

    friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.r_ == b.r_; }

private:
    std::uint64_t r_;
};

/// Power series a_0 + a_1 q + ... + a_P q^P known exactly up to its precision P.
/// Nothing past P is stored, so nothing past P can be read.
template <class Field>
class QExpansion {
public:
    using field_type = Field;
    using value_type = typename Field::value_type;

    /// Takes the first precision + 1 entries of coeffs; anything after them is discarded.
    QExpansion(Field field, std::size_t precision, std::vector<value_type> coeffs)
        : field_(std::move(field)), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() < precision + 1) {
            throw InvalidArgument("need " + std::to_string(precision + 1) + " coefficients, got " +
                                  std::to_string(coeffs_.size()));
        }
        coeffs_.resize(precision + 1);
        for (auto& c : coeffs_) c = field_.normalize(std::move(c));
    }

    static QExpansion zero(Field field, std::size_t precision) {
        std::vector<value_type> coeffs(precision + 1, field.zero());
        return QExpansion(std::move(field), precision, std::move(coeffs));
    }

    const Field& field() const noexcept { return field_; }
    std::size_t precision() const noexcept { return coeffs_.size() - 1; }

    const value_type& operator[](std::size_t n) const {
        if (n >= coeffs_.size()) {
            throw InvalidArgument("coefficient " + std::to_string(n) + " is beyond precision " +
                                  std::to_string(precision()));
        }
        return coeffs_[n];
    }
    const value_type& coeff(std::size_t n) const { return (*this)[n]; }

    std::span<const value_type> coefficients() const noexcept { return coeffs_; }

    QExpansion truncated(std::size_t precision) const {
        if (precision > this->precision()) {
            throw InvalidArgument("cannot extend a series past its precision");
        }
        return QExpansion(field_, precision, coeffs_);
    }

    friend bool operator==(const QExpansion& a, const QExpansion& b) {
        return a.field_ == b.field_ && a.coeffs_ == b.coeffs_;
    }

private:
    Field field_;
    std::vector<value_type> coeffs_;
};

using RationalSeries = QExpansion<RationalField>;
using ModularSeries = QExpansion<PrimeField>;

namespace detail {

template <class Field>
void require_same_domain(const QExpansion<Field>& g, const QExpansion<Field>& h) {
    if (!(g.field() == h.field())) {
        throw DomainMismatch("cannot combine " + g.field().name() + " with " + h.field().name());
    }
}

inline void require_prime(std::uint64_t p, const char* what) {
    if (!is_prime(p)) throw InvalidArgument(std::string(what) + " " + std::to_string(p) + " is not prime");
}

} // namespace detail

template <class Field>
QExpansion<Field> add(const QExpansion<Field>& g, const QExpansion<Field>& h) {
    detail::require_same_domain(g, h);
    const auto& F = g.field();
    std::size_t prec = std::min(g.precision(), h.precision());
    std::vector<typename Field::value_type> out;
    out.reserve(prec + 1);
    for (std::size_t n = 0; n <= prec; ++n) out.push_back(F.add(g[n], h[n]));
    return QExpansion<Field>(F, prec, std::move(out));
}

template <class Field>
QExpansion<Field> sub(const QExpansion<Field>& g, const QExpansion<Field>& h) {
    detail::require_same_domain(g, h);
    const auto& F = g.field();
    std::size_t prec = std::min(g.precision(), h.precision());
    std::vector<typename Field::value_type> out;
    out.reserve(prec + 1);
    for (std::size_t n = 0; n <= prec; ++n) out.push_back(F.sub(g[n], h[n]));
    return QExpansion<Field>(F, prec, std::move(out));
}

template <class Field>
QExpansion<Field> scale(const typename Field::value_type& c, const QExpansion<Field>& g) {
    const auto& F = g.field();
    std::vector<typename Field::value_type> out;
    out.reserve(g.precision() + 1);
    for (const auto& a : g.coefficients()) out.push_back(F.mul(F.normalize(c), a));
    return QExpansion<Field>(F, g.precision(), std::move(out));
}

template <class Field>
QExpansion<Field> operator+(const QExpansion<Field>& g, const QExpansion<Field>& h) {
    return add(g, h);
}

template <class Field>
QExpansion<Field> operator-(const QExpansion<Field>& g, const QExpansion<Field>& h) {
    return sub(g, h);
}

/// B_r: sum a_n q^n -> sum a_n q^{nr}. Precision P becomes rP + r - 1, the
/// largest index whose coefficient is still determined.
template <class Field>
QExpansion<Field> b_op(std::uint64_t r, const QExpansion<Field>& g) {
    detail::require_prime(r, "B operator index");
    const auto& F = g.field();
    std::size_t prec = r * g.precision() + (r - 1);
    std::vector<typename Field::value_type> out(prec + 1, F.zero());
    for (std::size_t n = 0; n <= g.precision(); ++n) out[n * r] = g[n];
    return QExpansion<Field>(F, prec, std::move(out));
}

/// U_r: sum a_n q^n -> sum a_{nr} q^n, precision floor(P / r).
template <class Field>
QExpansion<Field> u_op(std::uint64_t r, const QExpansion<Field>& g) {
    detail::require_prime(r, "U operator index");
    if (g.precision() < r) {
        throw InsufficientPrecision("U_" + std::to_string(r) + " needs precision >= " + std::to_string(r) +
                                    ", series has " + std::to_string(g.precision()));
    }
    std::size_t prec = g.precision() / r;
    std::vector<typename Field::value_type> out;
    out.reserve(prec + 1);
    for (std::size_t n = 0; n <= prec; ++n) out.push_back(g[n * r]);
    return QExpansion<Field>(g.field(), prec, std::move(out));
}

/// T_l at level M (l prime, l not dividing M): coefficient n is a_{nl} + l a_{n/l},
/// the second term only when l | n. Precision floor(P / l).
template <class Field>
QExpansion<Field> t_op(std::uint64_t ell, const QExpansion<Field>& g, std::uint64_t level) {
    detail::require_prime(ell, "T operator index");
    if (level == 0) throw InvalidArgument("level must be positive");
    if (level % ell == 0) {
        throw InvalidArgument("T_" + std::to_string(ell) + " is not defined at level " + std::to_string(level) +
                              "; use U_" + std::to_string(ell));
    }
    if (g.precision() < ell) {
        throw InsufficientPrecision("T_" + std::to_string(ell) + " needs precision >= " + std::to_string(ell) +
                                    ", series has " + std::to_string(g.precision()));
    }
    const auto& F = g.field();
    const auto ell_value = F.from_integer(static_cast<std::int64_t>(ell));
    std::size_t prec = g.precision() / ell;
    std::vector<typename Field::value_type> out;
    out.reserve(prec + 1);
    for (std::size_t n = 0; n <= prec; ++n) {
        auto c = g[n * ell];
        if (n % ell == 0) c = F.add(c, F.mul(ell_value, g[n / ell]));
        out.push_back(std::move(c));
    }
    return QExpansion<Field>(F, prec, std::move(out));
}

/// Image of a rational series in Z/rZ.
inline ModularSeries reduce_mod(const RationalSeries& g, std::uint64_t r) {
    PrimeField F(r);
    std::vector<std::uint64_t> out;
    out.reserve(g.precision() + 1);
    for (std::size_t n = 0; n <= g.precision(); ++n) {
        const Rational& a = g[n];
        std::uint64_t den = residue(Integer(a.get_den()), r);
        if (den == 0) throw DenominatorClash(n, r);
        out.push_back(F.mul(residue(Integer(a.get_num()), r), F.inverse(den)));
    }
    return ModularSeries(F, g.precision(), std::move(out));
}

/// Index of the first coefficient in [from, upto] where g and h differ, or upto + 1.
template <class Field>
std::size_t first_mismatch(const QExpansion<Field>& g, const QExpansion<Field>& h, std::size_t from,
                           std::size_t upto) {
    detail::require_same_domain(g, h);
    if (upto > g.precision() || upto > h.precision()) {
        throw InsufficientPrecision("comparison window exceeds series precision");
    }
    for (std::size_t n = from; n <= upto; ++n) {
        if (!g.field().equal(g[n], h[n])) return n;
    }
    return upto + 1;
}

/// Coefficientwise equality on the shared precision window.
template <class Field>
bool agree_up_to_shared_precision(const QExpansion<Field>& g, const QExpansion<Field>& h) {
    std::size_t upto = std::min(g.precision(), h.precision());
    return first_mismatch(g, h, 0, upto) > upto;
}

template <class Field>
std::string to_string(const QExpansion<Field>& g, const std::string& separator = ", ") {
    std::string s;
    for (std::size_t n = 0; n <= g.precision(); ++n) {
        if (n > 0) s += separator;
        s += g.field().to_string(g[n]);
    }
    return s;
}

} // namespace eiscong
