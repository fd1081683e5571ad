#include <random>

#include <gtest/gtest.h>

#include "eiscong/arith.hpp"
#include "eiscong/eisenstein.hpp"
#include "eiscong/series.hpp"
#include "oracles.hpp"

using namespace eiscong;

namespace {

RationalSeries rational(std::vector<long> v) {
    std::vector<Rational> c;
    for (long x : v) c.emplace_back(Integer(x));
    const std::size_t prec = c.size() - 1;
    return RationalSeries(RationalField{}, prec, std::move(c));
}

RationalSeries random_series(std::mt19937_64& rng, std::size_t prec) {
    // denominators avoid the primes the tests reduce modulo
    static const long dens[] = {1, 2, 3, 4, 6, 8, 9, 12};
    std::uniform_int_distribution<long> num(-50, 50);
    std::uniform_int_distribution<std::size_t> pick(0, 7);
    std::vector<Rational> c;
    for (std::size_t i = 0; i <= prec; ++i) c.emplace_back(num(rng), dens[pick(rng)]);
    return RationalSeries(RationalField{}, prec, std::move(c));
}

} // namespace

TEST(Sigma, SmallValues) {
    EXPECT_EQ(sigma(1), 1u);
    EXPECT_EQ(sigma(6), 12u);
    for (std::uint64_t p : {2, 3, 5, 101, 997}) EXPECT_EQ(sigma(p), p + 1);
    for (std::uint64_t n = 1; n <= 300; ++n) EXPECT_EQ(sigma(n), oracle::sigma(n)) << n;
}

TEST(Sigma, RejectsZero) { EXPECT_THROW(sigma(0), InvalidArgument); }

TEST(Arith, PrimalityMatchesTrialDivision) {
    for (std::uint64_t n = 0; n < 2000; ++n) EXPECT_EQ(is_prime(n), oracle::is_prime(n)) << n;
    EXPECT_TRUE(is_prime(std::uint64_t{10007}));
    EXPECT_FALSE(is_prime(std::uint64_t{1013} * 10007));
}

TEST(Arith, FactorRecombines) {
    Integer n("-2073600000000000000000007");
    Integer back = 1;
    for (const auto& [p, e] : factor(n)) {
        EXPECT_TRUE(is_prime(p));
        for (unsigned i = 0; i < e; ++i) back *= p;
    }
    EXPECT_EQ(back, abs(n));
}

TEST(Series, StoresCanonicalRationals) {
    std::vector<Rational> c{Rational(2, 4), Rational(3, -6)};
    c[0] = Rational(Integer(2), Integer(4));  // deliberately not canonicalised
    RationalSeries g(RationalField{}, 1, c);
    EXPECT_EQ(g[0].get_num(), 1);
    EXPECT_EQ(g[0].get_den(), 2);
}

TEST(Series, PrecisionZeroIsLegal) {
    auto g = rational({7});
    EXPECT_EQ(g.precision(), 0u);
    EXPECT_THROW(u_op(2, g), InsufficientPrecision);
    EXPECT_THROW(t_op(2, g, 1), InsufficientPrecision);
    EXPECT_THROW(g[1], InvalidArgument);
}

TEST(Series, BOperator) {
    auto g = rational({1, 5, 7});
    auto b = b_op(2, g);
    EXPECT_EQ(b.precision(), 5u);
    EXPECT_EQ(b, rational({1, 0, 5, 0, 7, 0}));
    auto z = RationalSeries::zero(RationalField{}, 4);
    EXPECT_EQ(b_op(3, z), RationalSeries::zero(RationalField{}, 14));
    // a_1(e) = 1 lands at index 2
    EXPECT_EQ(b_op(2, e_series(4))[2], 1);
}

TEST(Series, UOperator) {
    auto g = rational({0, 1, 3, 5, 7});
    auto u = u_op(2, g);
    EXPECT_EQ(u, rational({0, 3, 7}));
    EXPECT_THROW(u_op(5, g), InsufficientPrecision);
    // coefficient 3 of U_2 e is sigma(6)
    EXPECT_EQ(u_op(2, e_series(10))[3], 12);
}

TEST(Series, TOperator) {
    auto e = e_series(25);
    EXPECT_EQ(t_op(5, e, 1), scale(Rational(6), e_series(5)));
    for (std::uint64_t ell : {2, 3, 7}) {
        auto t = t_op(ell, e, 1);
        EXPECT_EQ(t[1], e[ell]);
        EXPECT_TRUE(agree_up_to_shared_precision(t, scale(Rational(Integer(static_cast<long>(ell + 1))), e)));
    }
    EXPECT_THROW(t_op(11, e, 22), InvalidArgument);
}

TEST(Series, ReduceMod) {
    std::vector<Rational> c{Rational(5, 12), Rational(-2), Rational(-1, 24)};
    RationalSeries g(RationalField{}, 2, c);
    auto r5 = reduce_mod(g, 5);
    EXPECT_EQ(r5[0], 0u);
    EXPECT_EQ(r5[1], 3u);
    // 24 * 2 = 48 = -1 mod 7
    EXPECT_EQ(reduce_mod(g, 7)[2], 2u);
    try {
        reduce_mod(g, 3);
        FAIL() << "expected DenominatorClash";
    } catch (const DenominatorClash& e) {
        EXPECT_EQ(e.index(), 0u);
        EXPECT_EQ(e.prime(), 3u);
    }
    EXPECT_THROW(reduce_mod(g, 9), InvalidArgument);
}

TEST(Series, ArithmeticAndDomains) {
    auto e = e_series(10);
    EXPECT_EQ(e - e, RationalSeries::zero(RationalField{}, 10));
    EXPECT_EQ(scale(Rational(1), e), e);
    auto mixed = sub(e, scale(Rational(2), b_op(2, e)));
    EXPECT_EQ(mixed[2], 1);  // sigma(2) - 2 * 1
    EXPECT_EQ(add(e, e_series(4)).precision(), 4u);

    auto m5 = reduce_mod(rational({1, 2, 3}), 5);
    auto m7 = reduce_mod(rational({1, 2, 3}), 7);
    EXPECT_THROW(add(m5, m7), DomainMismatch);
}

TEST(SeriesProperty, UInvertsB) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        auto g = random_series(rng, 3 + trial % 17);
        for (std::uint64_t r : {2, 3, 5, 7, 11}) {
            EXPECT_EQ(u_op(r, b_op(r, g)), g);
        }
    }
}

TEST(SeriesProperty, OperatorsAreLinear) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        auto g = random_series(rng, 40), h = random_series(rng, 40);
        Rational c(static_cast<long>(trial) - 15, 7);
        auto combo = add(g, scale(c, h));
        for (std::uint64_t r : {2, 3, 5}) {
            EXPECT_EQ(b_op(r, combo), add(b_op(r, g), scale(c, b_op(r, h))));
            EXPECT_EQ(u_op(r, combo), add(u_op(r, g), scale(c, u_op(r, h))));
            EXPECT_EQ(t_op(r, combo, 1), add(t_op(r, g, 1), scale(c, t_op(r, h, 1))));
        }
    }
}

TEST(SeriesProperty, ReductionIsAdditiveAndScalesMultiplicatively) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        auto g = random_series(rng, 20), h = random_series(rng, 20);
        for (std::uint64_t r : {5, 7, 13}) {
            EXPECT_EQ(reduce_mod(add(g, h), r), add(reduce_mod(g, r), reduce_mod(h, r)));
            EXPECT_EQ(reduce_mod(scale(Rational(-3, 11), g), r),
                      scale(reduce_mod(RationalSeries(RationalField{}, 0, {Rational(-3, 11)}), r)[0], reduce_mod(g, r)));
        }
    }
}

TEST(SeriesProperty, GarbagePastPrecisionIsIgnored) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = random_series(rng, 30);
        std::vector<Rational> padded(g.coefficients().begin(), g.coefficients().end());
        std::vector<Rational> other = padded;
        for (int k = 0; k < 25; ++k) {
            padded.emplace_back(1000 + k);
            other.emplace_back(-7 * k, 3);
        }
        RationalSeries a(RationalField{}, 30, padded), b(RationalField{}, 30, other);
        for (std::uint64_t r : {2, 3, 5}) {
            EXPECT_EQ(u_op(r, a), u_op(r, b));
            EXPECT_EQ(b_op(r, a), b_op(r, b));
            EXPECT_EQ(t_op(r, a, 1), t_op(r, b, 1));
        }
    }
}

TEST(SeriesProperty, TEqualsUPlusRB) {
    // For an eigenseries with T_r eigenvalue a_r: U_r g + r B_r g = a_r g.
    for (std::size_t prec : {60, 120}) {
        auto e = e_series(prec);
        for (std::uint64_t r : {2, 3, 5, 7}) {
            auto lhs = add(u_op(r, e), scale(Rational(Integer(static_cast<long>(r))), b_op(r, e)));
            auto rhs = scale(Rational(Integer(static_cast<long>(r + 1))), e);
            EXPECT_TRUE(agree_up_to_shared_precision(lhs, rhs)) << r;
        }
    }
}
