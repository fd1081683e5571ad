#include <random>

#include <gtest/gtest.h>

#include "eiscong/verify.hpp"
#include "oracles.hpp"

using namespace eiscong;

namespace {

const WeierstrassCurve k11a1 = make_curve(0, -1, 1, -10, -20, "11a1");
const WeierstrassCurve k14a1 = make_curve(1, 0, 1, 4, -6, "14a1");
const WeierstrassCurve k26b1 = make_curve(1, -1, 1, -3, 3, "26b1");

const ClaimResult& find(const VerificationReport& rep, const std::string& id, std::uint64_t r) {
    for (const auto& c : rep.claims) {
        if (c.claim_id == id && c.r == r) return c;
    }
    throw std::runtime_error("missing claim " + id);
}

ModularSeries with_coefficient(const ModularSeries& g, std::size_t n, std::uint64_t v) {
    std::vector<std::uint64_t> c(g.coefficients().begin(), g.coefficients().end());
    c[n] = v;
    return ModularSeries(g.field(), g.precision(), std::move(c));
}

// Special coefficient straight from the definition, with its own sigma.
std::uint64_t oracle_special(std::uint64_t n, std::uint64_t M, std::uint64_t r) {
    std::int64_t sign = 1;
    std::uint64_t m = n;
    for (std::uint64_t p = 2; p <= M; ++p) {
        if (M % p != 0 || !oracle::is_prime(p)) continue;
        while (m % p == 0) {
            m /= p;
            sign = -sign;
        }
    }
    return static_cast<std::uint64_t>(oracle::mod(sign * static_cast<std::int64_t>(oracle::sigma(m) % r), r));
}

} // namespace

TEST(Eichler, Examples) {
    auto a11 = CurveAnalysis::of(k11a1);
    auto res = check_eichler_congruence(a11, 5);
    EXPECT_EQ(res.status, ClaimStatus::Pass);
    EXPECT_EQ(check_eichler_congruence(CurveAnalysis::of(k26b1), 7).status, ClaimStatus::Pass);
    EXPECT_EQ(check_eichler_congruence(a11, 7).status, ClaimStatus::NotApplicable);
}

TEST(BadPrimeSign, Examples) {
    auto a14 = CurveAnalysis::of(k14a1);
    auto r2 = check_bad_prime_sign(a14, 2);
    EXPECT_EQ(r2.status, ClaimStatus::NotApplicable);
    EXPECT_NE(r2.detail.note.find("w_2 = +1 yet 2 does not divide 3"), std::string::npos);
    EXPECT_EQ(check_bad_prime_sign(CurveAnalysis::of(k11a1), 5).status, ClaimStatus::Pass);
}

TEST(ExistsNegativeW, Examples) {
    EXPECT_EQ(check_exists_negative_w(CurveAnalysis::of(k11a1), 5).status, ClaimStatus::Pass);
    EXPECT_EQ(check_exists_negative_w(CurveAnalysis::of(k26b1), 7).status, ClaimStatus::Pass);
    EXPECT_EQ(check_exists_negative_w(CurveAnalysis::of(k14a1), 5).status, ClaimStatus::NotApplicable);
}

TEST(DeltasFromSigns, Examples) {
    auto s11 = deltas_from_signs(k11a1);
    EXPECT_EQ(s11.level(), 11u);
    EXPECT_EQ(s11.delta(11), 1u);
    auto s26 = deltas_from_signs(k26b1);
    EXPECT_EQ(s26.delta(2), 1u);
    EXPECT_EQ(s26.delta(13), 13u);

    auto a14 = CurveAnalysis::of(k14a1);
    for (auto& rd : a14.bad) rd.w_p = 1;
    EXPECT_THROW(deltas_from_signs(a14), SpecViolation);
}

TEST(Sturm, Examples) {
    EXPECT_EQ(sturm_precision(11), 12u);
    EXPECT_EQ(sturm_precision(26), 17u);
    EXPECT_EQ(sturm_precision(14), 14u);
    EXPECT_THROW(sturm_precision(12), InvalidArgument);
}

TEST(MainCongruence, Examples) {
    auto a11 = CurveAnalysis::of(k11a1);
    auto res = check_main_congruence(a11, 5);
    EXPECT_EQ(res.status, ClaimStatus::Pass);
    EXPECT_EQ(res.detail.precision, 12u);
    auto f = reduce_mod(af_coeffs(k11a1, 12).series, 5);
    EXPECT_EQ(f[2], 3u);
    EXPECT_EQ(f[3], 4u);
    EXPECT_EQ(reduce_mod(build_E(deltas_from_signs(a11), 12), 5)[0], 0u);

    EXPECT_EQ(check_main_congruence(CurveAnalysis::of(k26b1), 7).status, ClaimStatus::Pass);
    EXPECT_EQ(check_main_congruence(a11, 7).status, ClaimStatus::NotApplicable);
}

TEST(Special, CoefficientExamples) {
    EXPECT_EQ(special_coefficient(3, 15, 7), 6u);
    EXPECT_EQ(special_coefficient(2, 15, 7), 3u);
    for (std::uint64_t M : {1, 2, 15, 26}) EXPECT_EQ(special_coefficient(1, M, 5), 1u);
}

TEST(Special, ReducedNewformBreaksSpecialityAtNegativeSign) {
    // Speciality needs a_p = -1 at every p | N. With w_p = -1 the first
    // mismatch is at p; away from N the formula holds.
    auto f = reduce_mod(af_coeffs(k11a1, 300).series, 5);
    auto res = is_special(f, 11);
    EXPECT_EQ(res.status, ClaimStatus::Fail);
    EXPECT_EQ(res.detail.index, 11u);
    auto g = reduce_mod(af_coeffs(k26b1, 300).series, 7);
    EXPECT_EQ(is_special(g, 26).detail.index, 2u);
    for (std::size_t n = 1; n <= 300; ++n) {
        if (n % 11 != 0) {
            EXPECT_EQ(f[n], special_coefficient(n, 11, 5)) << n;
        }
        if (n % 2 != 0 && n % 13 != 0) {
            EXPECT_EQ(g[n], special_coefficient(n, 26, 7)) << n;
        }
    }
}

TEST(Special, SyntheticStreamAndPerturbation) {
    auto s = make_special_stream(15, 7, 60);
    EXPECT_EQ(is_special(s.series, 15).status, ClaimStatus::Pass);
    auto bad = with_coefficient(s.series, 12, (s.series[12] + 1) % 7);
    auto res = is_special(bad, 15);
    EXPECT_EQ(res.status, ClaimStatus::Fail);
    EXPECT_EQ(res.detail.index, 12u);
}

TEST(Special, SoundnessAgainstOracle) {
    std::mt19937_64 rng(23);
    std::vector<std::uint64_t> levels, odd_primes;
    for (std::uint64_t M = 1; M <= 100; ++M) {
        if (is_squarefree(M)) levels.push_back(M);
    }
    for (std::uint64_t r = 3; r <= 50; ++r) {
        if (oracle::is_prime(r)) odd_primes.push_back(r);
    }
    int runs = 0;
    for (int trial = 0; trial < 400 && runs < 60; ++trial) {
        const auto M = levels[rng() % levels.size()];
        const auto r = odd_primes[rng() % odd_primes.size()];
        if (M % r == 0) continue;
        const std::size_t P = 1 + rng() % 500;
        auto s = make_special_stream(M, r, P);
        for (std::size_t n = 1; n <= P; ++n) ASSERT_EQ(s.series[n], oracle_special(n, M, r)) << M << " " << r << " " << n;
        EXPECT_EQ(is_special(s.series, M).status, ClaimStatus::Pass);
        const std::size_t hit = 1 + rng() % P;
        auto bad = with_coefficient(s.series, hit, (s.series[hit] + 1 + rng() % (r - 1)) % r);
        auto res = is_special(bad, M);
        EXPECT_EQ(res.status, ClaimStatus::Fail);
        EXPECT_EQ(res.detail.index, hit);
        ++runs;
    }
    EXPECT_GE(runs, 40);
}

TEST(LowerLevel, AdmissibleTriples) {
    // every prime dividing M is -1 mod r
    for (auto [M, s, r] : {std::array<std::uint64_t, 3>{10, 5, 3}, {22, 11, 3}, {10, 2, 3}, {2, 2, 3}}) {
        auto out = lower_level(make_special_stream(M, r, 500), s);
        EXPECT_EQ(out.level, M / s);
        EXPECT_EQ(out.series.precision(), 500 / s);
        EXPECT_EQ(out.series, make_special_stream(M / s, r, 500 / s).series);
        EXPECT_EQ(out.series[1], 1u);
    }
}

TEST(LowerLevel, IteratesToLevelOne) {
    auto g = make_special_stream(110, 3, 1000);  // 2, 5, 11 are all -1 mod 3
    for (std::uint64_t s : {11, 5, 2}) g = lower_level(g, s);
    EXPECT_EQ(g.level, 1u);
    EXPECT_EQ(g.series[1], 1u);
}

TEST(LowerLevel, RejectsBadInput) {
    auto g = make_special_stream(26, 3, 100);
    EXPECT_THROW(lower_level(g, 3), InvalidArgument);
    EXPECT_THROW(lower_level(make_special_stream(15, 3, 100), 5), InvalidArgument);  // r | M
    EXPECT_THROW(lower_level(make_special_stream(35, 3, 100), 5), InvalidArgument);  // 7 is 1 mod 3
    EXPECT_THROW(lower_level(make_special_stream(10, 3, 4), 5), PrecisionTooSmall);

    auto clean = make_special_stream(10, 3, 100);
    auto mutated = clean;
    mutated.series = with_coefficient(clean.series, 7, (clean.series[7] + 1) % 3);
    try {
        lower_level(mutated, 5);
        FAIL() << "expected SupportViolation";
    } catch (const SupportViolation& e) {
        EXPECT_EQ(e.index(), 7u);
    }
    mutated.series = with_coefficient(clean.series, 15, (clean.series[15] + 1) % 3);
    try {
        lower_level(mutated, 5);
        FAIL() << "expected SpecialityViolation";
    } catch (const SpecialityViolation& e) {
        EXPECT_EQ(e.index(), 3u);
    }
}

TEST(LowerLevel, PrimeOneModRBreaksSpeciality) {
    // s = 13 is 1 mod 3: the difference is supported on multiples of 13 but h / 2
    // is not special at level 2
    EXPECT_THROW(lower_level(make_special_stream(26, 3, 500), 13), SpecialityViolation);
}

TEST(Screen, Examples) {
    EXPECT_EQ(cuspidal_screen(1013, 10007, 5).verdict, ScreenVerdict::Excluded);
    EXPECT_EQ(cuspidal_screen(1013, 10007, 7).verdict, ScreenVerdict::Excluded);
    auto s = cuspidal_screen(2, 13, 7);
    EXPECT_EQ(s.verdict, ScreenVerdict::NotExcluded);
    EXPECT_NE(s.evidence.find("q^2 - 1"), std::string::npos);
    EXPECT_EQ(to_claim(cuspidal_screen(1013, 10007, 5)).status, ClaimStatus::Pass);
    EXPECT_THROW(cuspidal_screen(4, 13, 7), InvalidArgument);
    EXPECT_THROW(cuspidal_screen(13, 13, 7), InvalidArgument);
    EXPECT_THROW(cuspidal_screen(11, 13, 2), InvalidArgument);
}

TEST(Screen, AgreesWithDivisibility) {
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 1013}) {
        for (std::uint64_t q : {17, 19, 23, 10007}) {
            for (std::uint64_t r : {5, 7, 11, 13, 17}) {
                const Integer prod = Integer(6) * p * q * (Integer(p) * p - 1) * (Integer(q) * q - 1);
                const bool excluded = residue(prod, r) != 0;
                EXPECT_EQ(cuspidal_screen(p, q, r).verdict == ScreenVerdict::Excluded, excluded);
            }
        }
    }
}

TEST(VerifyCurve, Examples) {
    auto r11 = verify_curve(k11a1);
    EXPECT_EQ(r11.torsion_order, 5u);
    EXPECT_FALSE(r11.any_fail());
    for (const auto& c : r11.claims) EXPECT_EQ(c.status, ClaimStatus::Pass) << c.claim_id;
    EXPECT_EQ(r11.claims.size(), 5u);

    auto r14 = verify_curve(k14a1);
    EXPECT_EQ(r14.torsion_order, 6u);
    for (const auto& c : r14.claims) EXPECT_EQ(c.status, ClaimStatus::NotApplicable) << c.claim_id;
    EXPECT_NE(find(r14, claim::kBadPrimeSign, 2).detail.note.find("2 does not divide 3"), std::string::npos);

    auto r26 = verify_curve(k26b1);
    for (const auto& c : r26.claims) EXPECT_EQ(c.status, ClaimStatus::Pass) << c.claim_id;
    EXPECT_EQ(find(r26, claim::kMainCongruence, 7).detail.precision, 17u);
    EXPECT_EQ(find(r26, claim::kCuspidalScreen, 7).status, ClaimStatus::Pass);
}

TEST(Mutation, EichlerTable) {
    std::map<std::uint64_t, std::int64_t> table;
    for (auto ell : primes_up_to(200)) {
        if (ell != 11) table[ell] = reduction_data(k11a1, ell).a_p;
    }
    ASSERT_EQ(check_eichler_table("11a1", 5, table).status, ClaimStatus::Pass);
    table[37] += 1;
    auto res = check_eichler_table("11a1", 5, table);
    EXPECT_EQ(res.status, ClaimStatus::Fail);
    EXPECT_EQ(res.detail.index, 37u);
}

TEST(Mutation, SignsAndCongruence) {
    auto a26 = CurveAnalysis::of(k26b1);
    auto flipped = a26.bad;
    ASSERT_EQ(check_bad_prime_sign_data("26b1", 7, flipped).status, ClaimStatus::Pass);
    flipped[0].w_p = 1;  // w_2 = +1 but 7 does not divide 3
    auto res = check_bad_prime_sign_data("26b1", 7, flipped);
    EXPECT_EQ(res.status, ClaimStatus::Fail);
    EXPECT_EQ(res.detail.index, 2u);

    for (auto& rd : flipped) rd.w_p = 1;
    EXPECT_EQ(check_exists_negative_w_data("26b1", 7, flipped).status, ClaimStatus::Fail);

    auto f = reduce_mod(af_coeffs(k26b1, 17).series, 7);
    auto E = reduce_mod(build_E(deltas_from_signs(a26), 17), 7);
    ASSERT_EQ(compare_congruence("26b1", 7, f, E).status, ClaimStatus::Pass);
    auto bad = compare_congruence("26b1", 7, with_coefficient(f, 9, (f[9] + 3) % 7), E);
    EXPECT_EQ(bad.status, ClaimStatus::Fail);
    EXPECT_EQ(bad.detail.index, 9u);
    auto bad0 = compare_congruence("26b1", 7, f, with_coefficient(E, 0, 4));
    EXPECT_EQ(bad0.detail.index, 0u);
}
