#pragma once

// Checkers for the congruences between a curve's newform and the Eisenstein
// series with matching Atkin-Lehner data, plus the level-lowering machinery
// for "special" mod-r coefficient streams.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eiscong/arith.hpp"
#include "eiscong/curves.hpp"
#include "eiscong/eisenstein.hpp"
#include "eiscong/error.hpp"
#include "eiscong/newform.hpp"
#include "eiscong/series.hpp"

namespace eiscong {

namespace claim {
inline constexpr const char* kBadPrimeSign = "bad_prime_sign";
inline constexpr const char* kCuspidalScreen = "cuspidal_screen";
inline constexpr const char* kEichlerCongruence = "eichler_congruence";
inline constexpr const char* kExistsNegativeW = "exists_negative_w";
inline constexpr const char* kMainCongruence = "main_congruence";
inline constexpr const char* kOrdinarity = "ordinarity";
inline constexpr const char* kSpecialForm = "special_form";
} // namespace claim

enum class ClaimStatus { Pass, Fail, NotApplicable };

inline std::string to_string(ClaimStatus s) {
    switch (s) {
        case ClaimStatus::Pass: return "pass";
        case ClaimStatus::Fail: return "fail";
        case ClaimStatus::NotApplicable: return "not_applicable";
    }
    return "?";
}

/// Evidence attached to a result. A Fail always sets index, expected and actual.
struct ClaimDetail {
    std::optional<std::uint64_t> index;  // coefficient index n or prime l
    std::optional<std::string> expected;
    std::optional<std::string> actual;
    std::optional<std::size_t> precision;
    std::optional<std::uint64_t> checked;  // number of indices or primes examined
    std::string note;
};

struct ClaimResult {
    std::string claim_id;
    std::optional<std::string> curve_label;
    std::optional<std::uint64_t> r;
    ClaimStatus status = ClaimStatus::NotApplicable;
    ClaimDetail detail;
};

namespace detail {

inline ClaimResult make_result(std::string id, std::optional<std::string> label, std::optional<std::uint64_t> r,
                               ClaimStatus status, ClaimDetail detail = {}) {
    return ClaimResult{std::move(id), std::move(label), r, status, std::move(detail)};
}

inline ClaimResult not_applicable(std::string id, std::optional<std::string> label, std::optional<std::uint64_t> r,
                                  std::string why) {
    ClaimDetail d;
    d.note = std::move(why);
    return make_result(std::move(id), std::move(label), r, ClaimStatus::NotApplicable, std::move(d));
}

inline ClaimResult fail(std::string id, std::optional<std::string> label, std::optional<std::uint64_t> r,
                        std::uint64_t index, std::string expected, std::string actual, std::string note) {
    ClaimDetail d;
    d.index = index;
    d.expected = std::move(expected);
    d.actual = std::move(actual);
    d.note = std::move(note);
    return make_result(std::move(id), std::move(label), r, ClaimStatus::Fail, std::move(d));
}

} // namespace detail

/// Everything about a curve that several checkers share, computed once.
struct CurveAnalysis {
    WeierstrassCurve curve;
    Invariants inv;
    std::uint64_t conductor = 0;
    std::vector<ReductionData> bad;  // ascending p | N
    TorsionResult torsion;

    static CurveAnalysis of(const WeierstrassCurve& c) {
        CurveAnalysis a;
        a.curve = c;
        a.inv = invariants(c);
        a.conductor = conductor_semistable(c);
        for (auto p : prime_divisors(a.conductor)) a.bad.push_back(reduction_data(c, p));
        a.torsion = torsion_order(c);
        return a;
    }

    std::string label() const { return curve.name(); }
    bool torsion_divisible_by(std::uint64_t r) const { return r != 0 && torsion.order % r == 0; }
};

// ---------------------------------------------------------------------------
// Data-level checkers. The curve-level wrappers below compute the data; tests
// feed these directly to inject faults.

/// a_l = 1 + l mod r for every entry of a table of good-prime coefficients.
inline ClaimResult check_eichler_table(const std::optional<std::string>& label, std::uint64_t r,
                                       const std::map<std::uint64_t, std::int64_t>& a_good) {
    for (const auto& [ell, a] : a_good) {
        const std::uint64_t want = residue(static_cast<std::int64_t>(ell + 1), r);
        const std::uint64_t got = residue(a, r);
        if (want != got) {
            return detail::fail(claim::kEichlerCongruence, label, r, ell, std::to_string(want), std::to_string(got),
                                "a_l differs from 1 + l modulo r");
        }
    }
    ClaimDetail d;
    d.checked = a_good.size();
    return detail::make_result(claim::kEichlerCongruence, label, r, ClaimStatus::Pass, d);
}

/// Every p with w_p = +1 satisfies r | p + 1 (r odd).
inline ClaimResult check_bad_prime_sign_data(const std::optional<std::string>& label, std::uint64_t r,
                                             const std::vector<ReductionData>& bad) {
    for (const auto& rd : bad) {
        if (rd.w_p != 1) continue;
        const std::uint64_t got = (rd.p + 1) % r;
        if (got != 0) {
            return detail::fail(claim::kBadPrimeSign, label, r, rd.p, "0", std::to_string(got),
                                "w_p = +1 but r does not divide p + 1");
        }
    }
    ClaimDetail d;
    d.checked = bad.size();
    return detail::make_result(claim::kBadPrimeSign, label, r, ClaimStatus::Pass, d);
}

inline ClaimResult check_exists_negative_w_data(const std::optional<std::string>& label, std::uint64_t r,
                                                const std::vector<ReductionData>& bad) {
    for (const auto& rd : bad) {
        if (rd.w_p == -1) {
            ClaimDetail d;
            d.index = rd.p;
            d.checked = bad.size();
            d.note = "w_p = -1 at p = " + std::to_string(rd.p);
            return detail::make_result(claim::kExistsNegativeW, label, r, ClaimStatus::Pass, d);
        }
    }
    const std::uint64_t last = bad.empty() ? 0 : bad.back().p;
    return detail::fail(claim::kExistsNegativeW, label, r, last, "-1", "+1",
                        "every prime dividing the conductor has w_p = +1");
}

/// f = E mod r on indices 1..P, and a_0(E) = 0 mod r.
inline ClaimResult compare_congruence(const std::optional<std::string>& label, std::uint64_t r,
                                      const ModularSeries& f, const ModularSeries& E) {
    const std::size_t P = std::min(f.precision(), E.precision());
    const std::size_t bad = first_mismatch(f, E, 1, P);
    if (bad <= P) {
        return detail::fail(claim::kMainCongruence, label, r, bad, std::to_string(E[bad]), std::to_string(f[bad]),
                            "a_n(f) differs from a_n(E) modulo r");
    }
    if (E[0] != 0) {
        return detail::fail(claim::kMainCongruence, label, r, 0, "0", std::to_string(E[0]),
                            "constant term of E is not divisible by r");
    }
    ClaimDetail d;
    d.precision = P;
    d.checked = P + 1;
    return detail::make_result(claim::kMainCongruence, label, r, ClaimStatus::Pass, d);
}

// ---------------------------------------------------------------------------
// Curve-level checkers.

inline ClaimResult check_eichler_congruence(const CurveAnalysis& a, std::uint64_t r, std::uint64_t bound = 1000) {
    if (!is_prime(r) || !a.torsion_divisible_by(r)) {
        return detail::not_applicable(claim::kEichlerCongruence, a.label(), r,
                                      "r does not divide the torsion order " + std::to_string(a.torsion.order));
    }
    std::map<std::uint64_t, std::int64_t> a_good;
    for (auto ell : primes_up_to(bound)) {
        if (a.conductor % ell == 0) continue;
        const auto n = static_cast<std::int64_t>(count_points(a.curve, ell).total_smooth);
        a_good[ell] = static_cast<std::int64_t>(ell) + 1 - n;
    }
    auto result = check_eichler_table(a.label(), r, a_good);
    result.detail.note = "good primes l <= " + std::to_string(bound);
    return result;
}

inline ClaimResult check_bad_prime_sign(const CurveAnalysis& a, std::uint64_t r) {
    if (!a.torsion_divisible_by(r)) {
        return detail::not_applicable(claim::kBadPrimeSign, a.label(), r,
                                      "r does not divide the torsion order " + std::to_string(a.torsion.order));
    }
    if (r % 2 == 0) {
        std::string note = "r must be odd";
        for (const auto& rd : a.bad) {
            if (rd.w_p == 1 && (rd.p + 1) % r != 0) {
                note += "; counterexample at r = 2: w_" + std::to_string(rd.p) + " = +1 yet 2 does not divide " +
                        std::to_string(rd.p + 1);
            }
        }
        return detail::not_applicable(claim::kBadPrimeSign, a.label(), r, note);
    }
    return check_bad_prime_sign_data(a.label(), r, a.bad);
}

inline ClaimResult check_exists_negative_w(const CurveAnalysis& a, std::uint64_t r) {
    if (!a.torsion_divisible_by(r)) {
        return detail::not_applicable(claim::kExistsNegativeW, a.label(), r,
                                      "r does not divide the torsion order " + std::to_string(a.torsion.order));
    }
    if ((6 * a.conductor) % r == 0) {
        return detail::not_applicable(claim::kExistsNegativeW, a.label(), r, "r divides 6N");
    }
    return check_exists_negative_w_data(a.label(), r, a.bad);
}

/// delta_p = 1 where w_p = -1 and delta_p = p where w_p = +1.
inline EisensteinSpec deltas_from_signs(const CurveAnalysis& a) {
    std::map<std::uint64_t, std::uint64_t> deltas;
    bool any_negative = false;
    for (const auto& rd : a.bad) {
        if (!rd.w_p) throw NotSemistable(rd.p);
        deltas[rd.p] = *rd.w_p == -1 ? 1 : rd.p;
        any_negative = any_negative || *rd.w_p == -1;
    }
    if (!any_negative) {
        throw SpecViolation("every w_p is +1 for " + a.label() + "; no Eisenstein series matches these signs");
    }
    return EisensteinSpec(a.conductor, std::move(deltas));
}

inline EisensteinSpec deltas_from_signs(const WeierstrassCurve& c) { return deltas_from_signs(CurveAnalysis::of(c)); }

/// ceil(mu(N) / 6) + slack, where mu(N) = prod (p + 1) is the index of Gamma_0(N).
inline std::size_t sturm_precision(std::uint64_t N, std::size_t slack = 10) {
    if (!is_squarefree(N)) throw InvalidArgument("level " + std::to_string(N) + " is not square-free");
    std::uint64_t mu = 1;
    for (auto p : prime_divisors(N)) mu *= p + 1;
    return static_cast<std::size_t>((mu + 5) / 6) + slack;
}

inline ClaimResult check_main_congruence(const CurveAnalysis& a, std::uint64_t r, std::size_t slack = 10) {
    if (!a.torsion_divisible_by(r)) {
        return detail::not_applicable(claim::kMainCongruence, a.label(), r,
                                      "r does not divide the torsion order " + std::to_string(a.torsion.order));
    }
    if ((6 * a.conductor) % r == 0) {
        return detail::not_applicable(claim::kMainCongruence, a.label(), r, "r divides 6N");
    }
    const std::size_t P = sturm_precision(a.conductor, slack);
    std::optional<EisensteinSpec> spec;
    try {
        spec = deltas_from_signs(a);
    } catch (const SpecViolation& e) {
        const std::uint64_t last = a.bad.empty() ? 0 : a.bad.back().p;
        return detail::fail(claim::kMainCongruence, a.label(), r, last, "some w_p = -1", "all w_p = +1", e.what());
    }
    const auto E = reduce_mod(build_E(*spec, P), r);
    const auto f = reduce_mod(af_coeffs(a.curve, P).series, r);
    auto result = compare_congruence(a.label(), r, f, E);
    result.detail.precision = P;
    return result;
}

/// Expects a_r = 1 mod r, which implies ordinarity at r.
inline ClaimResult check_ordinarity(const CurveAnalysis& a, std::uint64_t r) {
    if (!a.torsion_divisible_by(r)) {
        return detail::not_applicable(claim::kOrdinarity, a.label(), r,
                                      "r does not divide the torsion order " + std::to_string(a.torsion.order));
    }
    if ((6 * a.conductor) % r == 0) return detail::not_applicable(claim::kOrdinarity, a.label(), r, "r divides 6N");
    const auto o = ordinarity_check(a.curve, r);
    if (!o.congruent_to_one) {
        return detail::fail(claim::kOrdinarity, a.label(), r, r, "1", std::to_string(residue(o.a_r, r)),
                            o.ordinary ? "ordinary but a_r is not 1 mod r" : "a_r = 0 mod r: not ordinary");
    }
    ClaimDetail d;
    d.index = r;
    d.note = "a_r = " + std::to_string(o.a_r) + ", ordinary";
    return detail::make_result(claim::kOrdinarity, a.label(), r, ClaimStatus::Pass, d);
}

// ---------------------------------------------------------------------------
// Special streams and level lowering.

/// sigma(prime-to-M part of n) * prod_{p | M} (-1)^{ord_p n} mod r, for n >= 1.
inline std::uint64_t special_coefficient(std::uint64_t n, std::uint64_t M, std::uint64_t r) {
    std::uint64_t m = n;
    unsigned sign_flips = 0;
    for (auto p : prime_divisors(M)) {
        while (m % p == 0) {
            m /= p;
            ++sign_flips;
        }
    }
    const std::uint64_t s = sigma(m) % r;
    return sign_flips % 2 == 0 ? s : (r - s) % r;
}

struct SpecialStream {
    std::uint64_t level = 1;
    std::uint64_t r = 3;
    ModularSeries series;
};

/// Pass iff a_n(g) agrees with the special formula at level M for 1 <= n <= P.
inline ClaimResult is_special(const ModularSeries& g, std::uint64_t M) {
    if (!is_squarefree(M)) throw InvalidArgument("level " + std::to_string(M) + " is not square-free");
    const std::uint64_t r = g.field().modulus();
    for (std::size_t n = 1; n <= g.precision(); ++n) {
        const std::uint64_t want = special_coefficient(n, M, r);
        if (g[n] != want) {
            return detail::fail(claim::kSpecialForm, std::nullopt, r, n, std::to_string(want), std::to_string(g[n]),
                                "not special at level " + std::to_string(M));
        }
    }
    ClaimDetail d;
    d.precision = g.precision();
    d.checked = g.precision();
    d.note = "special at level " + std::to_string(M);
    return detail::make_result(claim::kSpecialForm, std::nullopt, r, ClaimStatus::Pass, d);
}

inline SpecialStream make_special_stream(std::uint64_t M, std::uint64_t r, std::size_t precision) {
    if (!is_squarefree(M)) throw InvalidArgument("level " + std::to_string(M) + " is not square-free");
    if (r == 2 || !is_prime(r)) throw InvalidArgument("special streams need an odd prime r");
    PrimeField F(r);
    std::vector<std::uint64_t> coeffs(precision + 1, 0);
    for (std::size_t n = 1; n <= precision; ++n) coeffs[n] = special_coefficient(n, M, r);
    return SpecialStream{M, r, ModularSeries(F, precision, std::move(coeffs))};
}

/// Replaces g (special at level M) by a stream special at level M/s: with E the
/// Eisenstein series having a_s = 1 and a_p = p for the other p | M, E - g mod r
/// is supported on multiples of s; write it as h(q^s) and return h / 2.
/// Needs r odd, r not dividing M, and p = -1 mod r for every p | M/s.
inline SpecialStream lower_level(const SpecialStream& g, std::uint64_t s) {
    const std::uint64_t M = g.level;
    const std::uint64_t r = g.r;
    if (r == 2 || !is_prime(r)) throw InvalidArgument("level lowering needs an odd prime r");
    if (g.series.field().modulus() != r) throw DomainMismatch("stream coefficients are not reduced modulo r");
    if (M % r == 0) throw InvalidArgument("r divides the level");
    if (!is_prime(s) || M % s != 0) throw InvalidArgument(std::to_string(s) + " is not a prime divisor of the level");
    const std::uint64_t lower = M / s;
    for (auto p : prime_divisors(lower)) {
        if ((p + 1) % r != 0) {
            throw InvalidArgument("p = " + std::to_string(p) + " divides the lower level but is not -1 mod " +
                                  std::to_string(r));
        }
    }
    const std::size_t P = g.series.precision();
    const std::size_t out_precision = P / s;
    if (out_precision < 1) throw PrecisionTooSmall("lowered precision floor(P/s) must be at least 1");

    std::map<std::uint64_t, std::uint64_t> deltas;
    for (auto p : prime_divisors(M)) deltas[p] = p == s ? 1 : p;
    const EisensteinSpec spec(M, std::move(deltas));
    const RationalSeries E = build_E(spec, P);

    // coefficients n >= 1 of E are integers; the constant term plays no part
    PrimeField F(r);
    std::vector<std::uint64_t> diff(P + 1, 0);
    for (std::size_t n = 1; n <= P; ++n) diff[n] = F.sub(residue(Integer(E[n].get_num()), r), g.series[n]);
    for (std::size_t n = 1; n <= P; ++n) {
        if (n % s != 0 && diff[n] != 0) throw SupportViolation(n);
    }
    const std::uint64_t half = F.inverse(2);
    std::vector<std::uint64_t> lowered(out_precision + 1, 0);
    for (std::size_t n = 1; n <= out_precision; ++n) lowered[n] = F.mul(diff[n * s], half);
    SpecialStream out{lower, r, ModularSeries(F, out_precision, std::move(lowered))};

    const auto check = is_special(out.series, lower);
    if (check.status != ClaimStatus::Pass) throw SpecialityViolation(*check.detail.index, lower);
    return out;
}

// ---------------------------------------------------------------------------
// Cuspidal screening.

enum class ScreenVerdict { Excluded, NotExcluded };

struct ScreenResult {
    std::uint64_t p = 0, q = 0, r = 0;
    ScreenVerdict verdict = ScreenVerdict::NotExcluded;
    std::string evidence;
};

/// r is excluded from dividing the torsion order of any curve of conductor pq
/// iff r does not divide 6pq(p^2 - 1)(q^2 - 1).
inline ScreenResult cuspidal_screen(std::uint64_t p, std::uint64_t q, std::uint64_t r) {
    if (!is_prime(p) || !is_prime(q) || !is_prime(r)) throw InvalidArgument("screen inputs must be primes");
    if (p == q) throw InvalidArgument("p and q must be distinct");
    if (r == 2) throw InvalidArgument("r must be odd");
    ScreenResult res{p, q, r, ScreenVerdict::Excluded, {}};
    auto divides = [r](std::uint64_t v) { return v % r == 0; };
    const std::uint64_t pm = (p % r) * (p % r) % r;  // p^2 mod r
    const std::uint64_t qm = (q % r) * (q % r) % r;
    std::vector<std::string> hits;
    if (divides(6)) hits.push_back("r | 6");
    if (divides(p)) hits.push_back("r | p");
    if (divides(q)) hits.push_back("r | q");
    if (pm == 1 % r) hits.push_back("r | p^2 - 1");
    if (qm == 1 % r) hits.push_back("r | q^2 - 1");
    if (hits.empty()) {
        res.evidence = "p^2 - 1 = " + std::to_string((pm + r - 1) % r) + " mod " + std::to_string(r) +
                       ", q^2 - 1 = " + std::to_string((qm + r - 1) % r) + " mod " + std::to_string(r) +
                       ", r does not divide 6pq";
        return res;
    }
    res.verdict = ScreenVerdict::NotExcluded;
    for (std::size_t i = 0; i < hits.size(); ++i) res.evidence += (i ? ", " : "") + hits[i];
    return res;
}

inline ClaimResult to_claim(const ScreenResult& s) {
    ClaimDetail d;
    d.note = (s.verdict == ScreenVerdict::Excluded ? "excluded: " : "not excluded: ") + s.evidence;
    return detail::make_result(claim::kCuspidalScreen, std::nullopt, s.r,
                               s.verdict == ScreenVerdict::Excluded ? ClaimStatus::Pass : ClaimStatus::NotApplicable,
                               d);
}

// ---------------------------------------------------------------------------
// Orchestration.

struct VerifyOptions {
    std::uint64_t prime_bound = 1000;
    std::size_t precision_slack = 10;
};

struct VerificationReport {
    std::string label;
    WeierstrassCurve curve;
    std::uint64_t conductor = 0;
    unsigned torsion_order = 1;
    std::vector<ClaimResult> claims;             // sorted by claim id, then r
    std::map<std::uint64_t, std::size_t> precision;  // r -> congruence precision

    bool any_fail() const {
        return std::any_of(claims.begin(), claims.end(),
                           [](const ClaimResult& c) { return c.status == ClaimStatus::Fail; });
    }
};

inline VerificationReport verify_curve(const CurveAnalysis& a, const VerifyOptions& opt = {}) {
    VerificationReport rep;
    rep.label = a.label();
    rep.curve = a.curve;
    rep.conductor = a.conductor;
    rep.torsion_order = a.torsion.order;
    const std::vector<std::string> ids{claim::kBadPrimeSign, claim::kEichlerCongruence, claim::kExistsNegativeW,
                                       claim::kMainCongruence, claim::kOrdinarity};
    for (auto r : a.torsion.prime_divisors) {
        if (r == 2 || r == 3 || a.conductor % r == 0) {
            const std::string why = a.conductor % r == 0 ? "hypothesis fails: r divides N" : "hypothesis fails: r divides 6";
            for (const auto& id : ids) {
                if (id == claim::kBadPrimeSign) {
                    auto c = check_bad_prime_sign(a, r);
                    const std::string extra = c.status == ClaimStatus::NotApplicable ? c.detail.note : "";
                    c.status = ClaimStatus::NotApplicable;
                    c.detail = ClaimDetail{};
                    c.detail.note = why + (extra.empty() ? "" : "; " + extra);
                    rep.claims.push_back(std::move(c));
                } else {
                    rep.claims.push_back(detail::not_applicable(id, a.label(), r, why));
                }
            }
            continue;
        }
        rep.claims.push_back(check_bad_prime_sign(a, r));
        rep.claims.push_back(check_eichler_congruence(a, r, opt.prime_bound));
        rep.claims.push_back(check_exists_negative_w(a, r));
        rep.claims.push_back(check_main_congruence(a, r, opt.precision_slack));
        rep.claims.push_back(check_ordinarity(a, r));
        rep.precision[r] = sturm_precision(a.conductor, opt.precision_slack);
        const auto primes = prime_divisors(a.conductor);
        if (primes.size() == 2) {
            // a curve with r-torsion must not be screened out at its own conductor
            const auto s = cuspidal_screen(primes[0], primes[1], r);
            ClaimDetail d;
            d.note = s.evidence;
            if (s.verdict == ScreenVerdict::Excluded) {
                rep.claims.push_back(detail::fail(claim::kCuspidalScreen, a.label(), r, r, "not excluded", "excluded",
                                                  "screen excludes a prime that divides the torsion order"));
            } else {
                rep.claims.push_back(detail::make_result(claim::kCuspidalScreen, a.label(), r, ClaimStatus::Pass, d));
            }
        }
    }
    std::stable_sort(rep.claims.begin(), rep.claims.end(), [](const ClaimResult& x, const ClaimResult& y) {
        return std::pair(x.claim_id, x.r.value_or(0)) < std::pair(y.claim_id, y.r.value_or(0));
    });
    return rep;
}

inline VerificationReport verify_curve(const WeierstrassCurve& c, const VerifyOptions& opt = {}) {
    return verify_curve(CurveAnalysis::of(c), opt);
}

} // namespace eiscong
