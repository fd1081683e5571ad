#pragma once

// Command-line front end. run_cli() is the whole program minus process setup,
// so the test suite can drive it in-process.
//
// Exit codes: 0 all checks pass, 1 at least one Fail, 2 usage or input error.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eiscong/corpus.hpp"
#include "eiscong/eisenstein.hpp"
#include "eiscong/report.hpp"
#include "eiscong/series.hpp"
#include "eiscong/verify.hpp"

namespace eiscong {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

class UsageError : public Error {
public:
    using Error::Error;
};

inline std::map<std::uint64_t, std::uint64_t> parse_deltas(const std::string& text) {
    std::map<std::uint64_t, std::uint64_t> deltas;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("delta '" + item + "' is not of the form p=value");
        try {
            std::size_t used = 0;
            const auto p = std::stoull(item.substr(0, eq), &used);
            if (used != eq) throw UsageError("bad prime in '" + item + "'");
            const auto rest = item.substr(eq + 1);
            const auto d = std::stoull(rest, &used);
            if (used != rest.size()) throw UsageError("bad delta value in '" + item + "'");
            if (!deltas.emplace(p, d).second) throw UsageError("prime " + std::to_string(p) + " listed twice");
        } catch (const std::logic_error&) {
            throw UsageError("delta '" + item + "' is not of the form p=value");
        }
    }
    return deltas;
}

inline void print_report(const VerificationReport& rep, std::ostream& out) {
    out << rep.label << " " << rep.curve.coefficient_string() << " N=" << rep.conductor
        << " torsion=" << rep.torsion_order << "\n";
    if (rep.claims.empty()) out << "  (no torsion prime to test)\n";
    for (const auto& c : rep.claims) {
        out << "  " << c.claim_id << " r=" << (c.r ? std::to_string(*c.r) : "-") << " " << to_string(c.status);
        const auto text = detail_text(c.detail);
        if (!text.empty()) out << " [" << text << "]";
        out << "\n";
    }
}

inline bool write_file(const std::string& path, const std::string& content, std::ostream& err) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        err << "error: cannot write " << path << "\n";
        return false;
    }
    f << content;
    return static_cast<bool>(f);
}

struct VerifyArgs {
    std::string curve;
    std::string file;
    bool builtin = false;
    std::string json_path;
    std::string csv_path;
    std::uint64_t prime_bound = 1000;
    std::size_t precision_slack = 10;
};

inline int cmd_verify(const VerifyArgs& a, const std::vector<std::string>& command, std::ostream& out,
                      std::ostream& err) {
    const int sources = (a.curve.empty() ? 0 : 1) + (a.file.empty() ? 0 : 1) + (a.builtin ? 1 : 0);
    if (sources != 1) {
        err << "error: give exactly one of --curve, --file, --builtin\n";
        return kExitUsage;
    }
    ReportDocument doc;
    doc.command = command;
    std::vector<CorpusEntry> entries;
    if (!a.curve.empty()) {
        CorpusEntry e;
        try {
            e.coefficients = parse_coefficient_list(a.curve);
        } catch (const Error& ex) {
            err << "error: --curve: " << ex.what() << "\n";
            return kExitUsage;
        }
        e.label = WeierstrassCurve{e.coefficients, {}, {}}.coefficient_string();
        entries.push_back(std::move(e));
    } else if (!a.file.empty()) {
        std::ifstream f(a.file, std::ios::binary);
        if (!f) {
            err << "error: cannot open " << a.file << "\n";
            return kExitUsage;
        }
        const std::string text{std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
        auto loaded = load_corpus(text);
        entries = std::move(loaded.entries);
        doc.input_errors = std::move(loaded.errors);
    } else {
        entries = builtin_corpus();
    }

    const VerifyOptions opt{a.prime_bound, a.precision_slack};
    for (const auto& e : entries) {
        try {
            doc.curves.push_back(verify_curve(e.curve(), opt));
        } catch (const Error& ex) {
            doc.input_errors.push_back({0, e.label + ": " + ex.what()});
        }
    }
    for (const auto& rep : doc.curves) print_report(rep, out);
    for (const auto& e : doc.input_errors) {
        err << "input error" << (e.line ? " at line " + std::to_string(e.line) : std::string()) << ": " << e.message
            << "\n";
    }
    const auto s = doc.summary();
    out << "summary: " << s.pass << " pass, " << s.fail << " fail, " << s.not_applicable << " not applicable\n";

    if (!a.json_path.empty() && !write_file(a.json_path, to_json(doc).dump(2) + "\n", err)) return kExitUsage;
    if (!a.csv_path.empty() && !write_file(a.csv_path, to_csv(doc), err)) return kExitUsage;
    if (!doc.input_errors.empty()) return kExitUsage;
    return s.fail > 0 ? kExitFail : kExitOk;
}

struct EisensteinArgs {
    std::uint64_t level = 0;
    std::string deltas;
    std::size_t precision = 20;
    std::optional<std::uint64_t> mod;
    std::uint64_t eigen_bound = 20;
};

inline int cmd_eisenstein(const EisensteinArgs& a, std::ostream& out, std::ostream& err) {
    std::optional<EisensteinSpec> spec;
    try {
        spec.emplace(a.level, parse_deltas(a.deltas));
    } catch (const SpecViolation& e) {
        err << "error: " << e.what()
            << " (an Eisenstein eigenseries with these U_p eigenvalues needs square-free N and delta_p in {1, p} "
               "with delta_p = 1 for at least one p)\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const auto E = build_E(*spec, a.precision);
    if (a.mod) {
        try {
            out << to_string(reduce_mod(E, *a.mod)) << "\n";
        } catch (const Error& e) {
            err << "error: --mod " << *a.mod << ": " << e.what() << "\n";
            return kExitUsage;
        }
    } else {
        out << to_string(E) << "\n";
    }

    std::uint64_t largest = 0;
    for (auto p : spec->primes()) largest = std::max(largest, p);
    const std::size_t check_precision = std::max<std::size_t>({a.precision, 100, 4 * largest, 4 * a.eigen_bound});
    const auto report = verify_eigen(build_E(*spec, check_precision), *spec, a.eigen_bound);
    out << "# eigencheck at precision " << check_precision << "\n";
    for (const auto& c : report.checks) {
        out << "# " << c.op << "_" << c.prime << " eigenvalue " << c.eigenvalue << " up to q^" << c.checked_precision
            << ": " << (c.passed ? "pass" : "fail at index " + std::to_string(c.first_mismatch)) << "\n";
    }
    return report.all_passed() ? kExitOk : kExitFail;
}

struct ScreenArgs {
    std::uint64_t p = 0, q = 0;
    std::optional<std::uint64_t> r;
};

inline int cmd_screen(const ScreenArgs& a, std::ostream& out, std::ostream& err) {
    std::vector<std::uint64_t> rs = a.r ? std::vector<std::uint64_t>{*a.r} : std::vector<std::uint64_t>{5, 7};
    std::vector<ScreenResult> results;
    try {
        for (auto r : rs) results.push_back(cuspidal_screen(a.p, a.q, r));
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    for (const auto& s : results) {
        out << s.r << ": " << (s.verdict == ScreenVerdict::Excluded ? "excluded" : "not-excluded") << " (" << s.evidence
            << ")\n";
    }
    return kExitOk;
}

} // namespace detail

/// args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Eisenstein congruences for semistable elliptic curves", "eiscong"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    detail::VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "check the congruence claims for one curve or a corpus");
    verify->add_option("--curve", va.curve, "Weierstrass coefficients \"[a1,a2,a3,a4,a6]\"");
    verify->add_option("--file", va.file, "corpus file, one curve per line");
    verify->add_flag("--builtin", va.builtin, "use the built-in corpus");
    verify->add_option("--json", va.json_path, "write a JSON report");
    verify->add_option("--csv", va.csv_path, "write a CSV report");
    verify->add_option("--prime-bound", va.prime_bound, "largest good prime for the point-count congruence")
        ->check(CLI::PositiveNumber);
    verify->add_option("--precision-slack", va.precision_slack, "coefficients checked past the Sturm-type index");

    detail::EisensteinArgs ea;
    auto* eis = app.add_subcommand("eisenstein", "print the Eisenstein eigenseries for a level and delta vector");
    eis->add_option("--level", ea.level, "square-free level N")->required();
    eis->add_option("--deltas", ea.deltas, "comma list p=delta_p, e.g. 2=1,7=7")->required();
    eis->add_option("--prec", ea.precision, "last coefficient index printed");
    eis->add_option("--mod", ea.mod, "reduce coefficients modulo this prime");
    eis->add_option("--eigen-bound", ea.eigen_bound, "largest l for the T_l eigencheck");

    detail::ScreenArgs sa;
    auto* screen = app.add_subcommand("screen", "which odd primes can divide torsion at conductor pq");
    screen->add_option("--p", sa.p, "first prime")->required();
    screen->add_option("--q", sa.q, "second prime")->required();
    screen->add_option("--r", sa.r, "prime to test (default: 5 and 7)");

    std::vector<std::string> argv_storage{"eiscong"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_storage) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForVersion& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (verify->parsed()) return detail::cmd_verify(va, args, out, err);
        if (eis->parsed()) return detail::cmd_eisenstein(ea, out, err);
        if (screen->parsed()) return detail::cmd_screen(sa, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace eiscong
