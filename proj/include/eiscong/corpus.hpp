#pragma once

// Line-oriented curve database format:
//
//   <label> <conductor> [a1,a2,a3,a4,a6] [torsion=<k>] [optimal=<0|1>] [class=<id>]
//
// Fields are whitespace separated; the coefficient list has no interior spaces;
// the key=value fields are optional and may appear in any order. Blank lines
// and lines whose first non-space character is '#' are skipped.
//
// Importing from Cremona's allcurves tables: label and conductor map directly,
// the coefficient list is copied verbatim, torsion comes from the torsion
// column, and class= is the label with its trailing isogeny index removed.

#include <array>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eiscong/arith.hpp"
#include "eiscong/curves.hpp"
#include "eiscong/error.hpp"

namespace eiscong {

struct CorpusEntry {
    std::string label;
    std::uint64_t conductor_claimed = 0;
    std::array<Integer, 5> coefficients;
    std::optional<unsigned> torsion_claimed;
    std::optional<bool> optimal;
    std::optional<std::string> isogeny_class;

    WeierstrassCurve curve() const { return WeierstrassCurve{coefficients, label, optimal}; }

    friend bool operator==(const CorpusEntry&, const CorpusEntry&) = default;
};

namespace detail {

struct Token {
    std::string_view text;
    std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size()) break;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        out.push_back({line.substr(start, i - start), start + 1});
    }
    return out;
}

inline bool is_integer_literal(std::string_view s) {
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

inline Integer parse_integer(std::string_view s, std::size_t line, std::size_t column) {
    if (!is_integer_literal(s)) throw ParseError(line, column, "expected an integer, got '" + std::string(s) + "'");
    if (s[0] == '+') s.remove_prefix(1);
    return Integer(std::string(s));
}

inline std::uint64_t parse_positive(std::string_view s, std::size_t line, std::size_t column, const char* what) {
    Integer v = parse_integer(s, line, column);
    if (v <= 0 || !v.fits_ulong_p()) {
        throw ParseError(line, column, std::string(what) + " must be a positive integer");
    }
    return v.get_ui();
}

} // namespace detail

/// Parses "[a1,a2,a3,a4,a6]"; column is where the list starts, for error positions.
inline std::array<Integer, 5> parse_coefficient_list(std::string_view text, std::size_t line_number = 1,
                                                     std::size_t column = 1) {
    if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
        throw ParseError(line_number, column, "coefficients must be a bracketed list without spaces");
    }
    std::array<Integer, 5> coeffs;
    std::string_view body = text.substr(1, text.size() - 2);
    std::size_t idx = 0, pos = 0;
    while (true) {
        std::size_t comma = body.find(',', pos);
        std::string_view item = body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        if (idx >= 5) throw ParseError(line_number, column + 1 + pos, "more than five coefficients");
        coeffs[idx++] = detail::parse_integer(item, line_number, column + 1 + pos);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (idx != 5) {
        throw ParseError(line_number, column, "expected five coefficients [a1,a2,a3,a4,a6], got " + std::to_string(idx));
    }
    return coeffs;
}

/// Parses one line; nullopt for blank and comment lines.
inline std::optional<CorpusEntry> parse_line(std::string_view text, std::size_t line_number = 1) {
    const auto tokens = detail::tokenize(text);
    if (tokens.empty() || tokens.front().text.front() == '#') return std::nullopt;
    if (tokens.size() < 3) {
        std::size_t col = text.size() + 1;
        throw ParseError(line_number, col, "expected '<label> <conductor> [a1,a2,a3,a4,a6]'");
    }
    CorpusEntry e;
    e.label = std::string(tokens[0].text);
    e.conductor_claimed = detail::parse_positive(tokens[1].text, line_number, tokens[1].column, "conductor");

    e.coefficients = parse_coefficient_list(tokens[2].text, line_number, tokens[2].column);

    for (std::size_t t = 3; t < tokens.size(); ++t) {
        const auto& tok = tokens[t];
        const auto eq = tok.text.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_number, tok.column, "expected key=value");
        const std::string_view key = tok.text.substr(0, eq);
        const std::string_view value = tok.text.substr(eq + 1);
        const std::size_t vcol = tok.column + eq + 1;
        auto duplicate = [&] { return ParseError(line_number, tok.column, "duplicate field '" + std::string(key) + "'"); };
        if (key == "torsion") {
            if (e.torsion_claimed) throw duplicate();
            e.torsion_claimed = static_cast<unsigned>(detail::parse_positive(value, line_number, vcol, "torsion"));
        } else if (key == "optimal") {
            if (e.optimal) throw duplicate();
            if (value != "0" && value != "1") throw ParseError(line_number, vcol, "optimal must be 0 or 1");
            e.optimal = value == "1";
        } else if (key == "class") {
            if (e.isogeny_class) throw duplicate();
            if (value.empty()) throw ParseError(line_number, vcol, "empty isogeny class");
            e.isogeny_class = std::string(value);
        } else {
            throw ParseError(line_number, tok.column, "unknown field '" + std::string(key) + "'");
        }
    }
    return e;
}

inline std::string render(const CorpusEntry& e) {
    std::string s = e.label + " " + std::to_string(e.conductor_claimed) + " [";
    for (std::size_t i = 0; i < 5; ++i) {
        if (i) s += ",";
        s += e.coefficients[i].get_str();
    }
    s += "]";
    if (e.torsion_claimed) s += " torsion=" + std::to_string(*e.torsion_claimed);
    if (e.optimal) s += std::string(" optimal=") + (*e.optimal ? "1" : "0");
    if (e.isogeny_class) s += " class=" + *e.isogeny_class;
    return s;
}

/// Re-derives conductor and torsion and compares them with the claimed values.
inline void validate_entry(const CorpusEntry& e, std::size_t line_number = 0) {
    const auto c = e.curve();
    std::uint64_t N = 0;
    try {
        N = conductor_semistable(c);
    } catch (const Error& ex) {
        throw ValidationError(line_number, e.label + ": " + ex.what());
    }
    if (N != e.conductor_claimed) {
        throw ValidationError(line_number, e.label + ": claimed conductor " + std::to_string(e.conductor_claimed) +
                                               " but the model has conductor " + std::to_string(N));
    }
    if (e.torsion_claimed) {
        const auto t = torsion_order(c).order;
        if (t != *e.torsion_claimed) {
            throw ValidationError(line_number, e.label + ": claimed torsion " + std::to_string(*e.torsion_claimed) +
                                                   " but found " + std::to_string(t));
        }
    }
}

struct CorpusLineError {
    std::size_t line = 0;
    std::string message;
};

struct LoadedCorpus {
    std::vector<CorpusEntry> entries;
    std::vector<CorpusLineError> errors;
};

/// Parses and validates every line; a bad line is recorded and skipped.
inline LoadedCorpus load_corpus(std::string_view text, bool validate = true) {
    LoadedCorpus out;
    std::size_t line_number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_number;
        try {
            if (auto e = parse_line(line, line_number)) {
                if (validate) validate_entry(*e, line_number);
                out.entries.push_back(std::move(*e));
            }
        } catch (const Error& ex) {
            out.errors.push_back({line_number, ex.what()});
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return out;
}

inline constexpr std::string_view kBuiltinCorpusText = R"(# Semistable curves with globally minimal models.
11a1 11 [0,-1,1,-10,-20] torsion=5 optimal=1 class=11a
11a2 11 [0,-1,1,-7820,-263580] torsion=1 optimal=0 class=11a
11a3 11 [0,-1,1,0,0] torsion=5 optimal=0 class=11a
14a1 14 [1,0,1,4,-6] torsion=6 optimal=1 class=14a
14a2 14 [1,0,1,-36,-70] torsion=6 optimal=0 class=14a
14a3 14 [1,0,1,-171,-874] torsion=2 optimal=0 class=14a
14a4 14 [1,0,1,-1,0] torsion=6 optimal=0 class=14a
15a1 15 [1,1,1,-10,-10] torsion=8 optimal=1 class=15a
17a1 17 [1,-1,1,-1,-14] torsion=4 optimal=1 class=17a
19a1 19 [0,1,1,-9,-15] torsion=3 optimal=1 class=19a
21a1 21 [1,0,0,-4,-1] torsion=8 optimal=1 class=21a
26a1 26 [1,0,1,-5,-8] torsion=3 optimal=1 class=26a
26b1 26 [1,-1,1,-3,3] torsion=7 optimal=1 class=26b
26b2 26 [1,-1,1,-213,-1257] torsion=1 optimal=0 class=26b
30a1 30 [1,0,1,1,2] torsion=6 optimal=1 class=30a
35a1 35 [0,1,1,9,1] torsion=3 optimal=1 class=35a
37a1 37 [0,0,1,-1,0] torsion=1 optimal=1 class=37a
37b1 37 [0,1,1,-23,-50] torsion=3 optimal=1 class=37b
37b2 37 [0,1,1,-1873,-31833] torsion=1 optimal=0 class=37b
39a1 39 [1,1,0,-4,-5] torsion=4 optimal=1 class=39a
43a1 43 [0,1,1,0,0] torsion=1 optimal=1 class=43a
53a1 53 [1,-1,1,0,0] torsion=1 optimal=1 class=53a
58a1 58 [1,-1,0,-1,1] torsion=1 optimal=1 class=58a
)";

/// The shipped dataset, parsed but not re-validated (the test suite validates it).
inline std::vector<CorpusEntry> builtin_corpus() {
    auto loaded = load_corpus(kBuiltinCorpusText, false);
    if (!loaded.errors.empty()) throw InternalError("built-in corpus is malformed: " + loaded.errors.front().message);
    return std::move(loaded.entries);
}

} // namespace eiscong
