#pragma once

// Machine-readable verification reports (JSON and CSV). The JSON layout is
// described in docs/report.schema.json; validate_report() checks a document
// against the same rules.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "eiscong/corpus.hpp"
#include "eiscong/verify.hpp"

namespace eiscong {

inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

struct ReportSummary {
    std::size_t pass = 0;
    std::size_t fail = 0;
    std::size_t not_applicable = 0;
};

struct ReportDocument {
    std::string tool_version = kToolVersion;
    std::vector<std::string> command;
    std::vector<VerificationReport> curves;
    std::vector<CorpusLineError> input_errors;

    ReportSummary summary() const {
        ReportSummary s;
        for (const auto& c : curves) {
            for (const auto& r : c.claims) {
                switch (r.status) {
                    case ClaimStatus::Pass: ++s.pass; break;
                    case ClaimStatus::Fail: ++s.fail; break;
                    case ClaimStatus::NotApplicable: ++s.not_applicable; break;
                }
            }
        }
        return s;
    }
};

inline Json to_json(const ClaimDetail& d) {
    Json j = Json::object();
    if (d.index) j["index"] = *d.index;
    if (d.expected) j["expected"] = *d.expected;
    if (d.actual) j["actual"] = *d.actual;
    if (d.precision) j["precision"] = *d.precision;
    if (d.checked) j["checked"] = *d.checked;
    if (!d.note.empty()) j["note"] = d.note;
    return j;
}

inline Json to_json(const ClaimResult& c) {
    Json j;
    j["claim_id"] = c.claim_id;
    j["r"] = c.r ? Json(*c.r) : Json(nullptr);
    j["status"] = to_string(c.status);
    j["detail"] = to_json(c.detail);
    return j;
}

inline Json to_json(const VerificationReport& rep) {
    Json j;
    j["label"] = rep.label;
    j["coefficients"] = rep.curve.coefficient_string();
    j["conductor"] = rep.conductor;
    j["torsion_order"] = rep.torsion_order;
    Json prec = Json::object();
    for (const auto& [r, p] : rep.precision) prec[std::to_string(r)] = p;
    j["precision"] = prec;
    Json claims = Json::array();
    for (const auto& c : rep.claims) claims.push_back(to_json(c));
    j["claims"] = claims;
    return j;
}

inline Json to_json(const ReportDocument& doc) {
    Json j;
    j["tool_version"] = doc.tool_version;
    j["command"] = doc.command;
    Json curves = Json::array();
    for (const auto& c : doc.curves) curves.push_back(to_json(c));
    j["curves"] = curves;
    Json errors = Json::array();
    for (const auto& e : doc.input_errors) errors.push_back(Json{{"line", e.line}, {"message", e.message}});
    j["input_errors"] = errors;
    const auto s = doc.summary();
    j["summary"] = Json{{"pass", s.pass}, {"fail", s.fail}, {"not_applicable", s.not_applicable}};
    return j;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

inline std::string detail_text(const ClaimDetail& d) {
    std::vector<std::string> parts;
    if (d.index) parts.push_back("index=" + std::to_string(*d.index));
    if (d.expected) parts.push_back("expected=" + *d.expected);
    if (d.actual) parts.push_back("actual=" + *d.actual);
    if (d.precision) parts.push_back("precision=" + std::to_string(*d.precision));
    if (d.checked) parts.push_back("checked=" + std::to_string(*d.checked));
    if (!d.note.empty()) parts.push_back(d.note);
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "; " : "") + parts[i];
    return s;
}

} // namespace detail

inline std::string to_csv(const ReportDocument& doc) {
    std::string out = "label,claim_id,r,status,detail\n";
    for (const auto& rep : doc.curves) {
        for (const auto& c : rep.claims) {
            out += detail::csv_field(rep.label) + "," + c.claim_id + "," + (c.r ? std::to_string(*c.r) : "") + "," +
                   to_string(c.status) + "," + detail::csv_field(detail::detail_text(c.detail)) + "\n";
        }
    }
    return out;
}

/// Structural check of a report document against the rules in docs/report.schema.json;
/// returns the problems found (empty if valid).
inline std::vector<std::string> validate_report(const Json& j) {
    std::vector<std::string> problems;
    auto need = [&](const Json& obj, const char* key, auto pred, const std::string& where) {
        if (!obj.is_object() || !obj.contains(key) || !pred(obj[key])) {
            problems.push_back(where + "." + key + " is missing or has the wrong type");
            return false;
        }
        return true;
    };
    auto is_string = [](const Json& v) { return v.is_string(); };
    auto is_uint = [](const Json& v) { return v.is_number_unsigned(); };
    auto is_array = [](const Json& v) { return v.is_array(); };
    auto is_object = [](const Json& v) { return v.is_object(); };

    if (!j.is_object()) return {"document is not an object"};
    need(j, "tool_version", is_string, "$");
    if (need(j, "command", is_array, "$")) {
        for (const auto& c : j["command"]) {
            if (!c.is_string()) problems.push_back("$.command holds a non-string");
        }
    }
    ReportSummary tally;
    if (need(j, "curves", is_array, "$")) {
        for (std::size_t i = 0; i < j["curves"].size(); ++i) {
            const auto& cv = j["curves"][i];
            const std::string where = "$.curves[" + std::to_string(i) + "]";
            need(cv, "label", is_string, where);
            need(cv, "coefficients", is_string, where);
            need(cv, "conductor", is_uint, where);
            need(cv, "torsion_order", is_uint, where);
            if (need(cv, "precision", is_object, where)) {
                for (const auto& [k, v] : cv["precision"].items()) {
                    if (!v.is_number_unsigned()) problems.push_back(where + ".precision." + k + " is not an integer");
                }
            }
            if (!need(cv, "claims", is_array, where)) continue;
            for (std::size_t k = 0; k < cv["claims"].size(); ++k) {
                const auto& cl = cv["claims"][k];
                const std::string cw = where + ".claims[" + std::to_string(k) + "]";
                need(cl, "claim_id", is_string, cw);
                need(cl, "r", [](const Json& v) { return v.is_null() || v.is_number_unsigned(); }, cw);
                need(cl, "detail", is_object, cw);
                if (!need(cl, "status", is_string, cw)) continue;
                const auto status = cl["status"].get<std::string>();
                if (status == "pass") {
                    ++tally.pass;
                } else if (status == "fail") {
                    ++tally.fail;
                    const auto& d = cl.value("detail", Json::object());
                    if (!d.contains("index") || !d.contains("expected") || !d.contains("actual")) {
                        problems.push_back(cw + " is a fail without a counterwitness");
                    }
                } else if (status == "not_applicable") {
                    ++tally.not_applicable;
                } else {
                    problems.push_back(cw + ".status has unknown value '" + status + "'");
                }
            }
        }
    }
    if (need(j, "input_errors", is_array, "$")) {
        for (const auto& e : j["input_errors"]) {
            need(e, "line", is_uint, "$.input_errors[]");
            need(e, "message", is_string, "$.input_errors[]");
        }
    }
    if (need(j, "summary", is_object, "$")) {
        const auto& s = j["summary"];
        if (need(s, "pass", is_uint, "$.summary") && need(s, "fail", is_uint, "$.summary") &&
            need(s, "not_applicable", is_uint, "$.summary")) {
            if (s["pass"].get<std::size_t>() != tally.pass || s["fail"].get<std::size_t>() != tally.fail ||
                s["not_applicable"].get<std::size_t>() != tally.not_applicable) {
                problems.push_back("$.summary does not match the listed claims");
            }
        }
    }
    return problems;
}

} // namespace eiscong
