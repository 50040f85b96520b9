// report_format.hpp
// Table / TSV / JSON renderings of presence reports and epsilon sweeps.
// Machine formats use 12 significant digits, the human table 6.
//
// JSON schema:
//   { "scenario": str, "mode": "analytic"|"fd", "epsilon": num,
//     "magnitude_only": bool, "condition": str|null,
//     "rows": [ { "site": str, "re": num|null, "im": num|null, "abs": num|null,
//                 "oracle_re": num|null, "oracle_im": num|null, "oracle_abs": num|null,
//                 "lying": bool, "divergent": bool, "kick": num (only with momentum) } ] }
// In magnitude-only mode the re/im/oracle_re/oracle_im fields are omitted.

#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "whichpath/presence.hpp"

namespace whichpath {

enum class OutputFormat { Table, Tsv, Json };

struct FormatOptions {
    OutputFormat format = OutputFormat::Table;
    bool magnitudeOnly = false;
    std::string scenario;
    std::optional<std::string> condition;
};

/// %g with `digits` significant digits; -0 prints as 0.
inline std::string formatNumber(double v, int digits) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    std::string s(buf);
    if (s == "-0") s = "0";
    return s;
}

namespace detail {

inline nlohmann::ordered_json jsonNumber(double v) {
    if (!std::isfinite(v)) return nullptr;
    return std::strtod(formatNumber(v, 12).c_str(), nullptr);
}

inline std::string padRight(std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
}

inline std::string renderTable(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& r : rows) {
        widths.resize(std::max(widths.size(), r.size()));
        for (std::size_t i = 0; i < r.size(); ++i) widths[i] = std::max(widths[i], r[i].size());
    }
    std::string out;
    for (const auto& r : rows) {
        std::string line;
        for (std::size_t i = 0; i < r.size(); ++i) line += (i ? "  " : "") + padRight(r[i], widths[i]);
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
    }
    return out;
}

}  // namespace detail

inline std::string formatReport(const PresenceReport& report, const FormatOptions& opt) {
    const bool kicks = !report.traces.empty();
    auto kickFor = [&](const std::string& site) {
        for (const auto& t : report.traces)
            if (t.site == site) return t.mirrorKick;
        return std::numeric_limits<double>::quiet_NaN();
    };

    if (opt.format == OutputFormat::Json) {
        nlohmann::ordered_json j;
        j["scenario"] = opt.scenario;
        j["mode"] = toString(report.mode);
        j["epsilon"] = detail::jsonNumber(report.epsilonUsed);
        j["magnitude_only"] = opt.magnitudeOnly;
        j["condition"] = opt.condition ? nlohmann::ordered_json(*opt.condition) : nlohmann::ordered_json(nullptr);
        auto rows = nlohmann::ordered_json::array();
        for (const auto& e : report.entries) {
            nlohmann::ordered_json r;
            r["site"] = e.site;
            if (!opt.magnitudeOnly) {
                r["re"] = detail::jsonNumber(e.observed.value.real());
                r["im"] = detail::jsonNumber(e.observed.value.imag());
            }
            r["abs"] = detail::jsonNumber(e.magnitude);
            if (!opt.magnitudeOnly) {
                r["oracle_re"] = detail::jsonNumber(e.oracle.value.real());
                r["oracle_im"] = detail::jsonNumber(e.oracle.value.imag());
            }
            r["oracle_abs"] = detail::jsonNumber(std::abs(e.oracle.value));
            r["lying"] = e.lying;
            r["divergent"] = e.divergent;
            if (kicks) r["kick"] = detail::jsonNumber(kickFor(e.site));
            rows.push_back(std::move(r));
        }
        j["rows"] = std::move(rows);
        return j.dump(2) + "\n";
    }

    const bool tsv = opt.format == OutputFormat::Tsv;
    const int digits = tsv ? 12 : 6;
    auto num = [&](double v) { return formatNumber(v, digits); };
    auto flag = [&](bool b) { return std::string(tsv ? (b ? "1" : "0") : (b ? "yes" : "no")); };

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"site"};
    if (opt.magnitudeOnly) {
        header.insert(header.end(), {"abs_alpha", "abs_oracle"});
    } else {
        header.insert(header.end(), {"re_alpha", "im_alpha", "abs_alpha", "re_oracle", "im_oracle"});
    }
    header.insert(header.end(), {"lying", "divergent"});
    if (kicks) header.push_back("kick");
    rows.push_back(header);
    for (const auto& e : report.entries) {
        std::vector<std::string> r{e.site};
        if (opt.magnitudeOnly) {
            r.insert(r.end(), {num(e.magnitude), num(std::abs(e.oracle.value))});
        } else {
            r.insert(r.end(), {num(e.observed.value.real()), num(e.observed.value.imag()), num(e.magnitude),
                               num(e.oracle.value.real()), num(e.oracle.value.imag())});
        }
        r.insert(r.end(), {flag(e.lying), flag(e.divergent)});
        if (kicks) r.push_back(num(kickFor(e.site)));
        rows.push_back(std::move(r));
    }

    if (tsv) {
        std::string out;
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "\t" : "") + r[i];
            out += "\n";
        }
        return out;
    }
    std::string out = "scenario " + opt.scenario + "  mode " + toString(report.mode);
    if (report.mode == ReportMode::FiniteDifference) out += "  epsilon " + num(report.epsilonUsed);
    if (opt.condition) out += "  condition " + *opt.condition;
    return out + "\n" + detail::renderTable(rows);
}

/// Sweep rows as TSV; divergent rows carry the raw bounded estimate.
inline std::string formatSweep(const std::vector<SweepRow>& rows) {
    std::string out = "epsilon\tre_alpha\tim_alpha\tdivergent\n";
    for (const auto& r : rows) {
        out += formatNumber(r.epsilon, 12) + "\t" + formatNumber(r.alpha.value.real(), 12) + "\t" +
               formatNumber(r.alpha.value.imag(), 12) + "\t" + (r.alpha.divergent ? "1" : "0") + "\n";
    }
    return out;
}

}  // namespace whichpath
