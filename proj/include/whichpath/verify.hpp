// verify.hpp
// Self-check over the built-in presets: golden tables plus the cross-checks
// that tie observed alpha to the weak-value oracle.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "whichpath/presence.hpp"
#include "whichpath/presets.hpp"
#include "whichpath/report_format.hpp"

namespace whichpath {

struct VerifyCheck {
    std::string kind;
    std::string subject;
    bool pass = false;
    std::string detail;  // the failing comparison, with both values
};

inline constexpr double kGoldenTolerance = 1e-9;
inline constexpr double kOracleTolerance = 1e-12;
inline constexpr double kCutTolerance = 1e-12;
inline constexpr double kMinConvergenceOrder = 1.9;

namespace detail {

inline std::string showComplex(Complex z) {
    return formatNumber(z.real(), 12) + (z.imag() < 0 ? "-" : "+") + formatNumber(std::abs(z.imag()), 12) + "i";
}

inline VerifyCheck checkGolden(const Scenario& s, const std::string& subject) {
    const auto report = fullReport(s.circuit);
    for (const auto& [site, want] : s.expected) {
        const auto& e = report.at(site);
        if (e.divergent || std::abs(e.observed.value - want) > kGoldenTolerance)
            return {"golden", subject, false,
                    "site " + site + ": expected " + showComplex(want) + ", got " +
                        (e.divergent ? std::string("divergent") : showComplex(e.observed.value))};
    }
    return {"golden", subject, true, std::to_string(s.expected.size()) + " values"};
}

inline VerifyCheck checkOracleEquivalence(const Circuit& c, const std::string& subject) {
    for (const auto& site : c.probeIds()) {
        const Alpha a = alphaAnalytic(c, site), w = weakValueOracle(c, site);
        if (a.divergent != w.divergent || (!a.divergent && std::abs(a.value - w.value) > kOracleTolerance))
            return {"oracle-equivalence", subject, false,
                    "site " + site + ": alpha " + showComplex(a.value) + " vs weak value " + showComplex(w.value)};
    }
    return {"oracle-equivalence", subject, true, {}};
}

inline VerifyCheck checkCuts(const Circuit& c, const std::string& subject) {
    for (const auto& cut : c.cuts()) {
        const Alpha sum = cutPresence(c, cut);
        if (sum.divergent || std::abs(sum.value - 1.0) > kCutTolerance) {
            std::string list;
            for (const auto& p : cut.paths) list += (list.empty() ? "" : ",") + p;
            return {"cut-sum", subject, false, "cut {" + list + "}: expected 1, got " + showComplex(sum.value)};
        }
    }
    return {"cut-sum", subject, true, std::to_string(c.cuts().size()) + " cuts"};
}

/// Central-difference error must fall like eps^2 (or sit at rounding level,
/// which happens when the site carries the whole postselected amplitude).
inline VerifyCheck checkConvergence(const Circuit& c, const std::string& subject) {
    const std::vector<double> eps{1e-2, 1e-3, 1e-4};
    for (const auto& site : c.probeIds()) {
        const Alpha exact = alphaAnalytic(c, site);
        if (exact.divergent) continue;
        std::vector<double> errs;
        for (double e : eps) errs.push_back(std::abs(alphaFiniteDifference(c, site, e).value - exact.value));
        if (errs.front() < 1e-11) continue;
        const double order = fittedOrder(eps, errs);
        if (!(order >= kMinConvergenceOrder))
            return {"fd-convergence", subject, false,
                    "site " + site + ": fitted order " + formatNumber(order, 6) + " < " +
                        formatNumber(kMinConvergenceOrder, 3)};
    }
    return {"fd-convergence", subject, true, {}};
}

}  // namespace detail

/// Runs every preset check, then the golden tables of `extra` scenarios.
inline std::vector<VerifyCheck> runVerify(const std::vector<Scenario>& extra = {}) {
    std::vector<VerifyCheck> out;
    for (const auto& name : listPresets()) {
        const PresetEntry p = buildPreset(name);
        const Circuit& c = p.scenario.circuit;
        out.push_back(detail::checkGolden(p.scenario, name));
        if (!c.hasDevices() && std::abs(detectAmplitude(c)) >= kDivergenceTolerance)
            out.push_back(detail::checkOracleEquivalence(c, name));
        if (!c.cuts().empty()) out.push_back(detail::checkCuts(c, name));
        out.push_back(detail::checkConvergence(c, name));
    }

    {
        const Scenario a = buildPreset("fig3a").scenario, b = buildPreset("fig3b").scenario;
        VerifyCheck chk{"oracle-equality", "fig3a/fig3b", true, {}};
        for (const auto& site : a.circuit.probeIds()) {
            const Alpha wa = weakValueOracle(a.circuit, site), wb = weakValueOracle(b.circuit, site);
            if (std::abs(wa.value - wb.value) > kOracleTolerance) {
                chk.pass = false;
                chk.detail = "site " + site + ": " + detail::showComplex(wa.value) + " vs " +
                             detail::showComplex(wb.value);
                break;
            }
        }
        out.push_back(chk);
    }

    for (const auto& name : {"fig2a_pi", "fig3b"}) {
        const Circuit& c = buildPreset(name).scenario.circuit;
        const auto with = propagate(c).get(c.detect());
        const auto without = propagate(c.without(ElementKind::PiDevice)).get(c.detect());
        double diff = 0.0;
        for (std::size_t i = 0; i < with.dim(); ++i) diff = std::max(diff, std::abs(with[i] - without[i]));
        out.push_back({"device-invisibility", name, diff <= 1e-15, "max difference " + formatNumber(diff, 6)});
    }

    {
        const Circuit& c = buildPreset("fig2a_two_probe").scenario.circuit;
        const TwoProbeState s = twoProbeAnalysis(c, "A", "B", 1e-3);
        const double ra = std::abs(s.c10 / s.c00 - 5e-4), rb = std::abs(s.c01 / s.c00 - 5e-4);
        const bool pass = ra <= 1e-9 && rb <= 1e-9 && std::abs(s.c11) <= 1e-15;
        out.push_back({"two-probe", "fig2a_two_probe", pass,
                       "c10/c00 " + detail::showComplex(s.c10 / s.c00) + ", c01/c00 " +
                           detail::showComplex(s.c01 / s.c00) + ", |c11| " + formatNumber(std::abs(s.c11), 6)});
    }

    {
        const Circuit& c = buildPreset("fig3b").scenario.circuit;
        const Alpha cond = conditionalAlpha(c, "E", "ME");
        std::vector<double> scaled;
        for (double e : {1e-3, 1e-4, 1e-5}) scaled.push_back(std::abs(alphaFiniteDifference(c, "E", e, "ME").value) * e);
        bool flat = scaled[0] > 0.0;
        for (double v : scaled) flat = flat && std::abs(v / scaled[0] - 1.0) <= 0.01;
        const PresenceRatio ratio = presenceRatio(c, "E", "ME");
        const bool pass = cond.divergent && flat && ratio.kind == PresenceRatio::Kind::ZeroByDivergence;
        out.push_back({"conditional-divergence", "fig3b E|ME", pass,
                       "|alpha eps| = " + formatNumber(scaled[0], 6) + ", " + formatNumber(scaled[1], 6) + ", " +
                           formatNumber(scaled[2], 6) + "; ratio " + formatNumber(ratio.value, 6)});
    }

    for (const auto& s : extra) out.push_back(detail::checkGolden(s, s.name));
    return out;
}

}  // namespace whichpath
