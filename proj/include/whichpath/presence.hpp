// presence.hpp
// Presence signal alpha of a pre- and postselected particle: the first-order
// coefficient with which a local disturbance on one path shows up in the
// output ancilla, N(Phi + alpha eps PhiPerp). Compared against the weak value
// of the path projector, which is what the local environment records.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "whichpath/circuit.hpp"
#include "whichpath/qstate.hpp"

namespace whichpath {

/// Postselected Phi amplitude below this (unit-normalized input) is Divergent.
inline constexpr double kDivergenceTolerance = 1e-10;
inline constexpr double kLyingTolerance = 1e-9;

/// A presence value, or a marker that the eps -> 0 limit does not exist.
/// When divergent, `value` holds the raw finite-eps estimate if one was
/// computed, NaN otherwise.
struct Alpha {
    Complex value{};
    bool divergent = false;

    static Alpha finite(Complex v) { return {v, false}; }
    static Alpha diverges(Complex raw = nanComplex()) { return {raw, true}; }

    static Complex nanComplex() {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        return {nan, nan};
    }
};

enum class Difference { Central, Forward };
enum class ReportMode { Analytic, FiniteDifference };

inline const char* toString(ReportMode m) { return m == ReportMode::Analytic ? "analytic" : "fd"; }

namespace detail {

inline Complex phiPerpComponent(const AncillaVector& v, std::size_t factor = 0) {
    return v[std::size_t{1} << factor];
}

}  // namespace detail

/// First-order alpha by linear response: the generator of the probe rotation
/// is applied once at the site and the resulting tangent state is carried to
/// the detect port alongside the undisturbed state.
inline Alpha alphaAnalytic(const Circuit& c, const std::string& site,
                           const std::optional<std::string>& condition = {}) {
    const SiteLocation& loc = c.probe(site);
    if (condition) c.marker(*condition);

    detail::LinearPass pass;
    if (condition) pass.condition = &*condition;

    const std::size_t factors = c.ancillas();
    JointState state = detail::initialState(c, factors);
    JointState tangent(factors);
    const auto& stages = c.stages();
    for (std::size_t k = 0; k < stages.size(); ++k) {
        if (k == loc.stage) {
            tangent.set(loc.path,
                        tangent.get(loc.path) + state.get(loc.path).applied(AncillaOp::rotationGenerator(), 0));
        }
        detail::applyStage(c, stages[k], state, pass);
        detail::applyStage(c, stages[k], tangent, pass);
    }
    const Complex denom = state.get(c.detect())[0];
    if (std::abs(denom) < kDivergenceTolerance) return Alpha::diverges();
    return Alpha::finite(detail::phiPerpComponent(tangent.get(c.detect())) / denom);
}

/// alpha from finite-strength probing: <PhiPerp|out(eps)> / (eps <Phi|out(eps)>),
/// central-differenced across +-eps by default. Divergence is decided by the
/// undisturbed postselection amplitude; a divergent result carries the bounded
/// estimate <PhiPerp|out> / (eps |out|), which grows like 1/eps.
inline Alpha alphaFiniteDifference(const Circuit& c, const std::string& site, double epsilon,
                                   const std::optional<std::string>& condition = {},
                                   Difference scheme = Difference::Central) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be > 0");
    c.probe(site);
    if (condition) c.marker(*condition);

    auto outAt = [&](double e) {
        return detail::propagateSigned(c, site, e, condition, 0, c.ancillas()).get(c.detect());
    };
    const AncillaVector plus = outAt(epsilon);
    if (std::abs(outAt(0.0)[0]) < kDivergenceTolerance) {
        const double n = std::sqrt(plus.norm2());
        return Alpha::diverges(n > 0.0 ? detail::phiPerpComponent(plus) / (epsilon * n) : Alpha::nanComplex());
    }
    const Complex ratioPlus = detail::phiPerpComponent(plus) / plus[0];
    if (scheme == Difference::Forward) return Alpha::finite(ratioPlus / epsilon);

    const AncillaVector minus = outAt(-epsilon);
    const Complex ratioMinus = detail::phiPerpComponent(minus) / minus[0];
    return Alpha::finite((ratioPlus - ratioMinus) / (2.0 * epsilon));
}

/// Weak value of the projector onto `path` just before stage `stage`:
/// forward amplitude times backward transfer over the postselection amplitude.
inline Alpha weakValueAt(const AmplitudeTable& fwd, const AmplitudeTable& back, const std::string& detect,
                         std::size_t stage, const std::string& path) {
    const Complex d = fwd.back().at(detect);
    if (std::abs(d) < kDivergenceTolerance) return Alpha::diverges();
    auto f = fwd.at(stage).find(path);
    auto b = back.at(stage).find(path);
    if (f == fwd.at(stage).end() || b == back.at(stage).end()) return Alpha::finite(0.0);
    return Alpha::finite(f->second * b->second / d);
}

/// Weak value of the probe site's path projector, from Phi-sector
/// interference only. Devices never enter since they act trivially on Phi.
inline Alpha weakValueOracle(const Circuit& c, const std::string& site,
                             const std::optional<std::string>& condition = {}) {
    const SiteLocation& loc = c.probe(site);
    const auto fwd = forwardAmplitudes(c, condition);
    const auto back = backwardTransfers(c, condition);
    return weakValueAt(fwd, back, c.detect(), loc.stage, loc.path);
}

/// Weak value of a whole path, evaluated where the path is first live.
/// Along a path without blocks or conditioning it does not depend on position.
inline Alpha pathWeakValue(const Circuit& c, const std::string& path) {
    c.pathIndex(path);
    const auto fwd = forwardAmplitudes(c);
    const auto back = backwardTransfers(c);
    for (std::size_t k = 0; k < fwd.size(); ++k) {
        if (fwd[k].count(path)) return weakValueAt(fwd, back, c.detect(), k, path);
    }
    return Alpha::finite(0.0);
}

/// Sum of path weak values over a cut. Equals 1 for every complete cut.
inline Alpha cutPresence(const Circuit& c, const Cut& cut) {
    Complex sum{};
    for (const auto& p : cut.paths) {
        const Alpha a = pathWeakValue(c, p);
        if (a.divergent) return a;
        sum += a.value;
    }
    return Alpha::finite(sum);
}

// ---------------------------------------------------------------------------
// Reports

struct PresenceEntry {
    std::string site;
    Alpha observed;
    Alpha oracle;
    double magnitude = 0.0;
    bool lying = false;
    bool divergent = false;
};

struct TraceRecord {
    std::string site;
    double mirrorKick = 0.0;
};

struct PresenceReport {
    std::vector<PresenceEntry> entries;
    double epsilonUsed = 0.0;
    ReportMode mode = ReportMode::Analytic;
    std::vector<TraceRecord> traces;  // filled when a momentum is given

    const PresenceEntry& at(const std::string& site) const {
        for (const auto& e : entries)
            if (e.site == site) return e;
        throw UnknownLabelError("no report entry for '" + site + "'");
    }
};

struct ReportOptions {
    ReportMode mode = ReportMode::Analytic;
    double epsilon = 1e-4;
    std::optional<double> momentum;
    std::optional<std::string> condition;
    std::optional<std::string> onlySite;
    /// Defaults to kLyingTolerance in analytic mode; finite differences widen
    /// it to cover their O(eps^2) truncation error.
    std::optional<double> lyingTolerance;
};

inline double lyingToleranceFor(const ReportOptions& opt) {
    if (opt.lyingTolerance) return *opt.lyingTolerance;
    if (opt.mode == ReportMode::Analytic) return kLyingTolerance;
    return std::max(kLyingTolerance, 1e3 * opt.epsilon * opt.epsilon);
}

inline bool isLying(const Alpha& observed, const Alpha& oracle, double tol) {
    if (observed.divergent != oracle.divergent) return true;
    if (observed.divergent) return false;
    return std::abs(observed.value - oracle.value) > tol;
}

/// Kick on a mirror of the path: Re(alpha) sqrt(2) p.
inline double mirrorKick(const Alpha& oracle, double momentum) {
    if (oracle.divergent) return std::numeric_limits<double>::quiet_NaN();
    return oracle.value.real() * std::sqrt(2.0) * momentum;
}

/// One entry per probe site, probes activated one at a time.
inline PresenceReport fullReport(const Circuit& c, const ReportOptions& opt = {}) {
    if (opt.mode == ReportMode::FiniteDifference && !(opt.epsilon > 0.0))
        throw std::invalid_argument("epsilon must be > 0 in finite-difference mode");
    if (opt.condition) c.marker(*opt.condition);
    if (opt.onlySite) c.probe(*opt.onlySite);

    PresenceReport report;
    report.mode = opt.mode;
    report.epsilonUsed = opt.mode == ReportMode::Analytic ? 0.0 : opt.epsilon;
    const double tol = lyingToleranceFor(opt);

    const auto fwd = forwardAmplitudes(c, opt.condition);
    const auto back = backwardTransfers(c, opt.condition);
    for (const auto& site : c.probeIds()) {
        if (opt.onlySite && *opt.onlySite != site) continue;
        PresenceEntry e;
        e.site = site;
        e.observed = opt.mode == ReportMode::Analytic ? alphaAnalytic(c, site, opt.condition)
                                                      : alphaFiniteDifference(c, site, opt.epsilon, opt.condition);
        const SiteLocation& loc = c.probe(site);
        e.oracle = weakValueAt(fwd, back, c.detect(), loc.stage, loc.path);
        e.divergent = e.observed.divergent;
        e.magnitude = std::abs(e.observed.value);
        e.lying = isLying(e.observed, e.oracle, tol);
        if (opt.momentum) report.traces.push_back({site, mirrorKick(e.oracle, *opt.momentum)});
        report.entries.push_back(std::move(e));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Conditioning on a nondemolition marker

inline Alpha conditionalAlpha(const Circuit& c, const std::string& site, const std::string& marker) {
    return alphaAnalytic(c, site, marker);
}

struct PresenceRatio {
    enum class Kind { Value, ZeroByDivergence, Undefined };
    Kind kind = Kind::Undefined;
    double value = std::numeric_limits<double>::quiet_NaN();
    std::string reason;
};

/// |observed alpha| over the signal of a particle localized on the site's
/// path. The localized reference is the alpha conditioned on `marker`, which
/// must sit on the same path as the probe.
inline PresenceRatio presenceRatio(const Circuit& c, const std::string& site, const std::string& marker) {
    const SiteLocation& p = c.probe(site);
    const SiteLocation& m = c.marker(marker);
    if (p.path != m.path)
        throw std::invalid_argument("marker '" + marker + "' is on path '" + m.path + "', probe '" + site +
                                    "' is on '" + p.path + "'");
    const Alpha observed = alphaAnalytic(c, site);
    const Alpha reference = alphaAnalytic(c, site, marker);
    if (observed.divergent && reference.divergent)
        return {PresenceRatio::Kind::Undefined, std::numeric_limits<double>::quiet_NaN(),
                "observed and localized signals both diverge"};
    if (observed.divergent)
        return {PresenceRatio::Kind::Undefined, std::numeric_limits<double>::quiet_NaN(), "observed signal diverges"};
    if (reference.divergent) return {PresenceRatio::Kind::ZeroByDivergence, 0.0, "localized signal diverges"};
    if (std::abs(reference.value) < kDivergenceTolerance)
        return {PresenceRatio::Kind::Undefined, std::numeric_limits<double>::quiet_NaN(), "localized signal is zero"};
    return {PresenceRatio::Kind::Value, std::abs(observed.value) / std::abs(reference.value), {}};
}

// ---------------------------------------------------------------------------
// Two probes with separate ancillas

/// Detect-port amplitudes over |Phi_A>|Phi_B>, |PhiPerp_A>|Phi_B>,
/// |Phi_A>|PhiPerp_B>, |PhiPerp_A>|PhiPerp_B> (unnormalized).
struct TwoProbeState {
    Complex c00, c10, c01, c11;

    /// B-ancilla left after projecting the A-ancilla onto PhiPerp_A: (Phi_B, PhiPerp_B).
    std::pair<Complex, Complex> bAfterAPerp() const { return {c10, c11}; }
};

inline TwoProbeState twoProbeAnalysis(const Circuit& c, const std::string& probeA, const std::string& probeB,
                                      double epsilon) {
    if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
    if (probeA == probeB) throw std::invalid_argument("two-probe analysis needs two distinct probe sites");
    c.probe(probeA);
    c.probe(probeB);
    const std::size_t factors = std::max<std::size_t>(2, c.ancillas());
    const AncillaOp rot = AncillaOp::rotation(detail::probeAngle(epsilon));
    detail::LinearPass pass;
    pass.probes.push_back({probeA, rot, 0});
    pass.probes.push_back({probeB, rot, 1});
    JointState s = detail::initialState(c, factors);
    for (const auto& st : c.stages()) detail::applyStage(c, st, s, pass);
    const AncillaVector out = s.get(c.detect());
    return {out[0], out[1], out[2], out[3]};
}

// ---------------------------------------------------------------------------
// Secondary presence: effect of a block on first-order signals elsewhere

struct BlockEffect {
    Alpha before;
    Alpha after;
};

/// alpha at each probe without any block on `blockPath` and with one placed
/// at the start of that path.
inline std::map<std::string, BlockEffect> blockEffectProbe(const Circuit& c, const std::string& blockPath,
                                                           const std::vector<std::string>& probes) {
    c.pathIndex(blockPath);
    auto open = c.paths();
    auto& seg = open[c.pathIndex(blockPath)];
    std::erase_if(seg.elements, [](const Element& e) { return e.kind == ElementKind::Block; });
    const Circuit unblocked = c.withPaths(open);
    seg.elements.insert(seg.elements.begin(), Element::block());
    const Circuit blocked = c.withPaths(open);

    std::map<std::string, BlockEffect> out;
    for (const auto& p : probes) out[p] = {alphaAnalytic(unblocked, p), alphaAnalytic(blocked, p)};
    return out;
}

// ---------------------------------------------------------------------------
// Convergence of the finite-difference estimate

struct SweepRow {
    double epsilon = 0.0;
    Alpha alpha;
};

/// Finite-difference alpha at each strength, largest epsilon first.
inline std::vector<SweepRow> sweepEpsilon(const Circuit& c, const std::string& site, std::vector<double> epsilons,
                                          const std::optional<std::string>& condition = {}) {
    std::sort(epsilons.begin(), epsilons.end(), std::greater<>());
    epsilons.erase(std::unique(epsilons.begin(), epsilons.end()), epsilons.end());
    std::vector<SweepRow> rows;
    for (double e : epsilons) rows.push_back({e, alphaFiniteDifference(c, site, e, condition)});
    return rows;
}

/// Least-squares slope of log(error) against log(epsilon).
inline double fittedOrder(const std::vector<double>& epsilons, const std::vector<double>& errors) {
    if (epsilons.size() != errors.size() || epsilons.size() < 2)
        throw std::invalid_argument("order fit needs at least two matching points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(epsilons.size());
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        const double x = std::log(epsilons[i]), y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace whichpath
