// circuit.hpp
// Interferometer circuits: labeled path segments joined by beam splitters,
// with per-path elements (phase shifters, probe sites, pi devices, blocks,
// nondemolition markers). Provides propagation of joint path-ancilla states
// and the scalar (Phi-sector) forward/backward amplitude tables.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "whichpath/qstate.hpp"

namespace whichpath {

class CircuitError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr double kUnitarityTolerance = 1e-12;

/// Reflection probability of a beam splitter. Keeps the exact fraction when
/// one was given so that scenario text round-trips.
struct Ratio {
    double probability = 0.5;
    std::optional<std::pair<std::int64_t, std::int64_t>> fraction;

    static Ratio of(std::int64_t num, std::int64_t den) {
        if (den <= 0) throw CircuitError("ratio denominator must be positive");
        return {static_cast<double>(num) / static_cast<double>(den), std::pair{num, den}};
    }
    static Ratio decimal(double p) { return {p, std::nullopt}; }

    double reflection() const { return std::sqrt(probability); }
    double transmission() const { return std::sqrt(1.0 - probability); }

    bool operator==(const Ratio&) const = default;
};

/// Phase angle in radians, optionally remembered as a rational multiple of pi.
struct Angle {
    double radians = 0.0;
    std::optional<std::pair<std::int64_t, std::int64_t>> piFraction;

    static Angle rad(double r) { return {r, std::nullopt}; }
    static Angle piTimes(std::int64_t num, std::int64_t den = 1) {
        if (den <= 0) throw CircuitError("pi fraction denominator must be positive");
        return {std::numbers::pi * static_cast<double>(num) / static_cast<double>(den), std::pair{num, den}};
    }

    bool operator==(const Angle&) const = default;
};

enum class ElementKind { Mirror, Phase, Probe, PiDevice, Block, Marker };

struct Element {
    ElementKind kind = ElementKind::Mirror;
    Angle phase;     // Phase only
    std::string id;  // Probe and Marker only

    static Element mirror() { return {ElementKind::Mirror, {}, {}}; }
    static Element phaseShift(Angle a) { return {ElementKind::Phase, a, {}}; }
    static Element probe(std::string id) { return {ElementKind::Probe, {}, std::move(id)}; }
    static Element piDevice() { return {ElementKind::PiDevice, {}, {}}; }
    static Element block() { return {ElementKind::Block, {}, {}}; }
    static Element marker(std::string id) { return {ElementKind::Marker, {}, std::move(id)}; }

    bool operator==(const Element&) const = default;
};

struct PathSegment {
    std::string label;
    std::vector<Element> elements;  // propagation order

    bool operator==(const PathSegment&) const = default;
};

/// Two-port beam splitter. With a single input the second port is dark.
/// Convention (real, symmetric): u' = r u + t v, v' = t u - r v.
struct Coupler {
    std::string name;
    std::vector<std::string> inputs;  // 1 or 2 labels: u [, v]
    std::pair<std::string, std::string> outputs;  // u', v'
    Ratio ratio;

    bool operator==(const Coupler&) const = default;
};

struct Cut {
    std::vector<std::string> paths;
    bool operator==(const Cut&) const = default;
};

enum class StageKind { Element, Coupler };

struct Stage {
    StageKind kind = StageKind::Element;
    std::size_t path = 0;     // Element: index into paths()
    std::size_t element = 0;  // Element: index into that path's elements
    std::size_t coupler = 0;  // Coupler: index into couplers()
};

struct SiteLocation {
    std::size_t stage = 0;
    std::string path;
};

/// (u', v') from (u, v); requires t^2 + r^2 = 1.
inline std::pair<AncillaVector, AncillaVector> beamSplit(const AncillaVector& u, const AncillaVector& v, double t,
                                                         double r) {
    if (std::abs(t * t + r * r - 1.0) > kUnitarityTolerance) {
        throw CircuitError("beam splitter is not unitary: t^2 + r^2 = " + std::to_string(t * t + r * r));
    }
    return {Complex{r} * u + Complex{t} * v, Complex{t} * u + Complex{-r} * v};
}

class Circuit {
public:
    Circuit(std::size_t ancillas, std::vector<PathSegment> paths, std::vector<Coupler> couplers, std::string detect,
            std::vector<Cut> cuts = {})
        : ancillas_(ancillas),
          paths_(std::move(paths)),
          couplers_(std::move(couplers)),
          detect_(std::move(detect)),
          cuts_(std::move(cuts)) {
        compile();
    }

    std::size_t ancillas() const { return ancillas_; }
    const std::vector<PathSegment>& paths() const { return paths_; }
    const std::vector<Coupler>& couplers() const { return couplers_; }
    const std::string& detect() const { return detect_; }
    const std::string& source() const { return source_; }
    const std::vector<Cut>& cuts() const { return cuts_; }
    const std::vector<Stage>& stages() const { return stages_; }

    /// Paths live at the boundary just before stage k (k == stages().size() is the output cut).
    const std::vector<std::string>& liveAt(std::size_t k) const { return live_.at(k); }

    /// Terminal paths in the order they were produced.
    const std::vector<std::string>& outputs() const { return live_.back(); }

    const PathSegment& path(const std::string& label) const { return paths_.at(pathIndex(label)); }

    std::size_t pathIndex(const std::string& label) const {
        auto it = pathIndex_.find(label);
        if (it == pathIndex_.end()) throw UnknownLabelError("unknown path '" + label + "'");
        return it->second;
    }

    bool hasPath(const std::string& label) const { return pathIndex_.count(label) != 0; }
    bool hasProbe(const std::string& id) const { return probes_.count(id) != 0; }
    bool hasMarker(const std::string& id) const { return markers_.count(id) != 0; }

    const SiteLocation& probe(const std::string& id) const {
        auto it = probes_.find(id);
        if (it == probes_.end()) throw UnknownLabelError("unknown probe site '" + id + "'");
        return it->second;
    }

    const SiteLocation& marker(const std::string& id) const {
        auto it = markers_.find(id);
        if (it == markers_.end()) throw UnknownLabelError("unknown marker '" + id + "'");
        return it->second;
    }

    /// Probe ids in declaration order.
    std::vector<std::string> probeIds() const { return idsOf(ElementKind::Probe); }
    std::vector<std::string> markerIds() const { return idsOf(ElementKind::Marker); }

    bool hasDevices() const { return anyElement(ElementKind::PiDevice); }
    bool hasBlocks() const { return anyElement(ElementKind::Block); }

    Circuit withPaths(std::vector<PathSegment> paths) const {
        return Circuit(ancillas_, std::move(paths), couplers_, detect_, cuts_);
    }

    Circuit withAncillas(std::size_t ancillas) const {
        return Circuit(ancillas, paths_, couplers_, detect_, cuts_);
    }

    /// Copy with every element of `kind` removed from every path.
    Circuit without(ElementKind kind) const {
        auto paths = paths_;
        for (auto& p : paths) std::erase_if(p.elements, [&](const Element& e) { return e.kind == kind; });
        return withPaths(std::move(paths));
    }

    /// Structural identity (the compiled schedule follows from it).
    bool operator==(const Circuit& o) const {
        return ancillas_ == o.ancillas_ && paths_ == o.paths_ && couplers_ == o.couplers_ && detect_ == o.detect_ &&
               cuts_ == o.cuts_;
    }

private:
    std::vector<std::string> idsOf(ElementKind kind) const {
        std::vector<std::string> ids;
        for (const auto& p : paths_)
            for (const auto& e : p.elements)
                if (e.kind == kind) ids.push_back(e.id);
        return ids;
    }

    bool anyElement(ElementKind kind) const {
        for (const auto& p : paths_)
            for (const auto& e : p.elements)
                if (e.kind == kind) return true;
        return false;
    }

    void compile();
    void emitPath(std::size_t idx, std::vector<std::string>& live);
    void validateCut(const Cut& cut) const;

    std::size_t ancillas_;
    std::vector<PathSegment> paths_;
    std::vector<Coupler> couplers_;
    std::string detect_;
    std::vector<Cut> cuts_;

    std::string source_;
    std::vector<Stage> stages_;
    std::vector<std::vector<std::string>> live_;
    std::map<std::string, std::size_t> pathIndex_;
    std::map<std::string, SiteLocation> probes_;
    std::map<std::string, SiteLocation> markers_;
};

inline void Circuit::emitPath(std::size_t idx, std::vector<std::string>& live) {
    const auto& seg = paths_[idx];
    for (std::size_t e = 0; e < seg.elements.size(); ++e) {
        const auto& el = seg.elements[e];
        const std::size_t stage = stages_.size();
        if (el.kind == ElementKind::Probe) probes_[el.id] = {stage, seg.label};
        if (el.kind == ElementKind::Marker) markers_[el.id] = {stage, seg.label};
        live_.push_back(live);
        stages_.push_back({StageKind::Element, idx, e, 0});
    }
}

inline void Circuit::compile() {
    if (ancillas_ < 1 || ancillas_ > 16) throw CircuitError("ancilla count must be in [1, 16]");
    if (paths_.empty()) throw CircuitError("circuit has no paths");

    std::set<std::string> probeIds, markerIds;
    for (std::size_t i = 0; i < paths_.size(); ++i) {
        const auto& p = paths_[i];
        if (p.label.empty()) throw CircuitError("empty path label");
        if (!pathIndex_.emplace(p.label, i).second) throw CircuitError("duplicate path '" + p.label + "'");
        for (const auto& e : p.elements) {
            if (e.kind == ElementKind::Probe && !probeIds.insert(e.id).second)
                throw CircuitError("duplicate probe site '" + e.id + "'");
            if (e.kind == ElementKind::Marker && !markerIds.insert(e.id).second)
                throw CircuitError("duplicate marker '" + e.id + "'");
            if ((e.kind == ElementKind::Probe || e.kind == ElementKind::Marker) && e.id.empty())
                throw CircuitError("probe/marker on '" + p.label + "' has an empty id");
        }
    }

    std::set<std::string> couplerNames, produced, consumed;
    for (const auto& c : couplers_) {
        if (!couplerNames.insert(c.name).second) throw CircuitError("duplicate beam splitter '" + c.name + "'");
        if (c.inputs.empty() || c.inputs.size() > 2)
            throw CircuitError("beam splitter '" + c.name + "' needs one or two inputs");
        if (!(c.ratio.probability >= 0.0 && c.ratio.probability <= 1.0))
            throw CircuitError("beam splitter '" + c.name + "' ratio outside [0,1]");
        std::vector<std::string> labels = c.inputs;
        labels.push_back(c.outputs.first);
        labels.push_back(c.outputs.second);
        for (const auto& l : labels) pathIndex(l);
        std::set<std::string> distinct(labels.begin(), labels.end());
        if (distinct.size() != labels.size())
            throw CircuitError("beam splitter '" + c.name + "' repeats a path label");
        for (const auto& in : c.inputs)
            if (!consumed.insert(in).second) throw CircuitError("path '" + in + "' consumed twice");
        for (const auto& out : {c.outputs.first, c.outputs.second})
            if (!produced.insert(out).second) throw CircuitError("path '" + out + "' produced twice");
    }

    std::vector<std::string> sources;
    for (const auto& p : paths_)
        if (!produced.count(p.label)) sources.push_back(p.label);
    if (sources.size() != 1) {
        std::string list;
        for (const auto& s : sources) list += (list.empty() ? "" : ", ") + s;
        throw CircuitError(sources.empty() ? "circuit has no source path"
                                           : "circuit has more than one source path: " + list);
    }
    source_ = sources.front();

    std::vector<std::string> live{source_};
    emitPath(pathIndex(source_), live);
    for (std::size_t ci = 0; ci < couplers_.size(); ++ci) {
        const auto& c = couplers_[ci];
        for (const auto& in : c.inputs) {
            if (std::find(live.begin(), live.end(), in) == live.end())
                throw CircuitError("beam splitter '" + c.name + "' consumes '" + in + "' before it is produced");
        }
        live_.push_back(live);
        stages_.push_back({StageKind::Coupler, 0, 0, ci});
        std::erase_if(live, [&](const std::string& l) {
            return std::find(c.inputs.begin(), c.inputs.end(), l) != c.inputs.end();
        });
        live.push_back(c.outputs.first);
        live.push_back(c.outputs.second);
        emitPath(pathIndex(c.outputs.first), live);
        emitPath(pathIndex(c.outputs.second), live);
    }
    live_.push_back(live);

    if (!pathIndex_.count(detect_)) throw CircuitError("detect port '" + detect_ + "' is not a declared path");
    if (consumed.count(detect_)) throw CircuitError("detect port '" + detect_ + "' feeds a beam splitter");

    for (const auto& cut : cuts_) validateCut(cut);
}

/// A cut is complete when every source-to-output route crosses it exactly once.
inline void Circuit::validateCut(const Cut& cut) const {
    std::set<std::string> members;
    for (const auto& l : cut.paths) {
        pathIndex(l);
        if (!members.insert(l).second) throw CircuitError("cut lists '" + l + "' twice");
    }
    // Reachable crossing counts per path, saturated at 2.
    std::map<std::string, std::set<int>> hits;
    auto bump = [&](std::set<int> in, const std::string& label) {
        std::set<int> out;
        for (int h : in) out.insert(std::min(2, h + (members.count(label) ? 1 : 0)));
        hits[label] = out;
    };
    bump({0}, source_);
    for (const auto& c : couplers_) {
        std::set<int> in;
        for (const auto& l : c.inputs) in.insert(hits[l].begin(), hits[l].end());
        bump(in, c.outputs.first);
        bump(in, c.outputs.second);
    }
    for (const auto& out : outputs()) {
        if (hits[out] != std::set<int>{1}) {
            std::string list;
            for (const auto& l : cut.paths) list += (list.empty() ? "" : ",") + l;
            throw CircuitError("cut {" + list + "} is not complete at output '" + out + "'");
        }
    }
}

// ---------------------------------------------------------------------------
// Joint-state propagation

struct PropagateOptions {
    std::optional<std::string> activeProbe;
    double epsilon = 0.0;
    std::optional<std::string> conditionOnMarker;
    std::size_t probeFactor = 0;
};

namespace detail {

/// Per-run settings for a linear pass over the stage list.
struct ProbeAction {
    std::string id;
    AncillaOp op;
    std::size_t factor = 0;
};

struct LinearPass {
    std::vector<ProbeAction> probes;
    const std::string* condition = nullptr;
};

inline void applyStage(const Circuit& c, const Stage& st, JointState& s, const LinearPass& pass) {
    if (st.kind == StageKind::Coupler) {
        const auto& cp = c.couplers()[st.coupler];
        AncillaVector u = s.get(cp.inputs[0]);
        AncillaVector v = cp.inputs.size() > 1 ? s.get(cp.inputs[1]) : AncillaVector(s.factors());
        auto [uo, vo] = beamSplit(u, v, cp.ratio.transmission(), cp.ratio.reflection());
        for (const auto& in : cp.inputs) s.erase(in);
        s.set(cp.outputs.first, std::move(uo));
        s.set(cp.outputs.second, std::move(vo));
        return;
    }
    const auto& seg = c.paths()[st.path];
    const auto& el = seg.elements[st.element];
    const std::string& label = seg.label;
    switch (el.kind) {
        case ElementKind::Mirror:
            break;
        case ElementKind::Phase:
            s.set(label, std::polar(1.0, el.phase.radians) * s.get(label));
            break;
        case ElementKind::Probe:
            for (const auto& pa : pass.probes)
                if (pa.id == el.id) s.set(label, s.get(label).applied(pa.op, pa.factor));
            break;
        case ElementKind::PiDevice: {
            AncillaVector v = s.get(label);
            for (std::size_t f = 0; f < v.factors(); ++f) v = v.applied(AncillaOp::piFlip(), f);
            s.set(label, std::move(v));
            break;
        }
        case ElementKind::Block:
            s.set(label, AncillaVector(s.factors()));
            break;
        case ElementKind::Marker:
            if (pass.condition && *pass.condition == el.id) {
                JointState kept(s.factors());
                kept.set(label, s.get(label));
                for (const auto& [other, v] : s.entries())
                    if (other != label) kept.set(other, AncillaVector(s.factors()));
                s = std::move(kept);
            }
            break;
    }
}

inline JointState initialState(const Circuit& c, std::size_t factors) {
    JointState s(factors);
    s.set(c.source(), AncillaVector::phi(factors));
    return s;
}

inline void checkIds(const Circuit& c, const std::optional<std::string>& probe,
                     const std::optional<std::string>& marker) {
    if (probe) c.probe(*probe);
    if (marker) c.marker(*marker);
}

/// Probe rotation angle for strength epsilon. atan keeps the injected
/// PhiPerp/Phi ratio equal to epsilon, so the rotation matches the
/// renormalized disturbance N(Phi + eps PhiPerp) exactly.
inline double probeAngle(double epsilon) { return std::atan(epsilon); }

/// Propagation with a signed probe strength (used for central differences).
inline JointState propagateSigned(const Circuit& c, const std::optional<std::string>& probe, double epsilon,
                                  const std::optional<std::string>& condition, std::size_t factor,
                                  std::size_t factors) {
    LinearPass pass;
    if (probe) pass.probes.push_back({*probe, AncillaOp::rotation(probeAngle(epsilon)), factor});
    if (condition) pass.condition = &*condition;
    JointState s = initialState(c, factors);
    for (const auto& st : c.stages()) applyStage(c, st, s, pass);
    return s;
}

}  // namespace detail

/// Output-cut joint state. Probe sites other than the active one act as identity.
inline JointState propagate(const Circuit& c, const PropagateOptions& opt = {}) {
    if (!(opt.epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
    detail::checkIds(c, opt.activeProbe, opt.conditionOnMarker);
    return detail::propagateSigned(c, opt.activeProbe, opt.epsilon, opt.conditionOnMarker, opt.probeFactor,
                                   c.ancillas());
}

/// Joint state at every stage boundary (index k is just before stage k).
inline std::vector<JointState> propagateTrace(const Circuit& c, const PropagateOptions& opt = {}) {
    if (!(opt.epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
    detail::checkIds(c, opt.activeProbe, opt.conditionOnMarker);
    detail::LinearPass pass;
    if (opt.activeProbe)
        pass.probes.push_back({*opt.activeProbe, AncillaOp::rotation(detail::probeAngle(opt.epsilon)), opt.probeFactor});
    if (opt.conditionOnMarker) pass.condition = &*opt.conditionOnMarker;
    std::vector<JointState> trace;
    JointState s = detail::initialState(c, c.ancillas());
    for (const auto& st : c.stages()) {
        trace.push_back(s);
        detail::applyStage(c, st, s, pass);
    }
    trace.push_back(std::move(s));
    return trace;
}

// ---------------------------------------------------------------------------
// Scalar Phi-sector amplitudes. Probes, devices and mirrors act trivially on
// Phi, so these are pure path-interference quantities.

using AmplitudeTable = std::vector<std::map<std::string, Complex>>;

/// Undisturbed amplitude on every live path at every stage boundary.
inline AmplitudeTable forwardAmplitudes(const Circuit& c, const std::optional<std::string>& condition = {}) {
    if (condition) c.marker(*condition);
    AmplitudeTable table;
    std::map<std::string, Complex> amp{{c.source(), Complex{1.0}}};
    for (const auto& st : c.stages()) {
        table.push_back(amp);
        if (st.kind == StageKind::Coupler) {
            const auto& cp = c.couplers()[st.coupler];
            const double r = cp.ratio.reflection(), t = cp.ratio.transmission();
            const Complex u = amp.at(cp.inputs[0]);
            const Complex v = cp.inputs.size() > 1 ? amp.at(cp.inputs[1]) : Complex{};
            for (const auto& in : cp.inputs) amp.erase(in);
            amp[cp.outputs.first] = r * u + t * v;
            amp[cp.outputs.second] = t * u - r * v;
            continue;
        }
        const auto& seg = c.paths()[st.path];
        const auto& el = seg.elements[st.element];
        if (el.kind == ElementKind::Phase) amp[seg.label] *= std::polar(1.0, el.phase.radians);
        if (el.kind == ElementKind::Block) amp[seg.label] = 0.0;
        if (el.kind == ElementKind::Marker && condition && *condition == el.id)
            for (auto& [label, a] : amp)
                if (label != seg.label) a = 0.0;
    }
    table.push_back(amp);
    return table;
}

/// Transfer amplitude from every live path at every stage boundary to the
/// detect port, computed by a single backward (adjoint) sweep.
inline AmplitudeTable backwardTransfers(const Circuit& c, const std::optional<std::string>& condition = {}) {
    if (condition) c.marker(*condition);
    const auto& stages = c.stages();
    AmplitudeTable table(stages.size() + 1);
    std::map<std::string, Complex> b;
    for (const auto& l : c.outputs()) b[l] = (l == c.detect()) ? Complex{1.0} : Complex{};
    table[stages.size()] = b;
    for (std::size_t k = stages.size(); k-- > 0;) {
        const auto& st = stages[k];
        if (st.kind == StageKind::Coupler) {
            const auto& cp = c.couplers()[st.coupler];
            const double r = cp.ratio.reflection(), t = cp.ratio.transmission();
            const Complex bu = b.at(cp.outputs.first), bv = b.at(cp.outputs.second);
            b.erase(cp.outputs.first);
            b.erase(cp.outputs.second);
            b[cp.inputs[0]] = r * bu + t * bv;
            if (cp.inputs.size() > 1) b[cp.inputs[1]] = t * bu - r * bv;
        } else {
            const auto& seg = c.paths()[st.path];
            const auto& el = seg.elements[st.element];
            if (el.kind == ElementKind::Phase) b[seg.label] *= std::polar(1.0, el.phase.radians);
            if (el.kind == ElementKind::Block) b[seg.label] = 0.0;
            if (el.kind == ElementKind::Marker && condition && *condition == el.id)
                for (auto& [label, a] : b)
                    if (label != seg.label) a = 0.0;
        }
        table[k] = b;
    }
    return table;
}

/// Amplitude with which a unit excitation on `path` just before stage `stage`
/// reaches the detect port. Zero when the path is not live there.
inline Complex backwardTransfer(const Circuit& c, std::size_t stage, const std::string& path,
                                const std::optional<std::string>& condition = {}) {
    const auto table = backwardTransfers(c, condition);
    const auto& row = table.at(stage);
    auto it = row.find(path);
    return it == row.end() ? Complex{} : it->second;
}

/// Undisturbed postselection amplitude at the detect port.
inline Complex detectAmplitude(const Circuit& c, const std::optional<std::string>& condition = {}) {
    return forwardAmplitudes(c, condition).back().at(c.detect());
}

}  // namespace whichpath
