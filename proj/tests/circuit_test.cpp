#include "whichpath/circuit.hpp"

#include <random>

#include "dense_oracle.hpp"
#include "gtest/gtest.h"
#include "random_circuits.hpp"
#include "whichpath/presets.hpp"

using namespace whichpath;
using whichpath::testing::DenseOracle;

namespace {

Circuit balancedMzi(std::vector<Element> a = {Element::probe("A")}, std::vector<Element> b = {Element::probe("B")}) {
    return Circuit(1,
                   {{"IN", {Element::probe("IN")}}, {"A", a}, {"B", b}, {"OUT", {Element::probe("OUT")}}, {"DARK", {}}},
                   {{"BS1", {"IN"}, {"A", "B"}, Ratio::of(1, 2)}, {"BS2", {"A", "B"}, {"OUT", "DARK"}, Ratio::of(1, 2)}},
                   "OUT", {{{"A", "B"}}, {{"OUT", "DARK"}}});
}

std::size_t stageOfCoupler(const Circuit& c, const std::string& name) {
    for (std::size_t k = 0; k < c.stages().size(); ++k) {
        const auto& st = c.stages()[k];
        if (st.kind == StageKind::Coupler && c.couplers()[st.coupler].name == name) return k;
    }
    throw std::logic_error("no coupler " + name);
}

}  // namespace

TEST(BeamSplit, conventions) {
    const auto phi = AncillaVector::phi();
    const auto zero = AncillaVector(1);
    const auto other = AncillaVector::phiPerp();

    auto [u1, v1] = beamSplit(phi, other, 1.0, 0.0);
    EXPECT_EQ(u1, other);
    EXPECT_EQ(v1, phi);

    const double h = 1 / std::sqrt(2.0);
    auto [u2, v2] = beamSplit(phi, zero, h, h);
    EXPECT_NEAR(u2[0].real(), h, 1e-15);
    EXPECT_NEAR(v2[0].real(), h, 1e-15);

    const Ratio r90 = Ratio::of(9, 10);
    auto [u3, v3] = beamSplit(phi, zero, r90.transmission(), r90.reflection());
    EXPECT_NEAR(u3[0].real(), std::sqrt(0.9), 1e-15);
    EXPECT_NEAR(v3[0].real(), std::sqrt(0.1), 1e-15);

    EXPECT_THROW(beamSplit(phi, zero, 0.8, 0.8), CircuitError);
}

TEST(Circuit, ratio_amplitudes_are_unitary) {
    for (const auto& r : {Ratio::of(1, 3), Ratio::of(9, 10), Ratio::decimal(0.123456789), Ratio::of(0, 1)}) {
        EXPECT_NEAR(r.reflection() * r.reflection() + r.transmission() * r.transmission(), 1.0, 1e-12);
    }
}

TEST(Propagate, balanced_mzi_undisturbed_reaches_detector) {
    const Circuit c = balancedMzi();
    const auto out = propagate(c);
    EXPECT_NEAR(out.at("OUT").norm2(), 1.0, 1e-15);
    EXPECT_NEAR(out.at("OUT")[0].real(), 1.0, 1e-15);
    EXPECT_NEAR(out.at("DARK").norm2(), 0.0, 1e-30);
}

TEST(Propagate, balanced_mzi_probe_a_first_order) {
    const Circuit c = balancedMzi();
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const auto v = propagate(c, {"A", eps, std::nullopt}).at("OUT");
        EXPECT_NEAR((v[1] / v[0]).real(), eps / 2, eps * eps);
    }
}

TEST(Propagate, nested_block_in_e_removes_first_order_signal_of_a) {
    const Circuit c = buildPreset("fig3a").scenario.circuit;
    auto paths = c.paths();
    for (auto& p : paths)
        if (p.label == "E") p.elements.insert(p.elements.begin(), Element::block());
    const Circuit blocked = c.withPaths(paths);
    // brute-force reference: dense propagation sees no PhiPerp at the detector
    const DenseOracle oracle(blocked);
    const auto dense = oracle.output("A", 1e-3);
    EXPECT_EQ(std::abs(dense[2 * blocked.pathIndex("OUT") + 1]), 0.0);
    const auto out = propagate(blocked, {"A", 1e-3, std::nullopt}).at("OUT");
    EXPECT_EQ(std::abs(out[1]), 0.0);
    EXPECT_GT(std::abs(out[0]), 0.1);
}

TEST(Propagate, errors) {
    const Circuit c = balancedMzi();
    EXPECT_THROW(propagate(c, {"A", -1e-3, std::nullopt}), std::invalid_argument);
    EXPECT_THROW(propagate(c, {"Z", 1e-3, std::nullopt}), UnknownLabelError);
    EXPECT_THROW(propagate(c, {std::nullopt, 0.0, "nope"}), UnknownLabelError);
}

TEST(ForwardAmplitudes, examples) {
    const Circuit mzi = balancedMzi();
    const auto fwd = forwardAmplitudes(mzi);
    const std::size_t afterSplit = stageOfCoupler(mzi, "BS1") + 1;
    EXPECT_NEAR(fwd[afterSplit].at("A").real(), 1 / std::sqrt(2.0), 1e-15);

    const Circuit b90 = buildPreset("fig2b").scenario.circuit;
    const auto f90 = forwardAmplitudes(b90);
    EXPECT_NEAR(f90[stageOfCoupler(b90, "BS1") + 1].at("A").real(), std::sqrt(0.9), 1e-15);

    // Inner interferometer closes destructively toward F. Reference value from
    // the dense oracle, then the scalar table must agree.
    const Circuit nested = buildPreset("fig3a").scenario.circuit;
    const std::size_t beforeFinal = stageOfCoupler(nested, "BS4");
    const DenseOracle dense(nested);
    EXPECT_EQ(std::abs(dense.phiAmplitudeAfterStage(beforeFinal, "F")), 0.0);
    EXPECT_EQ(std::abs(forwardAmplitudes(nested)[beforeFinal].at("F")), 0.0);
}

TEST(BackwardTransfer, examples) {
    const Circuit one = buildPreset("fig1a").scenario.circuit;
    for (std::size_t k = 0; k <= one.stages().size(); ++k) EXPECT_EQ(backwardTransfer(one, k, "IN"), Complex(1.0));

    const Circuit bs = buildPreset("fig1b").scenario.circuit;
    EXPECT_EQ(backwardTransfer(bs, bs.stages().size(), "REF"), Complex(0.0));
    EXPECT_EQ(backwardTransfer(bs, bs.probe("REF").stage, "REF"), Complex(0.0));

    // Balanced MZI arm A: alpha_A * D / forward(A), with alpha_A from the
    // dense brute-force disturbance.
    const Circuit mzi = balancedMzi();
    const DenseOracle dense(mzi);
    const std::size_t k = mzi.probe("A").stage;
    const Complex expected = dense.alpha("A") * dense.detectPhi("", 0.0) / dense.phiAmplitudeAfterStage(k, "A");
    EXPECT_NEAR(std::abs(backwardTransfer(mzi, k, "A") - expected), 0.0, 1e-12);
    EXPECT_NEAR(expected.real(), 1 / std::sqrt(2.0), 1e-12);
}

TEST(Circuit, validation_errors) {
    using P = PathSegment;
    // two sources
    EXPECT_THROW(Circuit(1, {P{"IN", {}}, P{"X", {}}}, {}, "IN"), CircuitError);
    // consumed before produced
    EXPECT_THROW(Circuit(1, {P{"IN", {}}, P{"A", {}}, P{"B", {}}, P{"C", {}}, P{"D", {}}},
                         {{"BS2", {"A"}, {"C", "D"}, Ratio::of(1, 2)}, {"BS1", {"IN"}, {"A", "B"}, Ratio::of(1, 2)}},
                         "C"),
                 CircuitError);
    // produced twice
    EXPECT_THROW(Circuit(1, {P{"IN", {}}, P{"A", {}}, P{"B", {}}, P{"C", {}}},
                         {{"BS1", {"IN"}, {"A", "B"}, Ratio::of(1, 2)}, {"BS2", {"A"}, {"B", "C"}, Ratio::of(1, 2)}},
                         "C"),
                 CircuitError);
    // duplicate probe ids
    EXPECT_THROW(balancedMzi({Element::probe("X")}, {Element::probe("X")}), CircuitError);
    // detect port feeds a splitter
    EXPECT_THROW(Circuit(1, {P{"IN", {}}, P{"A", {}}, P{"B", {}}}, {{"BS", {"IN"}, {"A", "B"}, Ratio::of(1, 2)}}, "IN"),
                 CircuitError);
    // ratio outside [0, 1]
    EXPECT_THROW(Circuit(1, {P{"IN", {}}, P{"A", {}}, P{"B", {}}}, {{"BS", {"IN"}, {"A", "B"}, Ratio::decimal(1.5)}},
                         "A"),
                 CircuitError);
    // incomplete cut
    EXPECT_THROW(Circuit(1, {P{"IN", {}}, P{"A", {}}, P{"B", {}}}, {{"BS", {"IN"}, {"A", "B"}, Ratio::of(1, 2)}}, "A",
                         {{{"A"}}}),
                 CircuitError);
    // a path crossed twice by one cut
    EXPECT_THROW(Circuit(1, {P{"IN", {}}, P{"A", {}}, P{"B", {}}}, {{"BS", {"IN"}, {"A", "B"}, Ratio::of(1, 2)}}, "A",
                         {{{"IN", "A", "B"}}}),
                 CircuitError);
}

TEST(Circuit, pi_device_twice_is_identity) {
    const Circuit base = balancedMzi({Element::probe("A")}, {Element::probe("B")});
    const Circuit twice = balancedMzi({Element::probe("A")},
                                      {Element::probe("B"), Element::piDevice(), Element::piDevice()});
    for (double eps : {0.0, 1e-3, 0.2}) {
        for (const auto& site : {"IN", "A", "B", "OUT"}) {
            const auto a = propagate(base, {site, eps, std::nullopt}).at("OUT");
            const auto b = propagate(twice, {site, eps, std::nullopt}).at("OUT");
            EXPECT_EQ(a, b) << site << " eps " << eps;
        }
    }
}

TEST(Circuit, device_is_invisible_without_disturbance) {
    const Circuit with = buildPreset("fig3b").scenario.circuit;
    const Circuit without = with.without(ElementKind::PiDevice);
    const auto a = propagate(with).at("OUT"), b = propagate(without).at("OUT");
    for (std::size_t i = 0; i < a.dim(); ++i) EXPECT_LE(std::abs(a[i] - b[i]), 1e-15);
}

TEST(Circuit, unitarity_and_cut_consistency_on_random_circuits) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        whichpath::testing::RandomCircuitOptions opt;
        opt.devices = trial % 2 == 0;
        const Circuit c = whichpath::testing::randomCircuit(rng, opt);
        const auto probes = c.probeIds();
        for (double eps : {0.0, 1e-3, 0.5}) {
            const std::string site = probes[trial % probes.size()];
            const auto trace = propagateTrace(c, {site, eps, std::nullopt});
            for (const auto& s : trace) EXPECT_NEAR(totalNorm2(s), 1.0, 1e-12);
            // every declared cut is one of the live sets; its norm is the total
            for (std::size_t k = 0; k < trace.size(); ++k) {
                double cutSum = 0.0;
                for (const auto& l : c.liveAt(k)) cutSum += trace[k].get(l).norm2();
                EXPECT_NEAR(cutSum, totalNorm2(trace[k]), 1e-12);
            }
        }
    }
}

TEST(Circuit, dense_oracle_agrees_with_joint_state_propagation) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        whichpath::testing::RandomCircuitOptions opt;
        opt.devices = true;
        const Circuit c = whichpath::testing::randomCircuit(rng, opt);
        const DenseOracle dense(c);
        const auto ref = dense.output("", 0.0);
        const auto out = propagate(c);
        for (const auto& l : c.outputs()) {
            EXPECT_NEAR(std::abs(out.get(l)[0] - ref[2 * c.pathIndex(l)]), 0.0, 1e-12);
        }
    }
}
