#include "whichpath/qstate.hpp"

#include <random>

#include "gtest/gtest.h"

using namespace whichpath;

namespace {

AncillaVector randomVector(std::mt19937_64& rng, std::size_t factors) {
    std::normal_distribution<double> g;
    AncillaVector v(factors);
    for (std::size_t i = 0; i < v.dim(); ++i) v[i] = {g(rng), g(rng)};
    return v;
}

AncillaOp randomUnitary(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> a(-3.2, 3.2);
    // e^{i phi} [[cos, -e^{i lambda} sin], [e^{i mu} sin, e^{i(lambda+mu)} cos]]
    const double th = a(rng), la = a(rng), mu = a(rng), ph = a(rng);
    const Complex g = std::polar(1.0, ph);
    return {{g * std::cos(th), -g * std::polar(1.0, la) * std::sin(th), g * std::polar(1.0, mu) * std::sin(th),
             g * std::polar(1.0, la + mu) * std::cos(th)}};
}

}  // namespace

TEST(AncillaVector, inner_products_of_basis) {
    const auto phi = AncillaVector::phi();
    const auto perp = AncillaVector::phiPerp();
    EXPECT_EQ(inner(phi, perp), Complex(0.0));
    EXPECT_EQ(inner(phi, phi), Complex(1.0));
    const AncillaVector mixed = phi + Complex(0, 1) * perp;
    // conjugate-linear in the first argument
    EXPECT_EQ(inner(perp, mixed), Complex(0, 1));
    EXPECT_EQ(inner(mixed, perp), Complex(0, -1));
}

TEST(AncillaVector, inner_is_conjugate_symmetric) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = randomVector(rng, 2), b = randomVector(rng, 2);
        EXPECT_LT(std::abs(inner(a, b) - std::conj(inner(b, a))), 1e-14);
    }
}

TEST(AncillaVector, dimension_mismatch_throws) {
    EXPECT_THROW(inner(AncillaVector::phi(1), AncillaVector::phi(2)), DimensionError);
    EXPECT_THROW(AncillaVector(0), DimensionError);
    EXPECT_THROW(AncillaVector(1, {1.0, 0.0, 0.0}), DimensionError);
}

TEST(JointState, total_norm) {
    JointState s;
    EXPECT_EQ(totalNorm2(s), 0.0);
    s.set("IN", AncillaVector::phi());
    EXPECT_EQ(totalNorm2(s), 1.0);

    JointState two;
    two.set("A", Complex(1 / std::sqrt(2.0)) * AncillaVector::phi());
    two.set("B", Complex(1 / std::sqrt(2.0)) * AncillaVector::phi());
    EXPECT_NEAR(totalNorm2(two), 1.0, 1e-15);
}

TEST(JointState, ancilla_ops) {
    JointState s;
    const AncillaVector v = Complex(0.6) * AncillaVector::phi() + Complex(0.0, 0.8) * AncillaVector::phiPerp();
    s.set("B", v);
    s.set("A", AncillaVector::phi());

    EXPECT_EQ(applyAncillaOp(s, "B", AncillaOp::identity()), s);

    const auto flipped = applyAncillaOp(s, "B", AncillaOp::piFlip());
    EXPECT_EQ(flipped.at("B")[0], Complex(0.6));
    EXPECT_EQ(flipped.at("B")[1], Complex(0.0, -0.8));

    const double eps = 0.01;
    const auto rotated = applyAncillaOp(s, "A", AncillaOp::rotation(eps));
    EXPECT_EQ(rotated.at("A")[0], Complex(std::cos(eps)));
    EXPECT_EQ(rotated.at("A")[1], Complex(std::sin(eps)));

    EXPECT_THROW(applyAncillaOp(s, "C", AncillaOp::identity()), UnknownLabelError);
}

TEST(JointState, unitary_op_preserves_norm_and_touches_one_entry) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        JointState s(2);
        s.set("A", randomVector(rng, 2));
        s.set("B", randomVector(rng, 2));
        s.set("C", randomVector(rng, 2));
        const std::size_t factor = trial % 2;
        const auto out = applyAncillaOp(s, "B", randomUnitary(rng), factor);
        EXPECT_NEAR(totalNorm2(out), totalNorm2(s), 1e-12 * totalNorm2(s));
        EXPECT_EQ(out.at("A"), s.at("A"));
        EXPECT_EQ(out.at("C"), s.at("C"));
    }
}

TEST(AncillaVector, factor_ops_act_on_their_own_factor) {
    // |Phi_A>|Phi_B> with a rotation on factor 1 only moves amplitude to index 2.
    const auto v = AncillaVector::phi(2).applied(AncillaOp::rotation(0.3), 1);
    EXPECT_DOUBLE_EQ(v[0].real(), std::cos(0.3));
    EXPECT_EQ(v[1], Complex(0.0));
    EXPECT_DOUBLE_EQ(v[2].real(), std::sin(0.3));
    EXPECT_EQ(v[3], Complex(0.0));
    EXPECT_THROW(v.applied(AncillaOp::identity(), 2), DimensionError);
}

TEST(AncillaOp, generator_is_derivative_of_rotation) {
    const double h = 1e-6;
    const auto plus = AncillaOp::rotation(h), minus = AncillaOp::rotation(-h);
    const auto g = AncillaOp::rotationGenerator();
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(((plus.m[i] - minus.m[i]) / (2 * h)).real(), g.m[i].real(), 1e-9);
}
