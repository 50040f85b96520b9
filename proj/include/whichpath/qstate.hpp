// qstate.hpp
// Complex-amplitude algebra for the particle's non-path degree of freedom
// (the "ancilla") and for joint path-ancilla states.
//
// The ancilla is a register of one or more two-level factors. Factor j has
// basis {Phi_j, PhiPerp_j}; the product basis is indexed by bit masks, so the
// all-Phi vector is index 0 and PhiPerp on factor j alone is index (1 << j).

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace whichpath {

using Complex = std::complex<double>;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnknownLabelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// 2x2 complex matrix acting on span{Phi, PhiPerp} of one ancilla factor,
/// row-major: {m00, m01, m10, m11}.
struct AncillaOp {
    std::array<Complex, 4> m{Complex{1.0}, Complex{}, Complex{}, Complex{1.0}};

    static AncillaOp identity() { return {}; }

    /// The pi device: a Phi + b PhiPerp -> a Phi - b PhiPerp.
    static AncillaOp piFlip() { return {{Complex{1.0}, Complex{}, Complex{}, Complex{-1.0}}}; }

    /// exp(theta (|PhiPerp><Phi| - |Phi><PhiPerp|)), i.e. Phi -> cos(theta) Phi + sin(theta) PhiPerp.
    static AncillaOp rotation(double theta) {
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        return {{Complex{c}, Complex{-s}, Complex{s}, Complex{c}}};
    }

    /// d/dtheta of rotation(theta) at theta = 0.
    static AncillaOp rotationGenerator() {
        return {{Complex{}, Complex{-1.0}, Complex{1.0}, Complex{}}};
    }

    bool operator==(const AncillaOp&) const = default;
};

class AncillaVector {
public:
    /// Zero vector over `factors` two-level factors.
    explicit AncillaVector(std::size_t factors = 1) : factors_(factors), amps_(std::size_t{1} << factors) {
        if (factors == 0 || factors > 16) {
            throw DimensionError("ancilla factor count must be in [1, 16], got " + std::to_string(factors));
        }
    }

    AncillaVector(std::size_t factors, std::vector<Complex> amps) : factors_(factors), amps_(std::move(amps)) {
        if (factors == 0 || factors > 16 || amps_.size() != (std::size_t{1} << factors)) {
            throw DimensionError("amplitude count does not match 2^" + std::to_string(factors));
        }
    }

    static AncillaVector phi(std::size_t factors = 1) {
        AncillaVector v(factors);
        v.amps_[0] = 1.0;
        return v;
    }

    static AncillaVector phiPerp(std::size_t factor = 0, std::size_t factors = 1) {
        AncillaVector v(factors);
        v.amps_.at(std::size_t{1} << factor) = 1.0;
        return v;
    }

    static AncillaVector basis(std::size_t index, std::size_t factors = 1) {
        AncillaVector v(factors);
        v.amps_.at(index) = 1.0;
        return v;
    }

    std::size_t factors() const { return factors_; }
    std::size_t dim() const { return amps_.size(); }

    const Complex& operator[](std::size_t i) const { return amps_[i]; }
    Complex& operator[](std::size_t i) { return amps_[i]; }
    const std::vector<Complex>& amplitudes() const { return amps_; }

    double norm2() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }

    AncillaVector& operator+=(const AncillaVector& o) {
        requireSameDim(o);
        for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] += o.amps_[i];
        return *this;
    }

    AncillaVector& operator*=(Complex k) {
        for (auto& a : amps_) a *= k;
        return *this;
    }

    friend AncillaVector operator+(AncillaVector a, const AncillaVector& b) { return a += b; }
    friend AncillaVector operator*(Complex k, AncillaVector a) { return a *= k; }

    /// Applies `op` to factor `factor`, identity on the others.
    AncillaVector applied(const AncillaOp& op, std::size_t factor = 0) const {
        if (factor >= factors_) {
            throw DimensionError("ancilla factor " + std::to_string(factor) + " out of range");
        }
        AncillaVector out(factors_);
        const std::size_t bit = std::size_t{1} << factor;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (i & bit) continue;
            const Complex a0 = amps_[i];
            const Complex a1 = amps_[i | bit];
            out.amps_[i] = op.m[0] * a0 + op.m[1] * a1;
            out.amps_[i | bit] = op.m[2] * a0 + op.m[3] * a1;
        }
        return out;
    }

    bool operator==(const AncillaVector&) const = default;

    void requireSameDim(const AncillaVector& o) const {
        if (o.amps_.size() != amps_.size()) {
            throw DimensionError("ancilla dimension mismatch: " + std::to_string(amps_.size()) + " vs " +
                                 std::to_string(o.amps_.size()));
        }
    }

private:
    std::size_t factors_;
    std::vector<Complex> amps_;
};

/// <a|b>, conjugate-linear in `a`.
inline Complex inner(const AncillaVector& a, const AncillaVector& b) {
    a.requireSameDim(b);
    Complex s{};
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

/// Unnormalized sum over paths of |p>|phi_p>, keyed by path label.
class JointState {
public:
    JointState() = default;
    explicit JointState(std::size_t factors) : factors_(factors) {}

    std::size_t factors() const { return factors_; }

    bool contains(const std::string& path) const { return entries_.count(path) != 0; }

    const AncillaVector& at(const std::string& path) const {
        auto it = entries_.find(path);
        if (it == entries_.end()) throw UnknownLabelError("unknown path label '" + path + "'");
        return it->second;
    }

    /// Entry for `path`, or the zero vector if the path carries nothing.
    AncillaVector get(const std::string& path) const {
        auto it = entries_.find(path);
        return it == entries_.end() ? AncillaVector(factors_) : it->second;
    }

    void set(const std::string& path, AncillaVector v) {
        if (v.factors() != factors_) throw DimensionError("entry factor count differs from state");
        entries_.insert_or_assign(path, std::move(v));
    }

    void erase(const std::string& path) { entries_.erase(path); }

    const std::map<std::string, AncillaVector>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    bool operator==(const JointState&) const = default;

private:
    std::size_t factors_ = 1;
    std::map<std::string, AncillaVector> entries_;
};

inline double totalNorm2(const JointState& s) {
    double t = 0.0;
    for (const auto& [label, v] : s.entries()) t += v.norm2();
    return t;
}

/// Replaces the entry at `path` by M phi_path (M on ancilla factor `factor`).
inline JointState applyAncillaOp(const JointState& s, const std::string& path, const AncillaOp& m,
                                 std::size_t factor = 0) {
    JointState out = s;
    out.set(path, s.at(path).applied(m, factor));
    return out;
}

}  // namespace whichpath
