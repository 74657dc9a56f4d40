#pragma once

/*
 * Scalar algebra for sparse products.
 *
 * A semiring supplies add, multiply, zero (additive identity, multiplicative
 * annihilator) and one. Every kernel in the library is a template over a type
 * satisfying the Semiring concept below. Entries that accumulate to exactly
 * zero() are dropped from stored outputs; for floating point this is an exact
 * comparison, so cancellation to a tiny nonzero residue keeps the entry.
 */

#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace spgemm {

template <class S>
concept Semiring = requires(const S& s, const typename S::value_type& x) {
    typename S::value_type;
    { s.add(x, x) } -> std::convertible_to<typename S::value_type>;
    { s.multiply(x, x) } -> std::convertible_to<typename S::value_type>;
    { s.zero() } -> std::convertible_to<typename S::value_type>;
    { s.one() } -> std::convertible_to<typename S::value_type>;
} && std::equality_comparable<typename S::value_type> && std::copyable<typename S::value_type>;

template <Semiring S>
using scalar_t = typename S::value_type;

/// Ordinary arithmetic (+, x).
template <class T = double>
struct PlusTimes {
    using value_type = T;
    static constexpr const char* name = "real";
    constexpr T add(T a, T b) const { return a + b; }
    constexpr T multiply(T a, T b) const { return a * b; }
    constexpr T zero() const { return T(0); }
    constexpr T one() const { return T(1); }
};

/// Tropical (min, +) semiring: zero is +inf, one is 0. Products of adjacency
/// matrices give shortest path lengths.
template <class T = double>
struct MinPlus {
    using value_type = T;
    static constexpr const char* name = "tropical";
    constexpr T add(T a, T b) const { return b < a ? b : a; }
    constexpr T multiply(T a, T b) const { return a + b; }
    constexpr T zero() const { return std::numeric_limits<T>::infinity(); }
    constexpr T one() const { return T(0); }
};

/// Boolean (or, and) semiring. Values are stored as bytes holding 0 or 1 so
/// that value arrays stay contiguous (no std::vector<bool>).
struct OrAnd {
    using value_type = std::uint8_t;
    static constexpr const char* name = "boolean";
    constexpr value_type add(value_type a, value_type b) const { return (a | b) ? 1 : 0; }
    constexpr value_type multiply(value_type a, value_type b) const { return (a & b) ? 1 : 0; }
    constexpr value_type zero() const { return 0; }
    constexpr value_type one() const { return 1; }
};

/// Runtime-assembled algebra. Mostly useful for testing the axiom checker
/// against operations that are *not* a semiring.
template <class T>
struct FunctionSemiring {
    using value_type = T;
    std::function<T(T, T)> add_op;
    std::function<T(T, T)> mul_op;
    T zero_value;
    T one_value;

    T add(const T& a, const T& b) const { return add_op(a, b); }
    T multiply(const T& a, const T& b) const { return mul_op(a, b); }
    T zero() const { return zero_value; }
    T one() const { return one_value; }
};

/// Outcome of check_semiring_axioms, one flag per axiom.
struct AxiomReport {
    bool add_associative = true;
    bool add_commutative = true;
    bool add_identity = true;
    bool mul_associative = true;
    bool mul_identity = true;
    bool left_distributive = true;
    bool right_distributive = true;
    bool zero_annihilates = true;
    /// Human-readable description of the first violation found, empty if none.
    std::string first_failure;

    bool all() const {
        return add_associative && add_commutative && add_identity && mul_associative &&
               mul_identity && left_distributive && right_distributive && zero_annihilates;
    }
};

/// Exhaustively checks the semiring axioms over all sample pairs and triples
/// using exact equality. Cost is O(|samples|^3).
template <Semiring S>
AxiomReport check_semiring_axioms(const S& s, std::span<const scalar_t<S>> samples) {
    AxiomReport r;
    auto fail = [&r](bool& flag, const char* axiom) {
        if (flag && r.first_failure.empty()) r.first_failure = axiom;
        flag = false;
    };
    const auto zero = s.zero();
    const auto one = s.one();
    for (const auto& x : samples) {
        if (!(s.add(x, zero) == x) || !(s.add(zero, x) == x)) fail(r.add_identity, "additive identity");
        if (!(s.multiply(x, one) == x) || !(s.multiply(one, x) == x)) fail(r.mul_identity, "multiplicative identity");
        if (!(s.multiply(x, zero) == zero) || !(s.multiply(zero, x) == zero)) fail(r.zero_annihilates, "annihilation by zero");
        for (const auto& y : samples) {
            if (!(s.add(x, y) == s.add(y, x))) fail(r.add_commutative, "commutativity of add");
            for (const auto& z : samples) {
                if (!(s.add(s.add(x, y), z) == s.add(x, s.add(y, z)))) fail(r.add_associative, "associativity of add");
                if (!(s.multiply(s.multiply(x, y), z) == s.multiply(x, s.multiply(y, z))))
                    fail(r.mul_associative, "associativity of multiply");
                if (!(s.multiply(x, s.add(y, z)) == s.add(s.multiply(x, y), s.multiply(x, z))))
                    fail(r.left_distributive, "left distributivity");
                if (!(s.multiply(s.add(y, z), x) == s.add(s.multiply(y, x), s.multiply(z, x))))
                    fail(r.right_distributive, "right distributivity");
            }
        }
    }
    return r;
}

template <Semiring S>
AxiomReport check_semiring_axioms(const S& s, const std::vector<scalar_t<S>>& samples) {
    return check_semiring_axioms(s, std::span<const scalar_t<S>>(samples));
}

}  // namespace spgemm
