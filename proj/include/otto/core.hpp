#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "otto/constants.hpp"
#include "otto/errors.hpp"

namespace otto {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

/// Expectation values (<H>, <L>, <D>) of the working medium, in joules.
template <typename Scalar = double>
struct ObservableTriple {
    Scalar h{0};
    Scalar l{0};
    Scalar d{0};

    Vector3<Scalar> vector() const { return Vector3<Scalar>(h, l, d); }

    static ObservableTriple from_vector(const Vector3<Scalar>& v) { return {v(0), v(1), v(2)}; }

    bool operator==(const ObservableTriple&) const = default;
};

template <typename Scalar = double>
struct LagrangeMultipliers {
    Scalar beta{0};  // 1/J
    std::complex<Scalar> alpha{0, 0};
};

/// A heat bath seen by the oscillator at fixed frequency.
template <typename Scalar = double>
struct BathSpec {
    Scalar temperature{};  // K
    Scalar omega{};        // rad/s
    Scalar k_down{};       // 1/s

    void validate() const {
        detail::require(temperature > 0, "bath temperature must be positive");
        detail::require(omega > 0, "bath frequency must be positive");
        detail::require(k_down > 0, "bath rate k_down must be positive");
    }
};

/// Noise strengths on the adiabats. Both are stored in seconds so that
/// gamma * omega is dimensionless.
template <typename Scalar = double>
struct NoiseSpec {
    Scalar gamma_p{0};
    Scalar gamma_a{0};

    void validate() const {
        detail::require(gamma_p >= 0, "gamma_p must be non-negative");
        detail::require(gamma_a >= 0, "gamma_a must be non-negative");
    }

    bool silent() const { return gamma_p == 0 && gamma_a == 0; }
};

/// Affine map A -> matrix * A + offset on observable triples.
///
/// Composition follows operator order: `(later * earlier).apply(a)` equals
/// `later.apply(earlier.apply(a))`, so a whole cycle reads U_ch * U_c * U_hc * U_h.
template <typename Scalar = double>
struct SegmentPropagator {
    Matrix3<Scalar> matrix = Matrix3<Scalar>::Identity();
    Vector3<Scalar> offset = Vector3<Scalar>::Zero();

    static SegmentPropagator identity() { return {}; }

    static SegmentPropagator linear(const Matrix3<Scalar>& m) { return {m, Vector3<Scalar>::Zero()}; }

    ObservableTriple<Scalar> apply(const ObservableTriple<Scalar>& a) const {
        return ObservableTriple<Scalar>::from_vector(matrix * a.vector() + offset);
    }

    friend SegmentPropagator operator*(const SegmentPropagator& later, const SegmentPropagator& earlier) {
        return {later.matrix * earlier.matrix, later.matrix * earlier.offset + later.offset};
    }
};

/// coth with a two-term series below 1e-8, where 1/tanh starts losing digits.
template <typename Scalar>
Scalar coth(Scalar x) {
    using std::abs;
    using std::tanh;
    if (abs(x) < Scalar(1e-8)) return Scalar(1) / x + x / Scalar(3);
    return Scalar(1) / tanh(x);
}

/// Inverse of coth on |y| > 1.
template <typename Scalar>
Scalar arccoth(Scalar y) {
    using std::abs;
    using std::atanh;
    detail::require(abs(y) > 1, "arccoth argument must satisfy |y| > 1");
    return atanh(Scalar(1) / y);
}

/// hbar omega / (2 kB T), the argument of every thermal coth.
template <typename Scalar>
Scalar half_quantum_ratio(Scalar omega, Scalar temperature) {
    using C = PhysicalConstants<Scalar>;
    return C::hbar * omega / (Scalar(2) * C::kB * temperature);
}

/// Equilibrium <H> = (hbar omega / 2) coth(hbar omega / 2 kB T).
template <typename Scalar>
Scalar equilibrium_energy(Scalar omega, Scalar temperature) {
    detail::require(omega > 0, "equilibrium_energy: omega must be positive");
    detail::require(temperature > 0, "equilibrium_energy: temperature must be positive");
    using C = PhysicalConstants<Scalar>;
    return C::hbar * omega / Scalar(2) * coth(half_quantum_ratio(omega, temperature));
}

template <typename Scalar>
ObservableTriple<Scalar> thermal_triple(Scalar omega, Scalar temperature) {
    return {equilibrium_energy(omega, temperature), Scalar(0), Scalar(0)};
}

template <typename Scalar>
ObservableTriple<Scalar> thermal_triple(const BathSpec<Scalar>& bath) {
    return thermal_triple(bath.omega, bath.temperature);
}

/// Reconstructs (alpha, beta) of the generalized Gibbs state from an observable triple.
///
/// beta is evaluated as log1p(2 hbar w (hbar w - 2H) / den) / (hbar w), which is the
/// logarithmic expression with the "1 +" split off exactly; near the classical limit
/// the ratio inside the logarithm is 1 + O(1e-13) and a plain log would lose all digits.
template <typename Scalar>
LagrangeMultipliers<Scalar> lagrange_multipliers(const ObservableTriple<Scalar>& a, Scalar omega) {
    using std::isfinite;
    using std::log1p;
    detail::require(omega > 0, "lagrange_multipliers: omega must be positive");
    const Scalar quantum = PhysicalConstants<Scalar>::hbar * omega;
    const Scalar gap = quantum - Scalar(2) * a.h;
    const Scalar den = Scalar(4) * (a.l * a.l + a.d * a.d) - gap * gap;
    if (den == 0 || !isfinite(den)) throw SingularStateError("lagrange_multipliers: vanishing denominator");

    const Scalar excess = Scalar(2) * quantum * gap / den;  // log argument minus one
    if (!(excess > Scalar(-1))) throw SingularStateError("lagrange_multipliers: non-positive log argument");

    LagrangeMultipliers<Scalar> out;
    out.beta = log1p(excess) / quantum;
    out.alpha = std::complex<Scalar>(Scalar(2) * quantum * a.l / den, Scalar(2) * quantum * a.d / den);
    if (!isfinite(out.beta)) throw SingularStateError("lagrange_multipliers: non-finite beta");
    return out;
}

/// (h^2 - l^2 - d^2) / (hbar omega)^2, invariant under noiseless adiabats.
template <typename Scalar>
Scalar casimir_form(const ObservableTriple<Scalar>& a, Scalar omega) {
    detail::require(omega > 0, "casimir_form: omega must be positive");
    const Scalar quantum = PhysicalConstants<Scalar>::hbar * omega;
    // Divide first: squares of energies near 1e-34 J would underflow.
    const Scalar h = a.h / quantum, l = a.l / quantum, d = a.d / quantum;
    return h * h - l * l - d * d;
}

}  // namespace otto
