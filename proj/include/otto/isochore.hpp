#pragma once

#include <cmath>

#include "otto/core.hpp"

namespace otto {

template <typename Scalar = double>
struct IsochoreRates {
    Scalar k_down{};
    Scalar k_up{};
    Scalar gamma_cap{};  // heat conductance k_down - k_up
};

template <typename Scalar = double>
struct IsochoreSegment {
    BathSpec<Scalar> bath;
    Scalar duration{0};  // s

    void validate() const {
        bath.validate();
        detail::require(duration >= 0, "isochore duration must be non-negative");
    }
};

/// Linear generator dA/dt = matrix * A + offset.
template <typename Scalar = double>
struct AffineGenerator {
    Matrix3<Scalar> matrix;
    Vector3<Scalar> offset;
};

/// Detailed balance: k_up / k_down = exp(-hbar omega / kB T).
template <typename Scalar>
IsochoreRates<Scalar> rates_from_bath(const BathSpec<Scalar>& bath) {
    using std::exp;
    using std::expm1;
    bath.validate();
    using C = PhysicalConstants<Scalar>;
    const Scalar x = C::hbar * bath.omega / (C::kB * bath.temperature);
    return {bath.k_down, bath.k_down * exp(-x), -bath.k_down * expm1(-x)};
}

/// Time for the isochore to relax within e^-6 of equilibrium.
template <typename Scalar>
Scalar default_isochore_duration(const BathSpec<Scalar>& bath) {
    return Scalar(6) / rates_from_bath(bath).gamma_cap;
}

template <typename Scalar>
AffineGenerator<Scalar> isochore_generator(const BathSpec<Scalar>& bath) {
    const Scalar gamma = rates_from_bath(bath).gamma_cap;
    const Scalar w2 = Scalar(2) * bath.omega;
    AffineGenerator<Scalar> g;
    g.matrix << -gamma, 0, 0,
                0, -gamma, -w2,
                0, w2, -gamma;
    g.offset << gamma * equilibrium_energy(bath.omega, bath.temperature), 0, 0;
    return g;
}

/// Closed-form isochore map: exponential relaxation of <H> and a damped
/// rotation at angular rate 2 omega in the (<L>, <D>) plane.
template <typename Scalar>
SegmentPropagator<Scalar> isochore_propagator(const IsochoreSegment<Scalar>& seg) {
    using std::cos;
    using std::exp;
    using std::expm1;
    using std::sin;
    seg.validate();
    const Scalar gamma = rates_from_bath(seg.bath).gamma_cap;
    const Scalar decay = exp(-gamma * seg.duration);
    const Scalar phase = Scalar(2) * seg.bath.omega * seg.duration;
    const Scalar c = cos(phase), s = sin(phase);

    SegmentPropagator<Scalar> p;
    p.matrix << decay, 0, 0,
                0, decay * c, -decay * s,
                0, decay * s, decay * c;
    p.offset << -expm1(-gamma * seg.duration) * equilibrium_energy(seg.bath.omega, seg.bath.temperature), 0, 0;
    return p;
}

template <typename Scalar>
ObservableTriple<Scalar> propagate_isochore(const ObservableTriple<Scalar>& initial,
                                            const IsochoreSegment<Scalar>& seg) {
    using std::cos;
    using std::exp;
    using std::sin;
    seg.validate();
    const Scalar gamma = rates_from_bath(seg.bath).gamma_cap;
    const Scalar h_eq = equilibrium_energy(seg.bath.omega, seg.bath.temperature);
    const Scalar decay = exp(-gamma * seg.duration);
    const Scalar phase = Scalar(2) * seg.bath.omega * seg.duration;
    const Scalar c = cos(phase), s = sin(phase);
    return {decay * (initial.h - h_eq) + h_eq,
            decay * (c * initial.l - s * initial.d),
            decay * (s * initial.l + c * initial.d)};
}

}  // namespace otto
