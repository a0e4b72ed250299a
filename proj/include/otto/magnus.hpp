#pragma once

#include <cmath>
#include <numbers>
#include <string_view>

#include "otto/adiabat.hpp"

namespace otto {

enum class NoiseChannel { phase, amplitude, both };

enum class MagnusOrder { first, second, exact_numeric };

constexpr std::string_view to_string(NoiseChannel c) {
    switch (c) {
        case NoiseChannel::phase: return "phase";
        case NoiseChannel::amplitude: return "amplitude";
        case NoiseChannel::both: return "both";
    }
    return "?";
}

/// Interaction-picture noise propagator U3 and its adiabaticity measure.
template <typename Scalar = double>
struct MagnusResult {
    Matrix3<Scalar> u3 = Matrix3<Scalar>::Identity();
    Scalar delta{0};
    MagnusOrder order = MagnusOrder::first;
};

template <typename Scalar = double>
struct CombinedDelta {
    Scalar phase{0};
    Scalar amplitude{0};
    Scalar additive{0};  // delta_p + delta_a, consumed by the temperature bound
    Scalar product{0};   // (1 + delta_p)(1 + delta_a) - 1
};

template <typename Scalar = double>
struct OptimalCycle {
    Scalar n_continuous{0};
    int n_integer{1};
    Scalar mu_continuous{0};      // quantized mu evaluated at n_continuous
    Scalar crossing_residual{0};  // | |mu_continuous| - sqrt(gamma_a/gamma_p) | / sqrt(gamma_a/gamma_p)
};

template <typename Scalar = double>
struct OptimalDelta {
    Scalar printed{0};   // single-channel delta at the crossing point
    Scalar additive{0};  // delta_p + delta_a at the crossing, i.e. twice the single-channel value
    Scalar product{0};   // (1 + delta)^2 - 1
};

namespace detail {

template <typename Scalar>
Scalar quantized_mu(Scalar log_ratio, Scalar n) {
    using std::sqrt;
    const Scalar pi = std::numbers::pi_v<Scalar>;
    return Scalar(-2) * log_ratio / sqrt(Scalar(4) * n * n * pi * pi + log_ratio * log_ratio);
}

template <typename Scalar>
void require_quantized(const AdiabatSpec<Scalar>& spec, int n) {
    using std::abs;
    spec.validate();
    const Scalar expected = frictionless_mu(spec.omega0, spec.omegaf, n);
    require(abs(spec.mu - expected) <= Scalar(1e-10) * abs(expected),
            "adiabat mu is not the frictionless value for cycle index n = " + std::to_string(n));
}

/// Cycle index whose frictionless mu matches spec.mu, or a DomainError.
template <typename Scalar>
int quantized_index(const AdiabatSpec<Scalar>& spec) {
    using std::llround;
    spec.validate();
    const Scalar periods = spec.big_omega() * spec.theta_final() / (Scalar(2) * std::numbers::pi_v<Scalar>);
    const long n = llround(double(periods));
    require(n >= 1, "adiabat completes less than one period");
    require_quantized(spec, int(n));
    return int(n);
}

}  // namespace detail

/// Frictionless mu for a real-valued cycle index (used at the continuous optimum).
template <typename Scalar>
Scalar frictionless_mu_continuous(Scalar omega0, Scalar omegaf, Scalar n) {
    using std::log;
    return detail::quantized_mu(log(omega0 / omegaf), n);
}

/// Interaction-picture phase-noise generator W_p = U2^-1 N_p U2 at X = Omega theta.
template <typename Scalar>
Matrix3<Scalar> w_phase(const AdiabatSpec<Scalar>& spec, Scalar x) {
    using std::cos;
    using std::sin;
    spec.validate();
    const Scalar mu = spec.mu, m2 = mu * mu;
    const Scalar om = spec.big_omega(), om2 = om * om;
    const Scalar c = cos(x), s = sin(x);
    const Scalar omega = spec.omega_at_theta(x / om);
    const Scalar q = m2 * c - Scalar(4);
    Matrix3<Scalar> w;
    w << (c - 1) * m2 * (m2 * (1 + c) - 8), mu * s * q * om, 2 * mu * (c - 1) * q,
         -mu * s * q * om, -(m2 * (s * s - 1) + 4) * om2, -2 * m2 * s * (c - 1) * om,
         -2 * mu * (c - 1) * q, -2 * m2 * s * (c - 1) * om, -(m2 * (m2 - 4 * s * s - 8 * c) + 16);
    return (Scalar(4) * spec.noise.gamma_p * omega / (om2 * om2)) * w;
}

/// Interaction-picture amplitude-noise generator W_a = U2^-1 N_a U2 at X = Omega theta.
template <typename Scalar>
Matrix3<Scalar> w_amplitude(const AdiabatSpec<Scalar>& spec, Scalar x) {
    using std::cos;
    using std::sin;
    spec.validate();
    const Scalar mu = spec.mu, m2 = mu * mu;
    const Scalar om = spec.big_omega(), om2 = om * om;
    const Scalar c = cos(x), s = sin(x);
    const Scalar omega = spec.omega_at_theta(x / om);
    const Scalar p = 4 - m2 * c + mu * s * om;
    const Scalar q = mu * s + om * c;
    const Scalar r = mu - mu * c + om * s;
    Matrix3<Scalar> w;
    w << p * p, -q * p * om, 2 * r * p,
         q * p * om, -q * q * om2, 2 * q * r * om,
         -2 * r * p, 2 * q * r * om, -4 * r * r;
    return (spec.noise.gamma_a * omega / (om2 * om2)) * w;
}

template <typename Scalar>
Matrix3<Scalar> w_channel(const AdiabatSpec<Scalar>& spec, NoiseChannel channel, Scalar x) {
    switch (channel) {
        case NoiseChannel::phase: return w_phase(spec, x);
        case NoiseChannel::amplitude: return w_amplitude(spec, x);
        case NoiseChannel::both: break;
    }
    return w_phase(spec, x) + w_amplitude(spec, x);
}

/// Integrates dU3/dX = W(X) U3 / Omega over the n periods X in [0, 2 n pi].
///
/// Only the selected channel's strength enters; the other is ignored even if
/// nonzero in `spec.noise`.
template <typename Scalar>
MagnusResult<Scalar> propagate_U3_numeric(const AdiabatSpec<Scalar>& spec, NoiseChannel channel, Scalar tol,
                                          IntegrationStats* stats = nullptr) {
    const int n = detail::quantized_index(spec);
    detail::require_tolerance(tol);
    const Scalar om = spec.big_omega();
    auto rhs = [&spec, channel, om](Scalar x, const Matrix3<Scalar>& u) -> Matrix3<Scalar> {
        return w_channel(spec, channel, x) * u / om;
    };
    const Scalar x_final = Scalar(2) * Scalar(n) * std::numbers::pi_v<Scalar>;
    MagnusResult<Scalar> out;
    out.u3 = integrate_adaptive<Scalar, Matrix3<Scalar>>(rhs, Matrix3<Scalar>::Identity(), Scalar(0), x_final, tol, stats);
    out.delta = out.u3(0, 0) - Scalar(1);
    out.order = MagnusOrder::exact_numeric;
    return out;
}

/// F = 16 (omega0 - omegaf) / (3 mu^2 - 16), using exp(2 n pi mu / Omega) = omegaf / omega0.
template <typename Scalar>
Scalar magnus_f(Scalar mu, Scalar omega0, Scalar omegaf) {
    return Scalar(16) * (omega0 - omegaf) / (Scalar(3) * mu * mu - Scalar(16));
}

/// F evaluated literally from the exponential, for diagnostics away from quantized mu.
template <typename Scalar>
Scalar magnus_f_raw(Scalar mu, Scalar omega0, Scalar n) {
    using std::expm1;
    using std::sqrt;
    const Scalar om = sqrt(Scalar(4) - mu * mu);
    return Scalar(-16) * omega0 * expm1(Scalar(2) * n * std::numbers::pi_v<Scalar> * mu / om) /
           (Scalar(-16) + Scalar(3) * mu * mu);
}

/// First-order Magnus term for phase noise, integral of W_p / Omega over n periods.
template <typename Scalar>
Matrix3<Scalar> b1_phase(const AdiabatSpec<Scalar>& spec, int n) {
    detail::require_quantized(spec, n);
    const Scalar mu = spec.mu, m2 = mu * mu;
    const Scalar pref = spec.noise.gamma_p * mu * (spec.omegaf - spec.omega0) / (Scalar(3) * m2 - Scalar(16));
    Matrix3<Scalar> b;
    b << -32, -16, -32 / mu - 6 * mu,
         16, -4 + 64 / m2, 6 * mu,
         32 / mu + 6 * mu, 6 * mu, 12 + 64 / m2;
    return pref * b;
}

/// First-order Magnus term for amplitude noise, integral of W_a / Omega over n periods.
template <typename Scalar>
Matrix3<Scalar> b1_amplitude(const AdiabatSpec<Scalar>& spec, int n) {
    detail::require_quantized(spec, n);
    const Scalar mu = spec.mu;
    const Scalar pref = spec.noise.gamma_a * (spec.omegaf - spec.omega0) / (Scalar(3) * mu * mu - Scalar(16));
    Matrix3<Scalar> b;
    // (1,3) carries -4: W_a(1,3) = -W_a(3,1) pointwise, so their integrals are opposite.
    b << -16 / mu + mu, -mu, -4,
         mu, 8 / mu - mu, 2,
         4, 2, 8 / mu;
    return pref * b;
}

template <typename Scalar>
Scalar delta_p_closed_form(Scalar mu, Scalar omega0, Scalar omegaf, Scalar gamma_p) {
    using std::expm1;
    return expm1(gamma_p * magnus_f(mu, omega0, omegaf) * mu);
}

template <typename Scalar>
Scalar delta_a_closed_form(Scalar mu, Scalar omega0, Scalar omegaf, Scalar gamma_a) {
    using std::expm1;
    detail::require(mu != 0, "delta_a: mu must be nonzero");
    return expm1(gamma_a * magnus_f(mu, omega0, omegaf) / mu);
}

/// Adiabatic-limit first-order U3 for phase noise (diagonal).
template <typename Scalar>
MagnusResult<Scalar> magnus_phase_first(const AdiabatSpec<Scalar>& spec, int n) {
    using std::exp;
    detail::require_quantized(spec, n);
    const Scalar mu = spec.mu, g = spec.noise.gamma_p;
    const Scalar f = magnus_f(mu, spec.omega0, spec.omegaf);
    const Scalar om2 = Scalar(4) - mu * mu;
    MagnusResult<Scalar> r;
    r.u3 = Vector3<Scalar>(exp(g * f * mu), Scalar(4) / (Scalar(4) + mu * mu) * exp(Scalar(-4) * g * f / mu),
                           exp(-g * f * om2 / mu))
               .asDiagonal();
    r.delta = delta_p_closed_form(mu, spec.omega0, spec.omegaf, g);
    r.order = MagnusOrder::first;
    return r;
}

template <typename Scalar>
Scalar delta_p_first(const AdiabatSpec<Scalar>& spec, int n) {
    detail::require_quantized(spec, n);
    return delta_p_closed_form(spec.mu, spec.omega0, spec.omegaf, spec.noise.gamma_p);
}

/// Second-order Magnus exponent beta = 16 gamma_p^2 (omegaf^2 - omega0^2) / (4 + 3 mu^2).
template <typename Scalar>
Scalar magnus_beta_second(const AdiabatSpec<Scalar>& spec) {
    const Scalar g = spec.noise.gamma_p;
    return Scalar(16) * g * g * (spec.omegaf * spec.omegaf - spec.omega0 * spec.omega0) /
           (Scalar(4) + Scalar(3) * spec.mu * spec.mu);
}

template <typename Scalar>
MagnusResult<Scalar> magnus_phase_second(const AdiabatSpec<Scalar>& spec, int n) {
    using std::cosh;
    using std::sinh;
    detail::require_quantized(spec, n);
    const Scalar beta = magnus_beta_second(spec);
    MagnusResult<Scalar> r;
    r.u3 << cosh(beta), -sinh(beta), 0,
            -sinh(beta), cosh(beta), 0,
            0, 0, 1;
    const Scalar half = sinh(beta / Scalar(2));
    r.delta = Scalar(2) * half * half;  // cosh(beta) - 1 without cancellation
    r.order = MagnusOrder::second;
    return r;
}

template <typename Scalar>
Scalar delta_p_second(const AdiabatSpec<Scalar>& spec, int n) {
    return magnus_phase_second(spec, n).delta;
}

/// n -> infinity plateau of the second-order phase-noise delta.
template <typename Scalar>
Scalar delta_p_second_limit(Scalar omega0, Scalar omegaf, Scalar gamma_p) {
    using std::sinh;
    const Scalar half = sinh(Scalar(2) * gamma_p * gamma_p * (omega0 * omega0 - omegaf * omegaf));
    return Scalar(2) * half * half;
}

/// Adiabatic-limit first-order U3 for amplitude noise (diagonal, O(1/mu) terms only).
template <typename Scalar>
MagnusResult<Scalar> magnus_amplitude_first(const AdiabatSpec<Scalar>& spec, int n) {
    using std::exp;
    detail::require_quantized(spec, n);
    const Scalar mu = spec.mu, g = spec.noise.gamma_a;
    const Scalar e = g * magnus_f(mu, spec.omega0, spec.omegaf) / mu;
    MagnusResult<Scalar> r;
    r.u3 = Vector3<Scalar>(exp(e), exp(-e / 2), exp(-e / 2)).asDiagonal();
    r.delta = delta_a_closed_form(mu, spec.omega0, spec.omegaf, g);
    r.order = MagnusOrder::first;
    return r;
}

template <typename Scalar>
Scalar delta_a(const AdiabatSpec<Scalar>& spec, int n) {
    detail::require_quantized(spec, n);
    return delta_a_closed_form(spec.mu, spec.omega0, spec.omegaf, spec.noise.gamma_a);
}

template <typename Scalar>
CombinedDelta<Scalar> delta_combined(const AdiabatSpec<Scalar>& spec, int n) {
    CombinedDelta<Scalar> out;
    out.phase = delta_p_first(spec, n);
    out.amplitude = delta_a(spec, n);
    out.additive = out.phase + out.amplitude;
    out.product = out.phase + out.amplitude + out.phase * out.amplitude;
    return out;
}

/// Cycle index where the phase and amplitude deltas cross, and the better neighbouring integer.
template <typename Scalar>
OptimalCycle<Scalar> n_optimal(Scalar omega0, Scalar omegaf, const NoiseSpec<Scalar>& noise) {
    using std::abs;
    using std::ceil;
    using std::floor;
    using std::log;
    using std::sqrt;
    noise.validate();
    detail::require(omega0 > 0 && omegaf > 0 && omega0 != omegaf, "n_optimal: invalid frequencies");
    detail::require(noise.gamma_p > 0 && noise.gamma_a > 0, "n_optimal: both noise strengths must be positive");
    detail::require(Scalar(4) * noise.gamma_p > noise.gamma_a, "n_optimal: requires 4 gamma_p > gamma_a");

    OptimalCycle<Scalar> out;
    const Scalar log_ratio = log(omega0 / omegaf);
    out.n_continuous = sqrt(Scalar(4) * noise.gamma_p / noise.gamma_a - Scalar(1)) * abs(log_ratio) /
                       (Scalar(2) * std::numbers::pi_v<Scalar>);
    out.mu_continuous = detail::quantized_mu(log_ratio, out.n_continuous);
    const Scalar crossing = sqrt(noise.gamma_a / noise.gamma_p);
    out.crossing_residual = abs(abs(out.mu_continuous) - crossing) / crossing;

    const int lo = std::max(1, int(floor(out.n_continuous)));
    const int hi = std::max(1, int(ceil(out.n_continuous)));
    auto total = [&](int n) { return delta_combined(frictionless_adiabat(omega0, omegaf, n, noise), n).additive; };
    out.n_integer = lo;
    if (hi != lo) {
        const Scalar d_lo = total(lo), d_hi = total(hi);
        if (d_hi < d_lo - Scalar(1e-12)) out.n_integer = hi;
    }
    return out;
}

/// delta at the continuous optimum, as the closed-form exponential of the crossing point.
template <typename Scalar>
OptimalDelta<Scalar> delta_at_optimum(Scalar omega0, Scalar omegaf, const NoiseSpec<Scalar>& noise) {
    using std::abs;
    using std::expm1;
    using std::sqrt;
    noise.validate();
    detail::require(omega0 > 0 && omegaf > 0, "delta_at_optimum: invalid frequencies");
    OptimalDelta<Scalar> out;
    if (noise.silent()) return out;
    detail::require(Scalar(4) * noise.gamma_p > noise.gamma_a, "delta_at_optimum: requires 4 gamma_p > gamma_a");
    const Scalar gp = noise.gamma_p, ga = noise.gamma_a;
    const Scalar exponent =
        Scalar(-16) * sqrt(ga) * gp * sqrt(gp) * abs(omega0 - omegaf) / (Scalar(3) * ga - Scalar(16) * gp);
    out.printed = expm1(exponent);
    out.additive = Scalar(2) * out.printed;
    out.product = out.printed * (Scalar(2) + out.printed);
    return out;
}

}  // namespace otto
