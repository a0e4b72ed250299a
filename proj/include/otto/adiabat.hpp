#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "otto/core.hpp"
#include "otto/ode.hpp"

namespace otto {

/// One adiabat driven at constant adiabatic parameter mu = d(omega)/dt / omega^2.
///
/// The frequency follows omega(t) = omega0 / (1 - mu omega0 t); in the scaled
/// time theta (d theta = omega dt) this is omega0 exp(mu theta), reaching
/// omegaf at theta_f = ln(omegaf / omega0) / mu.
template <typename Scalar = double>
struct AdiabatSpec {
    Scalar omega0{};
    Scalar omegaf{};
    Scalar mu{};
    NoiseSpec<Scalar> noise{};

    void validate() const {
        using std::abs;
        detail::require(omega0 > 0 && omegaf > 0, "adiabat frequencies must be positive");
        detail::require(omega0 != omegaf, "adiabat endpoints must differ");
        detail::require(abs(mu) < 2, "|mu| must be below 2 (oscillatory branch)");
        detail::require(mu != 0 && (mu > 0) == (omegaf > omega0),
                        "sign of mu must match the direction of the frequency change");
        noise.validate();
    }

    Scalar theta_final() const {
        using std::log;
        return log(omegaf / omega0) / mu;
    }

    /// Physical duration tau = (1 - omega0/omegaf) / (mu omega0).
    Scalar duration() const { return (Scalar(1) - omega0 / omegaf) / (mu * omega0); }

    Scalar big_omega() const {
        using std::sqrt;
        return sqrt(Scalar(4) - mu * mu);
    }

    Scalar omega_at_theta(Scalar theta) const {
        using std::exp;
        return omega0 * exp(mu * theta);
    }
};

/// Quantized adiabatic parameter giving an identity U2 after n periods.
template <typename Scalar>
Scalar frictionless_mu(Scalar omega0, Scalar omegaf, int n) {
    using std::log;
    using std::sqrt;
    detail::require(n >= 1, "cycle index n must be >= 1");
    detail::require(omega0 > 0 && omegaf > 0, "frequencies must be positive");
    const Scalar L = log(omega0 / omegaf);
    const Scalar pi = std::numbers::pi_v<Scalar>;
    return Scalar(-2) * L / sqrt(Scalar(4) * Scalar(n) * Scalar(n) * pi * pi + L * L);
}

/// Duration of the frictionless adiabat with cycle index n.
template <typename Scalar>
Scalar frictionless_tau(Scalar omega0, Scalar omegaf, int n) {
    using std::log;
    using std::sqrt;
    detail::require(n >= 1, "cycle index n must be >= 1");
    detail::require(omega0 > 0 && omegaf > 0, "frequencies must be positive");
    detail::require(omega0 != omegaf, "frictionless_tau: endpoints must differ");
    const Scalar ratio = omega0 / omegaf;
    const Scalar L = log(ratio);
    const Scalar pi = std::numbers::pi_v<Scalar>;
    return (ratio - Scalar(1)) * sqrt(Scalar(4) * Scalar(n) * Scalar(n) * pi * pi + L * L) / (Scalar(2) * omega0 * L);
}

template <typename Scalar>
AdiabatSpec<Scalar> frictionless_adiabat(Scalar omega0, Scalar omegaf, int n, NoiseSpec<Scalar> noise = {}) {
    return {omega0, omegaf, frictionless_mu(omega0, omegaf, n), noise};
}

template <typename Scalar>
Scalar omega_profile(const AdiabatSpec<Scalar>& spec, Scalar t) {
    spec.validate();
    const Scalar tau = spec.duration();
    detail::require(t >= 0 && t <= tau * (Scalar(1) + Scalar(1e-12)), "omega_profile: t outside [0, tau]");
    const Scalar denom = Scalar(1) - spec.mu * spec.omega0 * t;
    detail::require(denom > 0, "omega_profile: t at or beyond the frequency pole");
    return spec.omega0 / denom;
}

/// Dimensionless generator M = M0 + N_p + N_a of dA/(omega dt) = M A at frequency omega.
template <typename Scalar>
Matrix3<Scalar> adiabat_generator_at(Scalar mu, const NoiseSpec<Scalar>& noise, Scalar omega) {
    const Scalar p = Scalar(4) * noise.gamma_p * omega;
    const Scalar a = noise.gamma_a * omega;
    Matrix3<Scalar> m;
    m << mu + a, -mu - a, 0,
         -mu + a, mu - p - a, -2,
         0, 2, mu - p;
    return m;
}

template <typename Scalar>
Matrix3<Scalar> adiabat_generator(const AdiabatSpec<Scalar>& spec, Scalar t) {
    return adiabat_generator_at(spec.mu, spec.noise, omega_profile(spec, t));
}

namespace detail {

template <typename Scalar>
void require_tolerance(Scalar tol) {
    require(tol >= Scalar(1e-14) && tol <= Scalar(1e-4), "tolerance must lie in [1e-14, 1e-4]");
}

}  // namespace detail

/// Full adiabat propagator from numerical integration of dU/dtheta = M(theta) U.
template <typename Scalar>
SegmentPropagator<Scalar> propagate_adiabat_numeric(const AdiabatSpec<Scalar>& spec, Scalar tol,
                                                    IntegrationStats* stats = nullptr) {
    if (spec.omega0 == spec.omegaf && spec.omega0 > 0) return SegmentPropagator<Scalar>::identity();
    spec.validate();
    detail::require_tolerance(tol);
    auto rhs = [&spec](Scalar theta, const Matrix3<Scalar>& u) -> Matrix3<Scalar> {
        return adiabat_generator_at(spec.mu, spec.noise, spec.omega_at_theta(theta)) * u;
    };
    const Matrix3<Scalar> u =
        integrate_adaptive<Scalar, Matrix3<Scalar>>(rhs, Matrix3<Scalar>::Identity(), Scalar(0), spec.theta_final(), tol, stats);
    return SegmentPropagator<Scalar>::linear(u);
}

/// Non-adiabatic part U2 = exp(theta (M0 - mu I)) in closed form.
template <typename Scalar>
Matrix3<Scalar> analytic_u2(Scalar mu, Scalar theta) {
    using std::abs;
    using std::cos;
    using std::sin;
    using std::sqrt;
    detail::require(abs(mu) < 2, "analytic_u2: |mu| must be below 2");
    const Scalar om2 = Scalar(4) - mu * mu;
    const Scalar om = sqrt(om2);
    const Scalar c = cos(om * theta), s = sin(om * theta);
    Matrix3<Scalar> u;
    u << Scalar(4) - c * mu * mu, -mu * om * s, Scalar(-2) * mu * (c - 1),
         -mu * om * s, om2 * c, Scalar(-2) * om * s,
         Scalar(2) * mu * (c - 1), Scalar(2) * om * s, Scalar(4) * c - mu * mu;
    return u / om2;
}

/// Noiseless closed form U1 U2 at scaled time theta.
template <typename Scalar>
Matrix3<Scalar> analytic_u1_u2_at(const AdiabatSpec<Scalar>& spec, Scalar theta) {
    detail::require(spec.noise.silent(), "analytic_U1_U2 requires zero noise");
    return (spec.omega_at_theta(theta) / spec.omega0) * analytic_u2(spec.mu, theta);
}

/// Noiseless closed-form propagator over the whole adiabat.
template <typename Scalar>
SegmentPropagator<Scalar> analytic_U1_U2(const AdiabatSpec<Scalar>& spec) {
    spec.validate();
    detail::require(spec.noise.silent(), "analytic_U1_U2 requires zero noise");
    const Scalar theta = spec.theta_final();
    return SegmentPropagator<Scalar>::linear((spec.omegaf / spec.omega0) * analytic_u2(spec.mu, theta));
}

/// delta = [U1^-1 U](1,1) - 1: relative excess energy over perfect adiabatic following.
template <typename Scalar>
Scalar adiabaticity_delta(const SegmentPropagator<Scalar>& u_hc, Scalar omega0, Scalar omegaf) {
    return omega0 / omegaf * u_hc.matrix(0, 0) - Scalar(1);
}

template <typename Scalar = double>
struct AdiabatSample {
    Scalar theta;
    Scalar omega;
    ObservableTriple<Scalar> triple;
};

/// Samples the noisy adiabat trajectory of `initial` at `samples` equally spaced theta values.
template <typename Scalar>
std::vector<AdiabatSample<Scalar>> trace_adiabat(const AdiabatSpec<Scalar>& spec, const ObservableTriple<Scalar>& initial,
                                                 int samples, Scalar tol) {
    spec.validate();
    detail::require_tolerance(tol);
    detail::require(samples >= 2, "trace needs at least two samples");
    auto rhs = [&spec](Scalar theta, const Vector3<Scalar>& a) -> Vector3<Scalar> {
        return adiabat_generator_at(spec.mu, spec.noise, spec.omega_at_theta(theta)) * a;
    };
    DormandPrince54<Scalar, Vector3<Scalar>, decltype(rhs)> stepper(rhs, tol);

    const Scalar theta_f = spec.theta_final();
    std::vector<AdiabatSample<Scalar>> out;
    out.reserve(samples);
    // Triples are ~1e-21 J; integrate in units of the initial magnitude so the error norm sees O(1) values.
    Scalar scale = initial.vector().cwiseAbs().maxCoeff();
    if (!(scale > 0)) scale = Scalar(1);
    Vector3<Scalar> a = initial.vector() / scale;
    Scalar hint = 0;
    Scalar theta = 0;
    out.push_back({theta, spec.omega0, initial});
    for (int i = 1; i < samples; ++i) {
        const Scalar next = i == samples - 1 ? theta_f : theta_f * Scalar(i) / Scalar(samples - 1);
        a = stepper.integrate(a, theta, next, &hint);
        theta = next;
        const Scalar omega = i == samples - 1 ? spec.omegaf : spec.omega_at_theta(theta);
        out.push_back({theta, omega, ObservableTriple<Scalar>::from_vector(a * scale)});
    }
    return out;
}

}  // namespace otto
