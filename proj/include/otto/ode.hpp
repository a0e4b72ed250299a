#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "otto/errors.hpp"

namespace otto {

struct IntegrationStats {
    long accepted = 0;
    long rejected = 0;
    long evaluations = 0;
};

/// Adaptive Dormand-Prince 5(4) integration with a PI step-size controller.
///
/// `State` is any fixed-size Eigen matrix or vector; `rhs(t, y)` returns dy/dt.
/// The local error of every accepted step satisfies
///   rms_i( err_i / (tol * (1 + max(|y_i|, |y_new_i|))) ) <= 1.
/// `step_hint`, when given, seeds the first step and receives the last
/// accepted step so that consecutive calls on adjacent intervals stay cheap.
template <typename Scalar, typename State, typename Rhs>
class DormandPrince54 {
  public:
    DormandPrince54(Rhs rhs, Scalar tol) : rhs_(std::move(rhs)), tol_(tol) {}

    State integrate(State y, Scalar t0, Scalar t1, Scalar* step_hint = nullptr) {
        using std::abs;
        if (t1 == t0) return y;
        const Scalar direction = t1 > t0 ? Scalar(1) : Scalar(-1);
        const Scalar span = abs(t1 - t0);

        State k1 = eval(t0, y);
        Scalar h = (step_hint && *step_hint > 0) ? *step_hint : initial_step(t0, y, k1, span);
        h = std::min(h, span);

        Scalar t = t0;
        Scalar previous_error = Scalar(1e-4);
        bool last_rejected = false;

        while (direction * (t1 - t) > 0) {
            if (stats_.accepted + stats_.rejected > kMaxSteps) throw IntegratorError("integrator: step budget exhausted");
            const Scalar remaining = abs(t1 - t);
            const bool final_step = h >= remaining;
            if (final_step) h = remaining;
            const Scalar min_step = Scalar(16) * std::numeric_limits<Scalar>::epsilon() * std::max(abs(t), span);
            if (h < min_step) throw IntegratorError("integrator: step size underflow at t = " + std::to_string(double(t)));

            const Scalar hs = direction * h;
            const State k2 = eval(t + hs * c2, y + hs * (a21 * k1));
            const State k3 = eval(t + hs * c3, y + hs * (a31 * k1 + a32 * k2));
            const State k4 = eval(t + hs * c4, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
            const State k5 = eval(t + hs * c5, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            const State k6 = eval(t + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const State y_new = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const State k7 = eval(t + hs, y_new);
            const State err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            const Scalar error = error_norm(err, y, y_new);
            if (!std::isfinite(double(error))) throw IntegratorError("integrator: non-finite error estimate");

            if (error <= 1) {
                ++stats_.accepted;
                t = final_step ? t1 : t + hs;
                y = y_new;
                k1 = k7;  // first-same-as-last
                Scalar factor = kSafety * pow_(error, -kAlpha) * pow_(previous_error, kBeta);
                factor = std::clamp(factor, kMinFactor, kMaxFactor);
                if (last_rejected) factor = std::min(factor, Scalar(1));
                previous_error = std::max(error, Scalar(1e-4));
                if (!final_step || step_hint) h *= factor;
                last_rejected = false;
            } else {
                ++stats_.rejected;
                h *= std::max(kMinFactor, kSafety * pow_(error, -kAlpha));
                last_rejected = true;
            }
        }
        if (step_hint) *step_hint = h;
        return y;
    }

    const IntegrationStats& stats() const { return stats_; }

  private:
    State eval(Scalar t, const State& y) {
        ++stats_.evaluations;
        return rhs_(t, y);
    }

    Scalar error_norm(const State& err, const State& y0, const State& y1) const {
        const auto scale = (y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array() + Scalar(1)) * tol_;
        return std::sqrt(double((err.array() / scale).square().mean()));
    }

    // Hairer, Norsett & Wanner's starting-step heuristic.
    Scalar initial_step(Scalar t0, const State& y0, const State& f0, Scalar span) {
        const auto scale = (y0.cwiseAbs().array() + Scalar(1)) * tol_;
        const Scalar d0 = std::sqrt(double((y0.array() / scale).square().mean()));
        const Scalar d1 = std::sqrt(double((f0.array() / scale).square().mean()));
        Scalar h0 = (d0 < Scalar(1e-5) || d1 < Scalar(1e-5)) ? Scalar(1e-6) : Scalar(0.01) * d0 / d1;
        h0 = std::min(h0, span);
        const State f1 = eval(t0 + h0, y0 + h0 * f0);
        const Scalar d2 = std::sqrt(double(((f1 - f0).array() / scale).square().mean())) / h0;
        const Scalar dmax = std::max(d1, d2);
        const Scalar h1 = dmax <= Scalar(1e-15) ? std::max(Scalar(1e-6), h0 * Scalar(1e-3))
                                                : Scalar(std::pow(double(Scalar(0.01) / dmax), 0.2));
        return std::min({Scalar(100) * h0, h1, span});
    }

    static Scalar pow_(Scalar x, Scalar e) { return Scalar(std::pow(double(x), double(e))); }

    static constexpr long kMaxSteps = 50'000'000;
    static constexpr Scalar kSafety = Scalar(0.9);
    static constexpr Scalar kBeta = Scalar(0.04);
    static constexpr Scalar kAlpha = Scalar(0.2) - kBeta * Scalar(0.75);
    static constexpr Scalar kMinFactor = Scalar(0.2);
    static constexpr Scalar kMaxFactor = Scalar(10);

    static constexpr Scalar c2 = Scalar(1) / 5, c3 = Scalar(3) / 10, c4 = Scalar(4) / 5, c5 = Scalar(8) / 9;
    static constexpr Scalar a21 = Scalar(1) / 5;
    static constexpr Scalar a31 = Scalar(3) / 40, a32 = Scalar(9) / 40;
    static constexpr Scalar a41 = Scalar(44) / 45, a42 = Scalar(-56) / 15, a43 = Scalar(32) / 9;
    static constexpr Scalar a51 = Scalar(19372) / 6561, a52 = Scalar(-25360) / 2187, a53 = Scalar(64448) / 6561,
                            a54 = Scalar(-212) / 729;
    static constexpr Scalar a61 = Scalar(9017) / 3168, a62 = Scalar(-355) / 33, a63 = Scalar(46732) / 5247,
                            a64 = Scalar(49) / 176, a65 = Scalar(-5103) / 18656;
    static constexpr Scalar b1 = Scalar(35) / 384, b3 = Scalar(500) / 1113, b4 = Scalar(125) / 192,
                            b5 = Scalar(-2187) / 6784, b6 = Scalar(11) / 84;
    // Difference between the fifth- and fourth-order weights.
    static constexpr Scalar e1 = Scalar(71) / 57600, e3 = Scalar(-71) / 16695, e4 = Scalar(71) / 1920,
                            e5 = Scalar(-17253) / 339200, e6 = Scalar(22) / 525, e7 = Scalar(-1) / 40;

    Rhs rhs_;
    Scalar tol_;
    IntegrationStats stats_;
};

template <typename Scalar, typename State, typename Rhs>
State integrate_adaptive(Rhs&& rhs, const State& y0, Scalar t0, Scalar t1, Scalar tol,
                         IntegrationStats* stats = nullptr) {
    DormandPrince54<Scalar, State, std::decay_t<Rhs>> stepper(std::forward<Rhs>(rhs), tol);
    State y = stepper.integrate(y0, t0, t1);
    if (stats) *stats = stepper.stats();
    return y;
}

}  // namespace otto
