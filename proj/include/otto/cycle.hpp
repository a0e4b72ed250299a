#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <utility>

#include <Eigen/Eigenvalues>

#include "otto/adiabat.hpp"
#include "otto/isochore.hpp"
#include "otto/magnus.hpp"

namespace otto {

/// Four-stroke Otto refrigerator: hot isochore, expansion, cold isochore, compression.
template <typename Scalar = double>
struct CycleConfig {
    BathSpec<Scalar> hot;
    BathSpec<Scalar> cold;
    int n_expansion = 1;
    int n_compression = 1;
    NoiseSpec<Scalar> noise{};
    /// (hot, cold) contact times in seconds; 6 / Gamma of each bath when absent.
    std::optional<std::pair<Scalar, Scalar>> isochore_durations{};

    void validate() const {
        hot.validate();
        cold.validate();
        noise.validate();
        detail::require(hot.omega > cold.omega, "cycle: hot frequency must exceed cold frequency");
        detail::require(hot.temperature > cold.temperature, "cycle: hot bath must be warmer than cold bath");
        detail::require(n_expansion >= 1 && n_compression >= 1, "cycle: cycle indices must be >= 1");
        if (isochore_durations) {
            detail::require(isochore_durations->first >= 0 && isochore_durations->second >= 0,
                            "cycle: isochore durations must be non-negative");
        }
    }

    IsochoreSegment<Scalar> hot_isochore() const {
        return {hot, isochore_durations ? isochore_durations->first : default_isochore_duration(hot)};
    }
    IsochoreSegment<Scalar> cold_isochore() const {
        return {cold, isochore_durations ? isochore_durations->second : default_isochore_duration(cold)};
    }
    AdiabatSpec<Scalar> expansion() const { return adiabat(hot.omega, cold.omega, n_expansion); }
    AdiabatSpec<Scalar> compression() const { return adiabat(cold.omega, hot.omega, n_compression); }

  private:
    AdiabatSpec<Scalar> adiabat(Scalar w0, Scalar wf, int n) const {
        if (w0 == wf) return {w0, wf, Scalar(0), noise};
        return frictionless_adiabat(w0, wf, n, noise);
    }
};

/// The four segment maps in cycle order.
template <typename Scalar = double>
struct CycleSegments {
    SegmentPropagator<Scalar> hot;
    SegmentPropagator<Scalar> expansion;
    SegmentPropagator<Scalar> cold;
    SegmentPropagator<Scalar> compression;

    SegmentPropagator<Scalar> cycle() const { return compression * cold * expansion * hot; }
};

template <typename Scalar = double>
struct CycleReport {
    ObservableTriple<Scalar> limit_triple_start_hot;
    /// States after the hot isochore, expansion, cold isochore and compression.
    std::array<ObservableTriple<Scalar>, 4> segment_ends{};
    Scalar q_cold{0};
    Scalar q_hot{0};
    Scalar w_net{0};
    std::optional<Scalar> cop{};  // only when the cold bath is actually cooled
    Scalar delta_expansion{0};
    Scalar delta_compression{0};
    Scalar first_law_residual{0};  // |q_cold + q_hot + w_net| / max(|q_cold|, |q_hot|, |w_net|)
    bool converged{false};

    bool refrigerating() const { return q_cold > 0; }
};

/// Builds every segment map. Frequencies may coincide (degenerate adiabats are identities);
/// the remaining checks match CycleConfig::validate.
template <typename Scalar>
CycleSegments<Scalar> cycle_segments(const CycleConfig<Scalar>& config, Scalar tol) {
    config.hot.validate();
    config.cold.validate();
    config.noise.validate();
    detail::require(config.hot.omega >= config.cold.omega, "cycle: hot frequency below cold frequency");
    CycleSegments<Scalar> s;
    s.hot = isochore_propagator(config.hot_isochore());
    s.expansion = propagate_adiabat_numeric(config.expansion(), tol);
    s.cold = isochore_propagator(config.cold_isochore());
    s.compression = propagate_adiabat_numeric(config.compression(), tol);
    return s;
}

/// One-cycle affine map U_ch U_c U_hc U_h acting on the state entering the hot isochore.
template <typename Scalar>
SegmentPropagator<Scalar> compose_cycle(const CycleConfig<Scalar>& config, Scalar tol) {
    return cycle_segments(config, tol).cycle();
}

template <typename Scalar>
Scalar spectral_radius(const Matrix3<Scalar>& m) {
    Eigen::EigenSolver<Matrix3<Scalar>> solver(m, false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

/// Fixed point A* = M A* + c of a contractive affine cycle map.
template <typename Scalar>
ObservableTriple<Scalar> limit_cycle_of(const SegmentPropagator<Scalar>& cycle) {
    if (!(spectral_radius(cycle.matrix) < Scalar(1))) {
        throw NonContractiveError("cycle map is not contractive (spectral radius >= 1)");
    }
    const Matrix3<Scalar> system = Matrix3<Scalar>::Identity() - cycle.matrix;
    Vector3<Scalar> a = system.fullPivLu().solve(cycle.offset);
    // One step of iterative refinement; the offset is ~1e-20 J so absolute residuals are tiny
    // but the relative residual is what the first-law audit sees.
    a += system.fullPivLu().solve(cycle.offset - system * a);
    return ObservableTriple<Scalar>::from_vector(a);
}

template <typename Scalar>
ObservableTriple<Scalar> find_limit_cycle(const CycleConfig<Scalar>& config, Scalar tol) {
    config.validate();
    return limit_cycle_of(compose_cycle(config, tol));
}

/// Heats and work on the limit cycle. Energy flowing into the medium is positive.
template <typename Scalar>
CycleReport<Scalar> cycle_energetics(const CycleConfig<Scalar>& config, Scalar tol) {
    using std::abs;
    config.validate();
    const CycleSegments<Scalar> seg = cycle_segments(config, tol);

    CycleReport<Scalar> r;
    r.limit_triple_start_hot = limit_cycle_of(seg.cycle());
    r.segment_ends[0] = seg.hot.apply(r.limit_triple_start_hot);
    r.segment_ends[1] = seg.expansion.apply(r.segment_ends[0]);
    r.segment_ends[2] = seg.cold.apply(r.segment_ends[1]);
    r.segment_ends[3] = seg.compression.apply(r.segment_ends[2]);

    const Scalar h0 = r.limit_triple_start_hot.h;
    const Scalar h1 = r.segment_ends[0].h, h2 = r.segment_ends[1].h, h3 = r.segment_ends[2].h,
                 h4 = r.segment_ends[3].h;
    r.q_hot = h1 - h0;
    r.q_cold = h3 - h2;
    r.w_net = (h2 - h1) + (h4 - h3);
    if (r.q_cold > 0 && r.w_net != 0) r.cop = r.q_cold / abs(r.w_net);

    r.delta_expansion = adiabaticity_delta(seg.expansion, config.hot.omega, config.cold.omega);
    r.delta_compression = adiabaticity_delta(seg.compression, config.cold.omega, config.hot.omega);

    const Scalar scale = std::max({abs(r.q_cold), abs(r.q_hot), abs(r.w_net)});
    r.first_law_residual = scale > 0 ? abs(r.q_cold + r.q_hot + r.w_net) / scale : Scalar(0);
    r.converged = r.first_law_residual < Scalar(1e-9);
    return r;
}

/// Heat extractable from the cold bath when the expansion starts from hot equilibrium:
/// Q0(max) - (hbar omega_c / 2) delta coth(hbar omega_h / 2 kB T_h).
template <typename Scalar>
Scalar max_heat(const CycleConfig<Scalar>& config, Scalar delta) {
    config.validate();
    detail::require(delta >= 0, "max_heat: delta must be non-negative");
    using C = PhysicalConstants<Scalar>;
    const Scalar half_quantum = C::hbar * config.cold.omega / Scalar(2);
    const Scalar coth_hot = coth(half_quantum_ratio(config.hot.omega, config.hot.temperature));
    const Scalar coth_cold = coth(half_quantum_ratio(config.cold.omega, config.cold.temperature));
    return half_quantum * (coth_cold - coth_hot) - half_quantum * delta * coth_hot;
}

/// Lowest cold-bath temperature that still admits refrigeration for adiabaticity measure delta.
template <typename Scalar>
Scalar tc_bound(Scalar omega_c, Scalar omega_h, Scalar t_h, Scalar delta) {
    using std::expm1;
    using std::isfinite;
    using std::log;
    using std::log1p;
    using std::max;
    detail::require(omega_c > 0 && omega_h > 0 && t_h > 0, "tc_bound: frequencies and temperature must be positive");
    detail::require(delta >= 0, "tc_bound: delta must be non-negative");
    using C = PhysicalConstants<Scalar>;
    const Scalar x = half_quantum_ratio(omega_h, t_h);
    const Scalar c = coth(x);
    // arccoth(y) = log1p(2 / (y - 1)) / 2 with y - 1 = delta coth(x) + (coth(x) - 1) formed without
    // cancellation; coth(x) rounds to 1 once hbar omega_h >> kB T_h.
    const Scalar excess = delta * c + Scalar(2) / expm1(Scalar(2) * x);
    Scalar a;
    if (excess > Scalar(1e-300)) {
        a = log1p(Scalar(2) / excess) / Scalar(2);
    } else {
        // Deep quantum regime: work with logarithms, log(coth(x) - 1) = log 2 - 2x - log(1 - e^-2x).
        const Scalar log_tail = log(Scalar(2)) - Scalar(2) * x - log(-expm1(Scalar(-2) * x));
        Scalar log_excess = log_tail;
        if (delta > 0) {
            const Scalar log_friction = log(delta) + log(c);
            const Scalar hi = max(log_friction, log_tail), lo = log_friction + log_tail - hi;
            log_excess = hi + log1p(std::exp(lo - hi));
        }
        a = (log((Scalar(1) + delta) * c + Scalar(1)) - log_excess) / Scalar(2);
    }
    detail::require(isfinite(a) && a > 0, "tc_bound: arccoth argument must exceed 1");
    return C::hbar * omega_c / (Scalar(2) * C::kB * a);
}

template <typename Scalar>
Scalar carnot_temperature(Scalar omega_c, Scalar omega_h, Scalar t_h) {
    return omega_c / omega_h * t_h;
}

/// Temperature bound at the optimal cycle index for combined phase and amplitude noise.
/// Uses the single-channel delta at the crossing point; zero noise gives the Carnot limit.
template <typename Scalar>
Scalar minimum_temperature(Scalar omega_c, Scalar omega_h, Scalar t_h, const NoiseSpec<Scalar>& noise) {
    return tc_bound(omega_c, omega_h, t_h, delta_at_optimum(omega_h, omega_c, noise).printed);
}

}  // namespace otto
