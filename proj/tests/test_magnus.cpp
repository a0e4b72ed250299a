#include <doctest.h>

#include <cmath>

#include "otto/magnus.hpp"
#include "support.hpp"

using namespace otto;
using otto::test::kGammaA;
using otto::test::kGammaP;
using otto::test::kOmegaCold;
using otto::test::kOmegaHot;
using otto::test::kTwoPi;

namespace {

const NoiseSpec<double> kBoth{kGammaP, kGammaA};
const NoiseSpec<double> kPhase{kGammaP, 0.0};
const NoiseSpec<double> kAmplitude{0.0, kGammaA};

AdiabatSpec<double> expansion(int n, NoiseSpec<double> noise = kBoth) {
    return frictionless_adiabat(kOmegaHot, kOmegaCold, n, noise);
}

// Noise part of the generator, rotated into the interaction picture by the closed-form U2.
Matrix3<double> rotated_noise(const AdiabatSpec<double>& spec, double x) {
    const double theta = x / spec.big_omega();
    const double omega = spec.omega_at_theta(theta);
    const Matrix3<double> noise =
        adiabat_generator_at(spec.mu, spec.noise, omega) - adiabat_generator_at(spec.mu, NoiseSpec<double>{}, omega);
    const Matrix3<double> u2 = analytic_u2(spec.mu, theta);
    return u2.inverse() * noise * u2;
}

}  // namespace

TEST_CASE("phase generator at X = 0") {
    const auto spec = expansion(1, kPhase);
    const double mu = spec.mu, om = spec.big_omega();
    const double pref = 4 * kGammaP * kOmegaHot / std::pow(om, 4);
    const Matrix3<double> w = w_phase(spec, 0.0);

    // c = 1, s = 0 substituted entry by entry
    Matrix3<double> expected = Matrix3<double>::Zero();
    expected(1, 1) = -(mu * mu * (0 - 1) + 4) * om * om;
    expected(2, 2) = -(mu * mu * (mu * mu - 8) + 16);
    CHECK(test::max_abs_diff(w, Matrix3<double>(pref * expected)) < 1e-15 * w.cwiseAbs().maxCoeff());

    // U2(0) = I, so W_p(0) is the bare phase-noise term -4 gamma_p omega0 diag(0, 1, 1).
    const Matrix3<double> bare = Vector3<double>(0, -4 * kGammaP * kOmegaHot, -4 * kGammaP * kOmegaHot).asDiagonal();
    CHECK(test::max_abs_diff(w, bare) < 1e-14 * bare.cwiseAbs().maxCoeff());
}

TEST_CASE("phase generator structure") {
    const auto spec = expansion(3, kPhase);
    for (double x = 0; x < 6 * std::numbers::pi; x += 0.173) {
        const Matrix3<double> w = w_phase(spec, x);
        CHECK(std::abs(w(0, 2) + w(2, 0)) <= 1e-15 * w.cwiseAbs().maxCoeff());
        CHECK(std::abs(w(0, 1) + w(1, 0)) <= 1e-15 * w.cwiseAbs().maxCoeff());
    }
    CHECK(w_phase(expansion(3, kAmplitude), 1.3) == Matrix3<double>::Zero());
}

TEST_CASE("amplitude generator at X = 0 and structure") {
    const auto spec = expansion(1, kAmplitude);
    const double om = spec.big_omega();
    const Matrix3<double> w = w_amplitude(spec, 0.0);
    const double pref = kGammaA * kOmegaHot / std::pow(om, 4);
    CHECK(test::rel_diff(w(0, 0), pref * std::pow(4 - spec.mu * spec.mu, 2)) < 1e-14);

    Matrix3<double> bare;
    bare << 1, -1, 0, 1, -1, 0, 0, 0, 0;
    bare *= kGammaA * kOmegaHot;
    CHECK(test::max_abs_diff(w, bare) < 1e-14 * kGammaA * kOmegaHot);

    for (double x : {std::numbers::pi / 2, 3 * std::numbers::pi / 2, 5 * std::numbers::pi / 2}) {
        const Matrix3<double> v = w_amplitude(spec, x);
        CHECK(std::abs(v(0, 1) + v(1, 0)) <= 1e-14 * v.cwiseAbs().maxCoeff());
    }
    for (double x = 0; x < 4 * std::numbers::pi; x += 0.29) {
        const Matrix3<double> v = w_amplitude(spec, x);
        CHECK(v(0, 0) >= 0);
        CHECK(v(1, 1) <= 0);
        CHECK(v(2, 2) <= 0);
    }
    CHECK(w_amplitude(expansion(1, kPhase), 0.7) == Matrix3<double>::Zero());
}

TEST_CASE("displayed generators equal the rotated noise terms") {
    for (int n : {1, 4, 14}) {
        const auto spec = expansion(n);
        for (double x = 0; x < 2 * n * std::numbers::pi; x += 0.41) {
            const Matrix3<double> reference = rotated_noise(spec, x);
            CHECK(test::max_abs_diff(w_channel(spec, NoiseChannel::both, x), reference) <
                  1e-12 * reference.cwiseAbs().maxCoeff());
        }
    }
}

TEST_CASE("interaction-picture propagation") {
    const auto silent = expansion(2, NoiseSpec<double>{});
    const auto r = propagate_U3_numeric(silent, NoiseChannel::both, 1e-10);
    CHECK(r.u3 == Matrix3<double>::Identity());
    CHECK(r.delta == 0);
    CHECK(r.order == MagnusOrder::exact_numeric);

    // scipy DOP853 on the full equation, tests/oracles/derive_values.py
    CHECK(test::rel_diff(propagate_U3_numeric(expansion(1), NoiseChannel::phase, 1e-12).delta, 0.283558195361075) < 1e-8);
    CHECK(test::rel_diff(propagate_U3_numeric(expansion(1), NoiseChannel::amplitude, 1e-12).delta,
                         0.000929050998849323) < 1e-6);

    CHECK_THROWS_AS(propagate_U3_numeric(AdiabatSpec<double>{kOmegaHot, kOmegaCold, -0.5, kBoth}, NoiseChannel::phase, 1e-10),
                    DomainError);
}

TEST_CASE("U1 U2 U3 factorization reproduces the full propagator") {
    const double tol = 1e-10;
    for (int n : {1, 3, 14}) {
        const auto spec = expansion(n);
        const Matrix3<double> u3 = propagate_U3_numeric(spec, NoiseChannel::both, tol).u3;
        const Matrix3<double> full = propagate_adiabat_numeric(spec, tol).matrix;
        CHECK(test::max_abs_diff(Matrix3<double>((spec.omegaf / spec.omega0) * u3), full) < 10 * tol);
    }
}

TEST_CASE("F simplifies for quantized mu") {
    const auto spec = expansion(1);
    // mpmath, tests/oracles/derive_values.py
    CHECK(test::rel_diff(magnus_f(spec.mu, kOmegaHot, kOmegaCold), -178651.35005367663) < 1e-13);
    for (int n : {1, 5, 14, 30}) {
        const auto s = expansion(n);
        CHECK(test::rel_diff(magnus_f(s.mu, kOmegaHot, kOmegaCold), magnus_f_raw(s.mu, kOmegaHot, double(n))) < 1e-10);
        CHECK(std::abs(std::exp(2 * n * std::numbers::pi * s.mu / s.big_omega()) - 0.04) < 1e-14);
    }
}

TEST_CASE("first-order Magnus terms match quadrature") {
    for (int n : {1, 2, 5, 14, 30}) {
        const auto spec = expansion(n);
        const double om = spec.big_omega();
        const double end = 2 * n * std::numbers::pi;
        const auto bp = test::integrate_matrix([&](double x) { return Matrix3<double>(w_phase(spec, x) / om); }, 0.0, end,
                                               1e-12, 4 * n);
        const auto ba = test::integrate_matrix([&](double x) { return Matrix3<double>(w_amplitude(spec, x) / om); }, 0.0,
                                               end, 1e-12, 4 * n);
        CHECK(test::max_entry_rel_diff(b1_phase(spec, n), bp) < 1e-6);
        CHECK(test::max_entry_rel_diff(b1_amplitude(spec, n), ba) < 1e-6);
    }
    CHECK(b1_phase(expansion(2, kAmplitude), 2) == Matrix3<double>::Zero());
    CHECK(b1_amplitude(expansion(2, kPhase), 2) == Matrix3<double>::Zero());
    CHECK_THROWS_AS(b1_phase(expansion(2), 3), DomainError);
}

TEST_CASE("amplitude (1,1) entry dominates for small mu") {
    const auto spec = expansion(200);
    const Matrix3<double> b = b1_amplitude(spec, 200);
    const double ratio = std::abs(b(0, 0)) / b.cwiseAbs().maxCoeff();
    CHECK(ratio == 1.0);
    CHECK(test::rel_diff(b(0, 0) / b(1, 1), -2.0) < 1e-3);
}

TEST_CASE("first-order phase delta") {
    // mpmath, tests/oracles/derive_values.py
    CHECK(test::rel_diff(delta_p_first(expansion(1), 1), 0.17693323094651027) < 1e-13);
    CHECK(test::rel_diff(delta_p_first(expansion(14), 14), 0.011101000296945922) < 1e-13);
    CHECK(delta_p_first(expansion(1, kAmplitude), 1) == 0);
    CHECK(delta_p_first(expansion(100000), 100000) < 1e-5);

    double previous = delta_p_first(expansion(3), 3);
    for (int n = 4; n <= 30; ++n) {
        const double d = delta_p_first(expansion(n), n);
        CHECK(d < previous);
        CHECK(d > 0);
        previous = d;
    }

    const auto first = magnus_phase_first(expansion(1), 1);
    CHECK(first.order == MagnusOrder::first);
    CHECK(test::rel_diff(first.u3(0, 0) - 1, first.delta) < 1e-12);
}

TEST_CASE("second-order phase delta") {
    // mpmath, tests/oracles/derive_values.py
    CHECK(test::rel_diff(delta_p_second(expansion(1), 1), 0.0018421119902998743) < 1e-12);
    CHECK(test::rel_diff(delta_p_second(expansion(14), 14), 0.0048200288236552593) < 1e-12);
    const double plateau = delta_p_second_limit(kOmegaHot, kOmegaCold, kGammaP);
    CHECK(test::rel_diff(plateau, 0.004858811149654109) < 1e-12);
    for (int n = 1; n <= 300; ++n) CHECK(delta_p_second(expansion(n), n) <= plateau + 1e-12);
    CHECK(test::rel_diff(delta_p_second(expansion(100000), 100000), plateau) < 1e-9);
    CHECK(delta_p_second(expansion(5, kAmplitude), 5) == 0);

    const auto second = magnus_phase_second(expansion(1), 1);
    CHECK(second.order == MagnusOrder::second);
    CHECK(test::rel_diff(second.u3(0, 0) - 1, second.delta) < 1e-10);
}

TEST_CASE("amplitude delta") {
    // mpmath, tests/oracles/derive_values.py
    CHECK(test::rel_diff(delta_a(expansion(1), 1), 0.00098003592671067892) < 1e-13);
    CHECK(test::rel_diff(delta_a(expansion(14), 14), 0.01037298982679637) < 1e-13);
    CHECK(delta_a(expansion(3, kPhase), 3) == 0);
    double previous = 0;
    for (int n = 1; n <= 200; ++n) {
        const double d = delta_a(expansion(n), n);
        CHECK(d > previous);
        previous = d;
    }
    CHECK(delta_a(expansion(20000), 20000) > 10);

    const auto first = magnus_amplitude_first(expansion(1), 1);
    CHECK(test::rel_diff(first.u3(0, 0) - 1, first.delta) < 1e-12);
}

TEST_CASE("combined delta") {
    for (int n : {1, 7, 14, 30}) {
        const auto c = delta_combined(expansion(n), n);
        CHECK(c.additive == c.phase + c.amplitude);
        CHECK(std::abs(c.product - c.additive) <= c.phase * c.amplitude * (1 + 1e-12));
        CHECK(c.product >= c.additive);
    }
    const auto c14 = delta_combined(expansion(14), 14);
    CHECK(std::abs(c14.phase - 1.07e-2) < 5e-4);
    CHECK(std::abs(c14.amplitude - 1.07e-2) < 5e-4);

    const auto only_a = delta_combined(expansion(5, kAmplitude), 5);
    CHECK(only_a.additive == only_a.amplitude);
    CHECK(only_a.product == only_a.amplitude);
    const auto only_p = delta_combined(expansion(5, kPhase), 5);
    CHECK(only_p.additive == only_p.phase);
}

TEST_CASE("channels cross at mu = -sqrt(gamma_a / gamma_p)") {
    const double mu = -std::sqrt(kGammaA / kGammaP);
    const double dp = delta_p_closed_form(mu, kOmegaHot, kOmegaCold, kGammaP);
    const double da = delta_a_closed_form(mu, kOmegaHot, kOmegaCold, kGammaA);
    CHECK(test::rel_diff(dp, da) < 1e-12);
}

TEST_CASE("optimal cycle index") {
    const auto opt = n_optimal(kOmegaHot, kOmegaCold, kBoth);
    // mpmath: sqrt(799) ln 25 / (2 pi)
    CHECK(test::rel_diff(opt.n_continuous, 14.480973022130399) < 1e-13);
    CHECK(opt.crossing_residual < 1e-9);
    CHECK((opt.n_integer == 14 || opt.n_integer == 15));

    const double d14 = delta_combined(expansion(14), 14).additive;
    const double d15 = delta_combined(expansion(15), 15).additive;
    CHECK(opt.n_integer == (d15 < d14 - 1e-12 ? 15 : 14));

    CHECK(n_optimal(1.0 + 1e-9, 1.0, kBoth).n_continuous < 1e-7);
    CHECK(n_optimal(kOmegaHot, kOmegaCold, NoiseSpec<double>{kGammaP, 4 * kGammaP * (1 - 1e-12)}).n_continuous < 1e-5);
    CHECK(n_optimal(kOmegaHot, kOmegaCold, NoiseSpec<double>{kGammaP, 4 * kGammaP * (1 - 1e-12)}).n_integer == 1);

    CHECK_THROWS_AS(n_optimal(kOmegaHot, kOmegaCold, NoiseSpec<double>{kGammaP, 4 * kGammaP}), DomainError);
    CHECK_THROWS_AS(n_optimal(kOmegaHot, kOmegaCold, kPhase), DomainError);
    CHECK_THROWS_AS(n_optimal(kOmegaHot, kOmegaHot, kBoth), DomainError);
}

TEST_CASE("delta at the optimum") {
    const auto d = delta_at_optimum(kOmegaHot, kOmegaCold, kBoth);
    // mpmath, tests/oracles/derive_values.py
    CHECK(test::rel_diff(d.printed, 0.010730083751504295) < 1e-13);
    CHECK(d.additive == 2 * d.printed);
    CHECK(test::rel_diff(d.product, (1 + d.printed) * (1 + d.printed) - 1) < 1e-13);

    const double mu = -std::sqrt(kGammaA / kGammaP);
    CHECK(test::rel_diff(d.printed, delta_a_closed_form(mu, kOmegaHot, kOmegaCold, kGammaA)) < 1e-9);

    CHECK(delta_at_optimum(kOmegaHot, kOmegaCold, NoiseSpec<double>{kGammaP, 1e-20}).printed < 1e-6);
    CHECK(delta_at_optimum(kOmegaHot, kOmegaCold, NoiseSpec<double>{}).printed == 0);
    CHECK_THROWS_AS(delta_at_optimum(kOmegaHot, kOmegaCold, NoiseSpec<double>{kGammaA, kGammaP}), DomainError);
}
