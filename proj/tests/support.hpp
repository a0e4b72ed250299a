#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "otto/core.hpp"

namespace otto::test {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kOmegaCold = kTwoPi * 1000.0;  // rad/s
inline constexpr double kOmegaHot = 25.0 * kOmegaCold;
inline constexpr double kGammaP = 1e-6;  // s
inline constexpr double kGammaA = 5e-9;  // s

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

template <typename M>
double max_abs_diff(const M& a, const M& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

/// Worst per-entry relative deviation; entries whose reference is below `floor`
/// (relative to the largest reference entry) are compared absolutely against that floor.
inline double max_entry_rel_diff(const Matrix3<double>& value, const Matrix3<double>& reference, double floor = 1e-12) {
    const double scale = reference.cwiseAbs().maxCoeff();
    double worst = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double denom = std::max(std::abs(reference(i, j)), floor * scale);
            worst = std::max(worst, std::abs(value(i, j) - reference(i, j)) / denom);
        }
    return worst;
}

/// Entry-wise adaptive Gauss-Kronrod quadrature of a 3x3 matrix-valued function.
template <typename F>
Matrix3<double> integrate_matrix(F&& f, double a, double b, double rel_tol, int pieces) {
    Matrix3<double> total = Matrix3<double>::Zero();
    const double width = (b - a) / pieces;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < pieces; ++k) {
                auto entry = [&](double x) { return f(x)(i, j); };
                total(i, j) += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                    entry, a + k * width, a + (k + 1) * width, 15, rel_tol);
            }
    return total;
}

}  // namespace otto::test
