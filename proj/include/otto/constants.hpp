#pragma once

namespace otto {

/// CODATA 2018 exact values in SI units.
template <typename Scalar = double>
struct PhysicalConstants {
    static constexpr Scalar hbar = Scalar(1.054571817e-34L);  // J s
    static constexpr Scalar kB = Scalar(1.380649e-23L);       // J / K
};

}  // namespace otto
