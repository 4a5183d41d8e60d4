/**
 * @file  special_functions.hpp
 * @brief Bessel functions J0 and J1 of real argument (thin wrappers over <cmath>).
 */
#pragma once

#include <cmath>

namespace acphase {

inline double bessel_j0(double x) { return std::cyl_bessel_j(0.0, std::fabs(x)); }

inline double bessel_j1(double x)
{
    const double v = std::cyl_bessel_j(1.0, std::fabs(x));
    return x < 0 ? -v : v;
}

} // namespace acphase
