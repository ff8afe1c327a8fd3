#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "guessrisk/errors.hpp"

namespace guessrisk {

/// Standard normal CDF.
inline double gaussian_cdf(double x) noexcept {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/*
Inverse standard normal CDF.

First pass: P. J. Acklam's piecewise rational approximation (relative error
about 1.15e-9). One Halley step against erfc then brings the result to
near machine precision over the whole open interval.
*/
inline double inv_gaussian_cdf(double u) {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("inv_gaussian_cdf: argument must lie in (0, 1)");

    static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                             -2.759285104469687e+02, 1.383577518672690e+02,
                                             -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                             -1.556989798598866e+02, 6.680131188771972e+01,
                                             -1.328068155288572e+01};
    static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                             -2.400758277161838e+00, -2.549732539343734e+00,
                                             4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                             2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double low = 0.02425;

    auto tail = [&](double q) {
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    };

    double x;
    if (u < low) {
        x = tail(std::sqrt(-2.0 * std::log(u)));
    } else if (u > 1.0 - low) {
        x = -tail(std::sqrt(-2.0 * std::log1p(-u)));
    } else {
        const double q = u - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }

    // Halley refinement. In the upper half work with the complementary
    // probability to avoid cancellation in 1 - u.
    const double e = (u <= 0.5) ? gaussian_cdf(x) - u : (1.0 - u) - 0.5 * std::erfc(x / std::numbers::sqrt2);
    const double step = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - step / (1.0 + 0.5 * x * step);
}

} // namespace guessrisk
