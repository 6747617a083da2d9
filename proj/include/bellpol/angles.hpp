#pragma once

#include <cmath>
#include <numbers>

namespace bellpol {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Reduce an angle to the canonical range (-pi, pi].
inline double wrap_pi(double x) {
    double r = std::remainder(x, two_pi);
    if (r <= -pi) r += two_pi;
    return r;
}

// Reduce an angle to [0, 2*pi).
inline double wrap_two_pi(double x) {
    double r = std::fmod(x, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;
    return r;
}

// Reduce an angle with period `period` to (-period/2, period/2].
inline double wrap_period(double x, double period) {
    double r = std::remainder(x, period);
    if (r <= -0.5 * period) r += period;
    return r;
}

}  // namespace bellpol
