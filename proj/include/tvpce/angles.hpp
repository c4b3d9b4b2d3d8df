#pragma once

#include <cmath>
#include <numbers>

namespace tvpce {

inline constexpr double pi = std::numbers::pi;

// Maps any angle onto (-pi, pi].
inline double wrap_angle(double w)
{
    double r = std::remainder(w, 2.0 * pi);
    if (r <= -pi)
        r += 2.0 * pi;
    return r;
}

// Shortest distance between two angles on the circle, in [0, pi].
inline double angular_distance(double a, double b)
{
    return std::abs(std::remainder(a - b, 2.0 * pi));
}

} // namespace tvpce
