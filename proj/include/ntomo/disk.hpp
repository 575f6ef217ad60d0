#pragma once

#include <cmath>

namespace ntomo {

// A point of the closed unit disk, cartesian coordinates.
struct DiskPoint {
    double x = 0.0;
    double y = 0.0;

    static DiskPoint polar(double r, double theta) {
        return {r * std::cos(theta), r * std::sin(theta)};
    }
    double radius() const { return std::hypot(x, y); }
    double angle() const { return std::atan2(y, x); }
};

}  // namespace ntomo
