#pragma once

#include <cmath>

#include "sldg/dg_field.hpp"

namespace sldg::detail {

// Points within this distance (in element-local units) of an interface are
// treated as lying on it.
inline constexpr double kInterfaceTol = 1e-12;

// Element(s) along one axis holding a periodically wrapped coordinate, with
// the local coordinate in [-1/2, 1/2] for each.
struct AxisLocation {
    int cells[2];
    double local[2];
    int count;
};

inline AxisLocation locate(double coord, double lo, double length, double h, int n, Side side) {
    double c = std::fmod(coord - lo, length);
    if (c < 0) c += length;
    int i = static_cast<int>(std::floor(c / h));
    if (i >= n) i = n - 1;
    if (i < 0) i = 0;
    const double s = (c - (i + 0.5) * h) / h;
    AxisLocation loc{{i, i}, {s, s}, 1};
    if (s + 0.5 <= kInterfaceTol) {
        const int lower = (i + n - 1) % n;
        if (side == Side::Upper) {
            loc.local[0] = -0.5;
        } else if (side == Side::Lower) {
            loc.cells[0] = lower;
            loc.local[0] = 0.5;
        } else {
            loc = {{lower, i}, {0.5, -0.5}, 2};
        }
    } else if (0.5 - s <= kInterfaceTol) {
        const int upper = (i + 1) % n;
        if (side == Side::Upper) {
            loc.cells[0] = upper;
            loc.local[0] = -0.5;
        } else if (side == Side::Lower) {
            loc.local[0] = 0.5;
        } else {
            loc = {{i, upper}, {0.5, -0.5}, 2};
        }
    }
    return loc;
}

}  // namespace sldg::detail
