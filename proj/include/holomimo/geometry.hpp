// SPDX-License-Identifier: Apache-2.0
//
// Disk aperture sampling on a half-wavelength Cartesian grid.
// All lengths are expressed in wavelength units throughout the library.

#ifndef HOLOMIMO_GEOMETRY_HPP
#define HOLOMIMO_GEOMETRY_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace holomimo {

struct SamplePoint {
    double x = 0.0;     // wavelengths
    double y = 0.0;     // wavelengths
    double rho = 0.0;   // sqrt(x^2 + y^2), wavelengths
    double theta = 0.0; // radians in [0, 2*pi)
};

// A disk aperture sampled on a grid anchored at the disk center.
// The point list is immutable once built and ordered lexicographically
// by (y, x), so equal arguments always yield identical orderings.
struct Aperture {
    double radius = 0.0;   // disk radius in wavelengths
    double pitch = 0.5;    // grid spacing in wavelengths
    double z_offset = 0.0; // axial plane coordinate in wavelengths
    std::vector<SamplePoint> points;
};

// Full-quadrant angle of (x, y) mapped into [0, 2*pi). The origin maps to 0.
inline double polar_angle(double x, double y) {
    if (x == 0.0 && y == 0.0)
        return 0.0;
    double th = std::atan2(y, x);
    if (th < 0.0)
        th += 2.0 * std::numbers::pi;
    return th;
}

// Samples the closed disk x^2 + y^2 <= radius^2 at grid points (i*pitch, j*pitch).
// The grid is centered so that (0,0) is always a sample. Boundary points are
// included.
inline Aperture sample_disk(double radius, double pitch, double z_offset = 0.0) {
    if (!(radius > 0.0))
        throw std::invalid_argument("sample_disk: radius must be positive");
    if (!(pitch > 0.0))
        throw std::invalid_argument("sample_disk: pitch must be positive");

    Aperture ap;
    ap.radius = radius;
    ap.pitch = pitch;
    ap.z_offset = z_offset;

    const long span = static_cast<long>(std::floor(radius / pitch));
    const double r2 = radius * radius;
    ap.points.reserve(static_cast<std::size_t>(
        std::numbers::pi * (radius / pitch) * (radius / pitch) * 1.2 + 8));
    for (long j = -span; j <= span; ++j) {
        for (long i = -span; i <= span; ++i) {
            const double x = static_cast<double>(i) * pitch;
            const double y = static_cast<double>(j) * pitch;
            if (x * x + y * y <= r2) {
                SamplePoint p;
                p.x = x;
                p.y = y;
                p.rho = std::hypot(x, y);
                p.theta = polar_angle(x, y);
                ap.points.push_back(p);
            }
        }
    }
    return ap;
}

inline std::size_t point_count(const Aperture& ap) { return ap.points.size(); }

} // namespace holomimo

#endif
