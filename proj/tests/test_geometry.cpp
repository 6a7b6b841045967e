// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "holomimo/geometry.hpp"

using namespace holomimo;

namespace {

// Independent oracle: count integer grid points (i*pitch, j*pitch) inside the
// closed disk by exhaustive enumeration over a bounding square.
std::size_t grid_count_oracle(double radius, double pitch) {
    std::size_t count = 0;
    const long span = static_cast<long>(std::ceil(radius / pitch)) + 2;
    for (long j = -span; j <= span; ++j)
        for (long i = -span; i <= span; ++i) {
            const double x = i * pitch, y = j * pitch;
            if (x * x + y * y <= radius * radius)
                ++count;
        }
    return count;
}

} // namespace

TEST_CASE("sub-pitch disk contains only the origin") {
    const Aperture ap = sample_disk(0.4, 0.5);
    REQUIRE(ap.points.size() == 1);
    CHECK(ap.points[0].x == 0.0);
    CHECK(ap.points[0].y == 0.0);
    CHECK(ap.points[0].rho == 0.0);
    CHECK(ap.points[0].theta == 0.0);
}

TEST_CASE("radius 1 at half-wavelength pitch has 13 points") {
    // Oracle: i, j in {-2..2} with (i^2 + j^2) * 0.25 <= 1.
    CHECK(grid_count_oracle(1.0, 0.5) == 13);
    CHECK(point_count(sample_disk(1.0, 0.5)) == 13);
}

TEST_CASE("radius 10 point count matches the area estimate and the oracle") {
    const Aperture ap = sample_disk(10.0, 0.5);
    CHECK(ap.points.size() == grid_count_oracle(10.0, 0.5));
    CHECK(ap.points.size() >= 1131); // pi * 400 - 10%
    CHECK(ap.points.size() <= 1383); // pi * 400 + 10%
    CHECK(point_count(ap) == ap.points.size());
}

TEST_CASE("invalid arguments are rejected") {
    CHECK_THROWS_AS(sample_disk(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(sample_disk(-1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(sample_disk(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sample_disk(1.0, -0.5), std::invalid_argument);
}

TEST_CASE("points are contained, mirror-symmetric and deterministically ordered") {
    const Aperture ap = sample_disk(7.25, 0.5, 3.0);
    CHECK(ap.z_offset == 3.0);

    std::multiset<std::pair<double, double>> xy, x_flip, y_flip;
    for (const auto& p : ap.points) {
        CHECK(p.x * p.x + p.y * p.y <= ap.radius * ap.radius + 1e-12);
        xy.insert({p.x, p.y});
        x_flip.insert({-p.x, p.y});
        y_flip.insert({p.x, -p.y});
    }
    CHECK(xy.size() == ap.points.size()); // unique
    CHECK(xy == x_flip);
    CHECK(xy == y_flip);

    // Lexicographic (y, x) ordering.
    for (std::size_t i = 1; i < ap.points.size(); ++i) {
        const auto& a = ap.points[i - 1];
        const auto& b = ap.points[i];
        CHECK((a.y < b.y || (a.y == b.y && a.x < b.x)));
    }

    const Aperture again = sample_disk(7.25, 0.5, 3.0);
    REQUIRE(again.points.size() == ap.points.size());
    for (std::size_t i = 0; i < ap.points.size(); ++i) {
        CHECK(again.points[i].x == ap.points[i].x);
        CHECK(again.points[i].y == ap.points[i].y);
    }
}

TEST_CASE("polar coordinates are consistent with cartesian ones") {
    const Aperture ap = sample_disk(3.0, 0.5);
    for (const auto& p : ap.points) {
        CHECK(p.rho == std::hypot(p.x, p.y));
        CHECK(p.theta >= 0.0);
        CHECK(p.theta < 2.0 * std::numbers::pi);
        if (p.rho > 0.0) {
            CHECK(p.rho * std::cos(p.theta) == doctest::Approx(p.x).epsilon(1e-12));
            CHECK(p.rho * std::sin(p.theta) == doctest::Approx(p.y).epsilon(1e-12));
        }
    }
}
