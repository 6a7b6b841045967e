// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "holomimo/channel.hpp"

using namespace holomimo;
using std::numbers::pi;

namespace {

double wrapped_phase_distance(double a, double b) {
    double d = std::remainder(a - b, 2.0 * pi);
    return std::abs(d);
}

MatrixXcd random_complex(int rows, int cols, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    MatrixXcd m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            m(i, j) = Complex(u(rng), u(rng));
    return m;
}

} // namespace

TEST_CASE("green matches the analytic magnitude and phase") {
    const Complex g1 = green({0, 0, 1}, {0, 0, 0});
    CHECK(std::abs(g1) == doctest::Approx(1.0 / (4.0 * pi)).epsilon(1e-12));
    CHECK(wrapped_phase_distance(std::arg(g1), 0.0) < 1e-9);

    const Complex g_half = green({0, 0, 0.5}, {0, 0, 0});
    CHECK(std::abs(g_half) == doctest::Approx(1.0 / (2.0 * pi)).epsilon(1e-12));
    CHECK(wrapped_phase_distance(std::arg(g_half), -pi) < 1e-9);
}

TEST_CASE("green is reciprocal and rejects coincident points") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 50; ++i) {
        const Point3 a{u(rng), u(rng), u(rng)};
        const Point3 b{u(rng), u(rng), u(rng) + 11.0};
        CHECK(std::abs(green(a, b) - green(b, a)) < 1e-15);
    }
    CHECK_THROWS_AS(green({1, 2, 3}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("green magnitude and phase on random pairs") {
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const Point3 a{u(rng), u(rng), u(rng)};
        const Point3 b{u(rng), u(rng), u(rng) + 25.0};
        const double dist = std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                                      (a.z - b.z) * (a.z - b.z));
        const Complex g = green(a, b);
        CHECK(std::abs(g) == doctest::Approx(1.0 / (4.0 * pi * dist)).epsilon(1e-12));
        CHECK(wrapped_phase_distance(std::arg(g), -2.0 * pi * dist) < 1e-9);
    }
}

TEST_CASE("single-point channel equals the scalar green value") {
    const Aperture tx = sample_disk(0.4, 0.5, 0.0);
    const Aperture rx = sample_disk(0.4, 0.5, 1.0);
    const ChannelMatrix h = build_channel(tx, rx);
    REQUIRE(h.entries.rows() == 1);
    REQUIRE(h.entries.cols() == 1);
    CHECK(h.separation == 1.0);
    CHECK(h.entries(0, 0) == green({0, 0, 1}, {0, 0, 0}));
}

TEST_CASE("swapping apertures transposes the channel") {
    const Aperture tx = sample_disk(1.0, 0.5, 0.0);
    const Aperture rx = sample_disk(1.5, 0.5, 4.0);
    const ChannelMatrix h = build_channel(tx, rx);
    const ChannelMatrix ht = build_channel(rx, tx);
    CHECK((h.entries.transpose() - ht.entries).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("channel entries match scalar recomputation") {
    const Aperture tx = sample_disk(1.0, 0.5, 0.0);
    const Aperture rx = sample_disk(1.0, 0.5, 20.0);
    const ChannelMatrix h = build_channel(tx, rx);
    const Complex expected =
        green({rx.points[0].x, rx.points[0].y, 20.0}, {tx.points[0].x, tx.points[0].y, 0.0});
    CHECK(h.entries(0, 0) == expected);

    // Energy consistency over all entries.
    double frob2 = 0.0;
    for (const auto& r : rx.points)
        for (const auto& t : tx.points) {
            const double dx = r.x - t.x, dy = r.y - t.y;
            const double dist = std::sqrt(dx * dx + dy * dy + 400.0);
            frob2 += 1.0 / (16.0 * pi * pi * dist * dist);
        }
    CHECK(h.entries.squaredNorm() == doctest::Approx(frob2).epsilon(1e-12));
}

TEST_CASE("coplanar apertures are rejected") {
    const Aperture tx = sample_disk(1.0, 0.5, 2.0);
    const Aperture rx = sample_disk(1.0, 0.5, 2.0);
    CHECK_THROWS_AS(build_channel(tx, rx), std::invalid_argument);
}

TEST_CASE("svd of a 1x1 matrix follows the phase convention") {
    ChannelMatrix h;
    h.separation = 1.0;
    h.entries = MatrixXcd::Constant(1, 1, Complex(-3.0, 4.0));
    const ChannelSVD svd = channel_svd(h);
    CHECK(svd.singular_values(0) == doctest::Approx(5.0).epsilon(1e-12));
    // Largest entry of v rotated to be real positive.
    CHECK(svd.right_vectors(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(svd.right_vectors(0, 0).imag()) < 1e-12);
    CHECK(std::abs(svd.left_vectors(0, 0) * svd.singular_values(0) *
                       std::conj(svd.right_vectors(0, 0)) -
                   h.entries(0, 0)) < 1e-12);
}

TEST_CASE("orthogonal columns give their scales as singular values") {
    ChannelMatrix h;
    h.separation = 1.0;
    h.entries = MatrixXcd::Zero(4, 2);
    h.entries(0, 0) = 3.0;
    h.entries(1, 1) = 4.0;
    const ChannelSVD svd = channel_svd(h);
    CHECK(svd.singular_values(0) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(svd.singular_values(1) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("svd invariants on random matrices") {
    for (unsigned seed : {1u, 2u, 3u}) {
        ChannelMatrix h;
        h.separation = 1.0;
        h.entries = random_complex(8, 6, seed);
        const ChannelSVD svd = channel_svd(h);

        const MatrixXcd vhv = svd.right_vectors.adjoint() * svd.right_vectors;
        CHECK((vhv - MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-10);

        for (int i = 1; i < 6; ++i)
            CHECK(svd.singular_values(i) <= svd.singular_values(i - 1));
        CHECK(svd.singular_values(5) >= 0.0);

        const MatrixXcd recon = svd.left_vectors *
                                svd.singular_values.asDiagonal() *
                                svd.right_vectors.adjoint();
        CHECK((recon - h.entries).norm() < 1e-8 * h.entries.norm());
    }
}

TEST_CASE("wide matrices decompose as well as tall ones") {
    ChannelMatrix h;
    h.separation = 1.0;
    h.entries = random_complex(5, 9, 11);
    const ChannelSVD svd = channel_svd(h);
    const MatrixXcd recon =
        svd.left_vectors * svd.singular_values.asDiagonal() * svd.right_vectors.adjoint();
    CHECK((recon - h.entries).norm() < 1e-8 * h.entries.norm());
    const MatrixXcd uhu = svd.left_vectors.adjoint() * svd.left_vectors;
    CHECK((uhu - MatrixXcd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("spectral decay: far links are closer to rank one than near links") {
    // Reduced-radius variant of the reference geometry; the ratio ordering is
    // the property under test, not the absolute values.
    const double r = 5.0;
    const double d_r = r * r / 2.0;
    const Aperture tx = sample_disk(r, 0.5, 0.0);
    Aperture rx_near = sample_disk(r, 0.5, 0.1 * d_r);
    Aperture rx_far = sample_disk(r, 0.5, 10.0 * d_r);
    const VectorXd s_near = singular_values(build_channel(tx, rx_near));
    const VectorXd s_far = singular_values(build_channel(tx, rx_far));
    CHECK(s_far(1) / s_far(0) < s_near(1) / s_near(0));
}
