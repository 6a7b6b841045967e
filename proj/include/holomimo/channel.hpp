// SPDX-License-Identifier: Apache-2.0
//
// Scalar free-space Green's function and the discretized LoS channel matrix
// between two parallel disk apertures, plus its singular value decomposition.

#ifndef HOLOMIMO_CHANNEL_HPP
#define HOLOMIMO_CHANNEL_HPP

#include <Eigen/Dense>
#include <lapacke.h>

#include <algorithm>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "holomimo/geometry.hpp"

namespace holomimo {

using Complex = std::complex<double>;
using MatrixXcd = Eigen::MatrixXcd;
using VectorXd = Eigen::VectorXd;

struct Point3 {
    double x, y, z; // wavelengths
};

struct ChannelMatrix {
    MatrixXcd entries; // N_r x N_t
    double separation = 0.0; // d in wavelengths

    Eigen::Index rx_count() const { return entries.rows(); }
    Eigen::Index tx_count() const { return entries.cols(); }
};

// Thin SVD H = U * diag(s) * V^H with singular values sorted descending.
struct ChannelSVD {
    MatrixXcd left_vectors;   // N_r x k
    VectorXd singular_values; // k, non-negative, non-increasing
    MatrixXcd right_vectors;  // N_t x k
};

// exp(-j * 2*pi * dist) / (4*pi * dist) with dist = ||rx - tx|| in wavelengths.
inline Complex green(const Point3& rx, const Point3& tx) {
    const double dx = rx.x - tx.x, dy = rx.y - tx.y, dz = rx.z - tx.z;
    const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (dist == 0.0)
        throw std::invalid_argument("green: coincident points (singularity)");
    const double phase = -2.0 * std::numbers::pi * dist;
    return std::polar(1.0 / (4.0 * std::numbers::pi * dist), phase);
}

inline ChannelMatrix build_channel(const Aperture& tx, const Aperture& rx) {
    if (rx.z_offset == tx.z_offset)
        throw std::invalid_argument("build_channel: apertures must lie in distinct planes");
    const auto nr = static_cast<Eigen::Index>(rx.points.size());
    const auto nt = static_cast<Eigen::Index>(tx.points.size());
    ChannelMatrix h;
    h.separation = std::abs(rx.z_offset - tx.z_offset);
    h.entries.resize(nr, nt);
    for (Eigen::Index j = 0; j < nt; ++j) {
        const Point3 t{tx.points[static_cast<std::size_t>(j)].x,
                       tx.points[static_cast<std::size_t>(j)].y, tx.z_offset};
        for (Eigen::Index i = 0; i < nr; ++i) {
            const Point3 r{rx.points[static_cast<std::size_t>(i)].x,
                           rx.points[static_cast<std::size_t>(i)].y, rx.z_offset};
            h.entries(i, j) = green(r, t);
        }
    }
    return h;
}

namespace detail {

// Hermitian eigendecomposition via LAPACK's divide-and-conquer zheevd.
// On return `a` holds the eigenvectors (if requested) and `w` the eigenvalues
// in ascending order. Eigen's own QL iteration occasionally fails to converge
// on the severely graded Gram spectra arising far beyond the Rayleigh
// distance; zheevd handles them.
inline void hermitian_eigen(MatrixXcd& a, Eigen::VectorXd& w, bool vectors) {
    const auto n = static_cast<lapack_int>(a.rows());
    w.resize(n);
    const lapack_int info =
        LAPACKE_zheevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n,
                       reinterpret_cast<lapack_complex_double*>(a.data()), n, w.data());
    if (info != 0)
        throw std::runtime_error("hermitian_eigen: zheevd failed with info " +
                                 std::to_string(info));
}

// Rotate each column of V so its largest-magnitude entry is real positive,
// applying the same rotation to the paired column of U.
inline void fix_phase(MatrixXcd& u, MatrixXcd& v) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        Eigen::Index imax = 0;
        v.col(c).cwiseAbs().maxCoeff(&imax);
        const Complex pivot = v(imax, c);
        if (std::abs(pivot) > 0.0) {
            const Complex rot = std::conj(pivot) / std::abs(pivot);
            v.col(c) *= rot;
            u.col(c) *= rot;
        }
    }
}

} // namespace detail

// SVD via the Hermitian eigendecomposition of the smaller Gram matrix.
// Right singular vectors are the eigenvectors of H^H H; left vectors are
// recovered as H v / ||H v||. Much faster than a dense complex SVD at the
// aperture sizes used here (~1300 points per side) and reconstruction is
// exact up to the unitarity of the eigenbasis.
inline ChannelSVD channel_svd(const ChannelMatrix& h) {
    const MatrixXcd& m = h.entries;
    const bool tall = m.rows() >= m.cols();
    MatrixXcd gram = tall ? MatrixXcd(m.adjoint() * m) : MatrixXcd(m * m.adjoint());
    Eigen::VectorXd eigvals;
    detail::hermitian_eigen(gram, eigvals, true);

    const Eigen::Index k = gram.rows();
    ChannelSVD out;
    out.singular_values.resize(k);
    MatrixXcd small_side(k, k); // eigenvectors reordered descending
    for (Eigen::Index c = 0; c < k; ++c) {
        const Eigen::Index src = k - 1 - c; // zheevd sorts ascending
        out.singular_values(c) = std::sqrt(std::max(0.0, eigvals(src)));
        small_side.col(c) = gram.col(src);
    }

    if (tall) {
        out.right_vectors = std::move(small_side);
        out.left_vectors = m * out.right_vectors;
        for (Eigen::Index c = 0; c < k; ++c) {
            const double norm = out.left_vectors.col(c).norm();
            out.singular_values(c) = norm;
            if (norm > 0.0)
                out.left_vectors.col(c) /= norm;
        }
    } else {
        out.left_vectors = std::move(small_side);
        out.right_vectors = m.adjoint() * out.left_vectors;
        for (Eigen::Index c = 0; c < k; ++c) {
            const double norm = out.right_vectors.col(c).norm();
            out.singular_values(c) = norm;
            if (norm > 0.0)
                out.right_vectors.col(c) /= norm;
        }
    }
    // Recomputing s as ||H v|| can leave sub-eps inversions between
    // near-degenerate values; restore the descending order.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
    for (Eigen::Index c = 0; c < k; ++c)
        order[static_cast<std::size_t>(c)] = c;
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return out.singular_values(a) > out.singular_values(b);
    });
    ChannelSVD sorted;
    sorted.singular_values.resize(k);
    sorted.left_vectors.resize(out.left_vectors.rows(), k);
    sorted.right_vectors.resize(out.right_vectors.rows(), k);
    for (Eigen::Index c = 0; c < k; ++c) {
        const Eigen::Index src = order[static_cast<std::size_t>(c)];
        sorted.singular_values(c) = out.singular_values(src);
        sorted.left_vectors.col(c) = out.left_vectors.col(src);
        sorted.right_vectors.col(c) = out.right_vectors.col(src);
    }
    detail::fix_phase(sorted.left_vectors, sorted.right_vectors);
    return sorted;
}

// Singular values only (no vectors); used where only the spectrum matters.
inline VectorXd singular_values(const ChannelMatrix& h) {
    const MatrixXcd& m = h.entries;
    MatrixXcd gram = m.rows() >= m.cols() ? MatrixXcd(m.adjoint() * m)
                                          : MatrixXcd(m * m.adjoint());
    Eigen::VectorXd eigvals;
    detail::hermitian_eigen(gram, eigvals, false);
    VectorXd s = eigvals.reverse();
    return s.cwiseMax(0.0).cwiseSqrt();
}

} // namespace holomimo

#endif
