// SPDX-License-Identifier: Apache-2.0
//
// Transmission-mode precoders for a disk aperture: unfocused and focused OAM
// modes, radial/angular/polar Walsh functions, and the SVD precoder.

#ifndef HOLOMIMO_MODES_HPP
#define HOLOMIMO_MODES_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "holomimo/channel.hpp"
#include "holomimo/geometry.hpp"

namespace holomimo {

enum class ModeFamily { svd, oam_unfocused, oam_focused, walsh };

// Symbolic identity of one transmission mode. For OAM and SVD only
// `primary_index` is used; Walsh modes carry the (m, n) pair together with
// the (mu, nu) resolution parameters.
struct ModeSpec {
    ModeFamily family = ModeFamily::svd;
    int primary_index = 0;   // OAM state n, SVD rank, or Walsh radial index m
    int secondary_index = 0; // Walsh angular index n
    int mu = 0;              // Walsh radial resolution
    int nu = 0;              // Walsh angular resolution
};

struct Precoder {
    MatrixXcd matrix; // N_t x N, unit-norm columns
    std::vector<ModeSpec> mode_list;
    std::string tx_aperture_id;
};

// OAM topological order for state n: 0, +1, -1, +2, -2, ...
// Integer orders keep the modes 2*pi-periodic and exactly orthogonal in angle.
inline int oam_order(int n) { return (n % 2 == 0) ? -n / 2 : (n + 1) / 2; }

inline Complex oam_unfocused_value(int n, const SamplePoint& p, double r_t) {
    if (n < 0)
        throw std::invalid_argument("oam_unfocused_value: n must be >= 0");
    const double amp = 1.0 / (std::sqrt(std::numbers::pi) * r_t);
    return std::polar(amp, static_cast<double>(oam_order(n)) * p.theta);
}

// Unfocused value times the focusing phase exp(j * 2*pi*d * (1 + rho^2/(2 d^2))).
inline Complex oam_focused_value(int n, const SamplePoint& p, double r_t, double d) {
    if (!(d > 0.0))
        throw std::invalid_argument("oam_focused_value: d must be positive");
    const double focus = 2.0 * std::numbers::pi * d * (1.0 + p.rho * p.rho / (2.0 * d * d));
    return oam_unfocused_value(n, p, r_t) * std::polar(1.0, focus);
}

namespace detail {

inline double sgn_plus(double v) { return v < 0.0 ? -1.0 : 1.0; } // sgn(0) := +1

} // namespace detail

// Polar Walsh function value: separable products of sign factors over the
// binary digits of m (radial, in (rho/r_t)^2) and n (angular, in theta/2).
inline double walsh_value(int m, int n, int mu, int nu, const SamplePoint& p, double r_t) {
    if (m < 0 || m >= (1 << mu) || n < 0 || n >= (1 << nu))
        throw std::invalid_argument("walsh_value: index out of range for resolution");
    double sign = 1.0;
    const double u = (p.rho / r_t) * (p.rho / r_t);
    for (int k = 0; k < mu; ++k)
        if ((m >> k) & 1)
            sign *= detail::sgn_plus(std::cos(std::ldexp(std::numbers::pi * u, k)));
    for (int k = 0; k < nu; ++k)
        if ((n >> k) & 1)
            sign *= detail::sgn_plus(std::cos(std::ldexp(p.theta / 2.0, k)));
    return sign / (std::sqrt(std::numbers::pi) * r_t);
}

struct WalshParams {
    int mu = 2;
    int nu = 2;
};

namespace detail {

inline void normalize_columns(MatrixXcd& f) {
    for (Eigen::Index c = 0; c < f.cols(); ++c) {
        const double norm = f.col(c).norm();
        if (norm > 0.0)
            f.col(c) /= norm;
    }
}

} // namespace detail

// Evaluates N modes of the chosen family at every Tx sample point and rescales
// each column to unit l2 norm (discrete normalization replaces the continuous
// 1/(sqrt(pi) r_t) factor). Walsh modes are ordered row-major over (m, n);
// OAM modes by state n = 0..N-1. `d` is required for the focused family only.
inline Precoder build_mode_precoder(ModeFamily family, const WalshParams& walsh,
                                    const Aperture& tx, int n_modes, double d = 0.0) {
    const auto nt = static_cast<Eigen::Index>(tx.points.size());
    if (n_modes < 1 || n_modes > nt)
        throw std::invalid_argument("build_mode_precoder: need 1 <= N <= N_t");
    if (family == ModeFamily::svd)
        throw std::invalid_argument("build_mode_precoder: use build_svd_precoder for SVD modes");
    if (family == ModeFamily::oam_focused && !(d > 0.0))
        throw std::invalid_argument("build_mode_precoder: focused OAM requires d > 0");
    if (family == ModeFamily::walsh && n_modes > (1 << walsh.mu) * (1 << walsh.nu))
        throw std::invalid_argument("build_mode_precoder: N exceeds 2^mu * 2^nu Walsh modes");

    Precoder f;
    f.matrix.resize(nt, n_modes);
    f.mode_list.reserve(static_cast<std::size_t>(n_modes));

    for (int c = 0; c < n_modes; ++c) {
        ModeSpec spec;
        spec.family = family;
        if (family == ModeFamily::walsh) {
            spec.mu = walsh.mu;
            spec.nu = walsh.nu;
            spec.primary_index = c >> walsh.nu;        // m, radial
            spec.secondary_index = c & ((1 << walsh.nu) - 1); // n, angular
        } else {
            spec.primary_index = c;
        }
        f.mode_list.push_back(spec);

        for (Eigen::Index i = 0; i < nt; ++i) {
            const SamplePoint& p = tx.points[static_cast<std::size_t>(i)];
            Complex v;
            switch (family) {
            case ModeFamily::oam_unfocused:
                v = oam_unfocused_value(c, p, tx.radius);
                break;
            case ModeFamily::oam_focused:
                v = oam_focused_value(c, p, tx.radius, d);
                break;
            default:
                v = walsh_value(spec.primary_index, spec.secondary_index, walsh.mu,
                                walsh.nu, p, tx.radius);
                break;
            }
            f.matrix(i, c) = v;
        }
    }
    detail::normalize_columns(f.matrix);
    return f;
}

// Leading N right singular vectors in descending singular-value order.
inline Precoder build_svd_precoder(const ChannelSVD& svd, int n_modes) {
    if (n_modes < 1 || n_modes > svd.right_vectors.cols())
        throw std::invalid_argument("build_svd_precoder: N exceeds available singular triplets");
    Precoder f;
    f.matrix = svd.right_vectors.leftCols(n_modes);
    f.mode_list.reserve(static_cast<std::size_t>(n_modes));
    for (int c = 0; c < n_modes; ++c) {
        ModeSpec spec;
        spec.family = ModeFamily::svd;
        spec.primary_index = c;
        f.mode_list.push_back(spec);
    }
    return f;
}

// Max off-diagonal magnitude of F^H F (discrete orthogonality defect).
inline double gram_orthogonality(const Precoder& f) {
    const MatrixXcd gram = f.matrix.adjoint() * f.matrix;
    double worst = 0.0;
    for (Eigen::Index c = 0; c < gram.cols(); ++c)
        for (Eigen::Index r = 0; r < gram.rows(); ++r)
            if (r != c)
                worst = std::max(worst, std::abs(gram(r, c)));
    return worst;
}

} // namespace holomimo

#endif
