// SPDX-License-Identifier: Apache-2.0
//
// Channel capacity under a precoder and a diagonal power allocation, with
// equal power allocation and water-filling, at constant received SNR
// (transmit power scaled to compensate the free-space path loss).

#ifndef HOLOMIMO_CAPACITY_HPP
#define HOLOMIMO_CAPACITY_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "holomimo/channel.hpp"
#include "holomimo/modes.hpp"

namespace holomimo {

enum class AllocationKind { epa, waterfilling };

// Diagonal of the power matrix Q; weights sum to at most 1.
struct PowerAllocation {
    std::vector<double> weights;
    AllocationKind kind = AllocationKind::epa;
};

// Received-SNR link budget: effective_gain = P_t / sigma^2 = snr * (4*pi*d)^2
// with d in wavelengths, so a single-element boresight link sees exactly `snr`.
struct LinkBudget {
    double snr = 1.0;            // linear received SNR
    double separation = 1.0;     // d in wavelengths
    double effective_gain = 1.0; // snr * (4*pi*d)^2
};

inline LinkBudget link_budget(double snr_db, double d) {
    if (!(d > 0.0))
        throw std::invalid_argument("link_budget: d must be positive");
    LinkBudget b;
    b.snr = std::pow(10.0, snr_db / 10.0);
    b.separation = d;
    const double four_pi_d = 4.0 * std::numbers::pi * d;
    b.effective_gain = b.snr * four_pi_d * four_pi_d;
    return b;
}

inline PowerAllocation epa(int n_modes) {
    if (n_modes < 1)
        throw std::invalid_argument("epa: need at least one mode");
    PowerAllocation q;
    q.kind = AllocationKind::epa;
    q.weights.assign(static_cast<std::size_t>(n_modes), 1.0 / n_modes);
    return q;
}

// Water-filling over per-mode power gains g_i: p_i = max(0, w - 1/g_i) with the
// water level w found by bisection so that sum(p) equals the budget. Modes with
// zero gain receive zero power.
inline PowerAllocation waterfill(const std::vector<double>& gains, double budget = 1.0) {
    if (!(budget > 0.0))
        throw std::invalid_argument("waterfill: budget must be positive");
    double max_inv = 0.0;
    bool any_positive = false;
    for (double g : gains) {
        if (g < 0.0)
            throw std::invalid_argument("waterfill: gains must be non-negative");
        if (g > 0.0) {
            any_positive = true;
            max_inv = std::max(max_inv, 1.0 / g);
        }
    }
    if (!any_positive)
        throw std::invalid_argument("waterfill: all gains are zero");

    const auto total_power = [&](double level) {
        double sum = 0.0;
        for (double g : gains)
            if (g > 0.0)
                sum += std::max(0.0, level - 1.0 / g);
        return sum;
    };

    double lo = 0.0;
    double hi = budget + max_inv; // total_power(hi) >= budget by construction
    for (int iter = 0; iter < 200 && (hi - lo) > 1e-15 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (total_power(mid) < budget ? lo : hi) = mid;
    }
    const double level = 0.5 * (lo + hi);

    PowerAllocation q;
    q.kind = AllocationKind::waterfilling;
    q.weights.reserve(gains.size());
    double sum = 0.0;
    for (double g : gains) {
        const double p = g > 0.0 ? std::max(0.0, level - 1.0 / g) : 0.0;
        q.weights.push_back(p);
        sum += p;
    }
    if (sum > 0.0) // renormalize the residual bisection slack onto the budget
        for (double& p : q.weights)
            p *= budget / sum;
    return q;
}

// C = log2 det(I + g * H F Q F^H H^H), evaluated through the equivalent N x N
// Gram form log2 det(I + g * Q^(1/2) F^H H^H H F Q^(1/2)).
inline double capacity(const ChannelMatrix& h, const Precoder& f,
                       const PowerAllocation& q, const LinkBudget& budget) {
    const auto n = f.matrix.cols();
    if (static_cast<std::size_t>(n) != q.weights.size())
        throw std::invalid_argument("capacity: precoder/allocation size mismatch");
    if (f.matrix.rows() != h.entries.cols())
        throw std::invalid_argument("capacity: precoder rows must match channel columns");

    const MatrixXcd hf = h.entries * f.matrix; // N_r x N
    MatrixXcd a = hf.adjoint() * hf;           // F^H H^H H F
    for (Eigen::Index c = 0; c < n; ++c) {
        const double sc = std::sqrt(q.weights[static_cast<std::size_t>(c)]);
        a.col(c) *= sc;
        a.row(c) *= sc;
    }
    a *= budget.effective_gain;

    Eigen::VectorXd eigvals;
    holomimo::detail::hermitian_eigen(a, eigvals, false);
    double bits = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        bits += std::log2(1.0 + std::max(0.0, eigvals(i)));
    if (!std::isfinite(bits))
        throw std::runtime_error("capacity: non-finite result");
    return bits;
}

} // namespace holomimo

#endif
