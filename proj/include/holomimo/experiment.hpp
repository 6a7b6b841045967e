// SPDX-License-Identifier: Apache-2.0
//
// Capacity-versus-distance sweep: configuration, scheme dispatch, parallel
// execution over sweep points, and CSV emission.

#ifndef HOLOMIMO_EXPERIMENT_HPP
#define HOLOMIMO_EXPERIMENT_HPP

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "holomimo/capacity.hpp"
#include "holomimo/channel.hpp"
#include "holomimo/geometry.hpp"
#include "holomimo/modes.hpp"

namespace holomimo {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Scheme {
    svd_wf,
    svd_epa,
    oam_unfocused,
    oam_focused,
    walsh_radial,
    walsh_angular,
    walsh_polar,
};

inline const std::vector<std::pair<Scheme, const char*>>& scheme_names() {
    static const std::vector<std::pair<Scheme, const char*>> names = {
        {Scheme::svd_wf, "svd_wf"},
        {Scheme::svd_epa, "svd_epa"},
        {Scheme::oam_unfocused, "oam_unfocused"},
        {Scheme::oam_focused, "oam_focused"},
        {Scheme::walsh_radial, "walsh_radial"},
        {Scheme::walsh_angular, "walsh_angular"},
        {Scheme::walsh_polar, "walsh_polar"},
    };
    return names;
}

inline const char* scheme_name(Scheme s) {
    for (const auto& [sch, name] : scheme_names())
        if (sch == s)
            return name;
    throw std::invalid_argument("unknown scheme");
}

inline std::optional<Scheme> parse_scheme(const std::string& name) {
    for (const auto& [sch, n] : scheme_names())
        if (name == n)
            return sch;
    return std::nullopt;
}

inline std::string valid_scheme_list() {
    std::string out;
    for (const auto& [sch, name] : scheme_names()) {
        if (!out.empty())
            out += ", ";
        out += name;
    }
    return out;
}

struct SweepConfig {
    double r_t = 10.0;        // Tx radius, wavelengths
    double r_r = 10.0;        // Rx radius, wavelengths
    double pitch = 0.5;       // sample spacing, wavelengths
    double snr_db = -20.0;    // received SNR in dB
    int n_modes = 16;         // N
    std::vector<Scheme> schemes = {
        Scheme::svd_wf,        Scheme::svd_epa,     Scheme::oam_unfocused,
        Scheme::oam_focused,   Scheme::walsh_radial, Scheme::walsh_angular,
        Scheme::walsh_polar,
    };
    std::vector<double> sweep; // d/d_r ratios, strictly increasing; empty = default grid
    double wavelength_m = 0.01; // reporting only
    int threads = 1;
};

// 40 log-spaced d/d_r ratios in [0.05, 10].
inline std::vector<double> default_sweep_ratios(double d_min = 0.05, double d_max = 10.0,
                                                int count = 40) {
    if (!(d_min > 0.0) || !(d_max > d_min) || count < 2)
        throw std::invalid_argument("default_sweep_ratios: need 0 < d_min < d_max, count >= 2");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    const double l0 = std::log10(d_min), l1 = std::log10(d_max);
    for (int i = 0; i < count; ++i)
        out.push_back(std::pow(10.0, l0 + (l1 - l0) * i / (count - 1)));
    return out;
}

struct SweepRecord {
    double d_over_dr;
    double d_wavelengths;
    Scheme scheme;
    double capacity_bits; // bit/s/Hz
};

struct SweepResult {
    std::vector<SweepRecord> records; // ordered by sweep point, then scheme
    SweepConfig config;
    std::size_t tx_point_count = 0;
    std::size_t rx_point_count = 0;
    std::vector<std::pair<Scheme, double>> gram_defects;
    double rayleigh_distance_wavelengths = 0.0;
};

// d_r = r_t^2 / (2 lambda) = r_t^2 / 2 in wavelength units.
inline double rayleigh_distance(double r_t) {
    if (!(r_t > 0.0))
        throw std::invalid_argument("rayleigh_distance: r_t must be positive");
    return r_t * r_t / 2.0;
}

inline void validate_config(const SweepConfig& cfg) {
    if (!(cfg.r_t > 0.0) || !(cfg.r_r > 0.0) || !(cfg.pitch > 0.0) || !(cfg.wavelength_m > 0.0))
        throw std::invalid_argument("config: all lengths must be positive");
    if (cfg.n_modes < 1)
        throw std::invalid_argument("config: n_modes must be >= 1");
    if (cfg.schemes.empty())
        throw std::invalid_argument("config: at least one scheme required");
    for (std::size_t i = 0; i < cfg.sweep.size(); ++i) {
        if (!(cfg.sweep[i] > 0.0))
            throw std::invalid_argument("config: sweep ratios must be positive");
        if (i > 0 && !(cfg.sweep[i] > cfg.sweep[i - 1]))
            throw std::invalid_argument("config: sweep ratios must be strictly increasing");
    }
}

namespace detail {

inline Precoder build_scheme_precoder(Scheme scheme, const Aperture& tx, int n_modes,
                                      double d, const ChannelSVD& svd) {
    switch (scheme) {
    case Scheme::svd_wf:
    case Scheme::svd_epa:
        return build_svd_precoder(svd, n_modes);
    case Scheme::oam_unfocused:
        return build_mode_precoder(ModeFamily::oam_unfocused, {}, tx, n_modes);
    case Scheme::oam_focused:
        return build_mode_precoder(ModeFamily::oam_focused, {}, tx, n_modes, d);
    case Scheme::walsh_radial:
        return build_mode_precoder(ModeFamily::walsh, {4, 0}, tx, n_modes);
    case Scheme::walsh_angular:
        return build_mode_precoder(ModeFamily::walsh, {0, 4}, tx, n_modes);
    default:
        return build_mode_precoder(ModeFamily::walsh, {2, 2}, tx, n_modes);
    }
}

// Capacity of every requested scheme at one distance; shares one channel
// build and one SVD across the schemes.
inline std::vector<double> sweep_point(const SweepConfig& cfg, const Aperture& tx,
                                       const Aperture& rx_template, double d) {
    Aperture rx = rx_template;
    rx.z_offset = d;
    const ChannelMatrix h = build_channel(tx, rx);

    bool needs_svd = false;
    for (Scheme s : cfg.schemes)
        needs_svd |= (s == Scheme::svd_wf || s == Scheme::svd_epa);
    ChannelSVD svd;
    if (needs_svd)
        svd = channel_svd(h);

    const LinkBudget budget = link_budget(cfg.snr_db, d);
    std::vector<double> caps;
    caps.reserve(cfg.schemes.size());
    for (Scheme s : cfg.schemes) {
        if (s == Scheme::svd_wf) {
            // The optimal case water-fills across every channel mode, not just
            // the N kept by the fixed-size precoders. Modes left dry by the
            // water level contribute nothing, so the precoder only needs to
            // carry the active set.
            std::vector<double> gains(static_cast<std::size_t>(svd.singular_values.size()));
            for (Eigen::Index i = 0; i < svd.singular_values.size(); ++i) {
                const double si = svd.singular_values(i);
                gains[static_cast<std::size_t>(i)] = budget.effective_gain * si * si;
            }
            PowerAllocation q = waterfill(gains);
            int active = 0;
            for (std::size_t i = 0; i < q.weights.size(); ++i)
                if (q.weights[i] > 0.0)
                    active = static_cast<int>(i) + 1;
            const Precoder f = build_svd_precoder(svd, std::max(1, active));
            q.weights.resize(static_cast<std::size_t>(std::max(1, active)));
            caps.push_back(capacity(h, f, q, budget));
        } else {
            const Precoder f = build_scheme_precoder(s, tx, cfg.n_modes, d, svd);
            caps.push_back(capacity(h, f, epa(cfg.n_modes), budget));
        }
    }
    return caps;
}

} // namespace detail

// Runs the full sweep. Sweep points are independent work items; results are
// assembled in deterministic (distance, scheme) order regardless of which
// thread finishes first.
inline SweepResult run_sweep(const SweepConfig& config) {
    SweepConfig cfg = config;
    if (cfg.sweep.empty())
        cfg.sweep = default_sweep_ratios();
    validate_config(cfg);

    SweepResult result;
    result.config = cfg;
    result.rayleigh_distance_wavelengths = rayleigh_distance(cfg.r_t);

    const Aperture tx = sample_disk(cfg.r_t, cfg.pitch, 0.0);
    const Aperture rx_template = sample_disk(cfg.r_r, cfg.pitch, 1.0);
    result.tx_point_count = tx.points.size();
    result.rx_point_count = rx_template.points.size();
    if (cfg.n_modes > static_cast<int>(tx.points.size()))
        throw std::invalid_argument("run_sweep: n_modes exceeds the Tx sample count");

    // Gram defects reported once per scheme (distance-independent families
    // evaluated at the first sweep distance for the focused/SVD cases).
    {
        const double d0 = cfg.sweep.front() * result.rayleigh_distance_wavelengths;
        Aperture rx = rx_template;
        rx.z_offset = d0;
        ChannelSVD svd = channel_svd(build_channel(tx, rx));
        for (Scheme s : cfg.schemes) {
            const Precoder f = detail::build_scheme_precoder(s, tx, cfg.n_modes, d0, svd);
            result.gram_defects.emplace_back(s, gram_orthogonality(f));
        }
    }

    const std::size_t n_points = cfg.sweep.size();
    std::vector<std::vector<double>> per_point(n_points);
    const int threads = std::max(1, cfg.threads);

    auto work = [&](std::size_t idx) {
        const double d = cfg.sweep[idx] * result.rayleigh_distance_wavelengths;
        per_point[idx] = detail::sweep_point(cfg, tx, rx_template, d);
    };

    if (threads == 1 || n_points <= 1) {
        for (std::size_t i = 0; i < n_points; ++i)
            work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::atomic<bool> failed{false};
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < n_points; i = next.fetch_add(1)) {
                    try {
                        work(i);
                    } catch (...) {
                        failed = true;
                        return;
                    }
                }
            });
        for (auto& th : pool)
            th.join();
        if (failed)
            throw std::runtime_error("run_sweep: a sweep point failed");
    }

    for (std::size_t i = 0; i < n_points; ++i) {
        const double ratio = cfg.sweep[i];
        const double d = ratio * result.rayleigh_distance_wavelengths;
        for (std::size_t s = 0; s < cfg.schemes.size(); ++s)
            result.records.push_back({ratio, d, cfg.schemes[s], per_point[i][s]});
    }
    return result;
}

namespace detail {

// Shortest round-trip-exact decimal representation.
inline std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

} // namespace detail

// Header `d_over_dr,d_wavelengths,scheme,capacity_bits`, one row per record,
// LF line endings, round-trip-exact floats.
inline void emit_csv(const SweepResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("emit_csv: cannot open " + path);
    out << "d_over_dr,d_wavelengths,scheme,capacity_bits\n";
    for (const auto& rec : result.records)
        out << detail::format_double(rec.d_over_dr) << ','
            << detail::format_double(rec.d_wavelengths) << ',' << scheme_name(rec.scheme)
            << ',' << detail::format_double(rec.capacity_bits) << '\n';
    if (!out)
        throw std::runtime_error("emit_csv: write failure on " + path);
}

inline SweepResult parse_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("parse_csv: cannot open " + path);
    SweepResult result;
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream ss(line);
        std::string field;
        SweepRecord rec{};
        std::getline(ss, field, ',');
        rec.d_over_dr = std::stod(field);
        std::getline(ss, field, ',');
        rec.d_wavelengths = std::stod(field);
        std::getline(ss, field, ',');
        const auto sch = parse_scheme(field);
        if (!sch)
            throw std::runtime_error("parse_csv: unknown scheme " + field);
        rec.scheme = *sch;
        std::getline(ss, field, ',');
        rec.capacity_bits = std::stod(field);
        result.records.push_back(rec);
    }
    return result;
}

// One CSV per mode with columns x, y, phase_radians; files are named
// <prefix>_mode<k>.csv.
inline std::vector<std::string> emit_mode_maps(ModeFamily family, const WalshParams& walsh,
                                               const Aperture& ap, int n_modes,
                                               const std::string& prefix, double d = 0.0) {
    const Precoder f = build_mode_precoder(family, walsh, ap, n_modes, d);
    std::vector<std::string> paths;
    for (int c = 0; c < n_modes; ++c) {
        std::string path = prefix + "_mode" + std::to_string(c) + ".csv";
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("emit_mode_maps: cannot open " + path);
        out << "x,y,phase_radians\n";
        for (Eigen::Index i = 0; i < f.matrix.rows(); ++i) {
            const auto& p = ap.points[static_cast<std::size_t>(i)];
            out << detail::format_double(p.x) << ',' << detail::format_double(p.y) << ','
                << detail::format_double(std::arg(f.matrix(i, c))) << '\n';
        }
        if (!out)
            throw std::runtime_error("emit_mode_maps: write failure on " + path);
        paths.push_back(std::move(path));
    }
    return paths;
}

} // namespace holomimo

#endif
