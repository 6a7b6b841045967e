// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: capacity sweep, mode phase-map dumps, and a
// self-check report. Defaults reproduce the reference experiment
// (r_t = r_r = 10 lambda, pitch lambda/2, SNR -20 dB, N = 16).

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "holomimo/capacity.hpp"
#include "holomimo/channel.hpp"
#include "holomimo/experiment.hpp"
#include "holomimo/geometry.hpp"
#include "holomimo/modes.hpp"

namespace {

using namespace holomimo;
using nlohmann::json;

void load_config_file(const std::string& path, SweepConfig& cfg) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file " + path);
    json j = json::parse(in);
    if (j.contains("r_t"))
        cfg.r_t = j["r_t"].get<double>();
    if (j.contains("r_r"))
        cfg.r_r = j["r_r"].get<double>();
    if (j.contains("pitch"))
        cfg.pitch = j["pitch"].get<double>();
    if (j.contains("snr_db"))
        cfg.snr_db = j["snr_db"].get<double>();
    if (j.contains("n_modes"))
        cfg.n_modes = j["n_modes"].get<int>();
    if (j.contains("wavelength_m"))
        cfg.wavelength_m = j["wavelength_m"].get<double>();
    if (j.contains("threads"))
        cfg.threads = j["threads"].get<int>();
    if (j.contains("sweep"))
        cfg.sweep = j["sweep"].get<std::vector<double>>();
    if (j.contains("schemes")) {
        cfg.schemes.clear();
        for (const auto& name : j["schemes"]) {
            auto s = parse_scheme(name.get<std::string>());
            if (!s)
                throw CLI::ValidationError("schemes", "unknown scheme '" + name.get<std::string>() +
                                                          "'; valid: " + valid_scheme_list());
            cfg.schemes.push_back(*s);
        }
    }
}

std::vector<Scheme> parse_scheme_list(const std::vector<std::string>& names) {
    std::vector<Scheme> out;
    for (const auto& name : names) {
        auto s = parse_scheme(name);
        if (!s)
            throw CLI::ValidationError("--schemes", "unknown scheme '" + name +
                                                        "'; valid: " + valid_scheme_list());
        out.push_back(*s);
    }
    return out;
}

void dump_channel_csv(const ChannelMatrix& h, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path);
    for (Eigen::Index i = 0; i < h.entries.rows(); ++i) {
        for (Eigen::Index j = 0; j < h.entries.cols(); ++j) {
            if (j)
                out << ',';
            out << h.entries(i, j).real() << ',' << h.entries(i, j).imag();
        }
        out << '\n';
    }
}

int run_sweep_command(SweepConfig cfg, const std::string& out_path,
                      const std::string& dump_channel_path) {
    SweepResult result = run_sweep(cfg);
    emit_csv(result, out_path);
    std::printf("wrote %zu records to %s (N_t=%zu, N_r=%zu, d_r=%g lambda)\n",
                result.records.size(), out_path.c_str(), result.tx_point_count,
                result.rx_point_count, result.rayleigh_distance_wavelengths);
    if (!dump_channel_path.empty()) {
        const double d = result.config.sweep.front() * result.rayleigh_distance_wavelengths;
        Aperture tx = sample_disk(cfg.r_t, cfg.pitch, 0.0);
        Aperture rx = sample_disk(cfg.r_r, cfg.pitch, d);
        dump_channel_csv(build_channel(tx, rx), dump_channel_path);
        std::printf("wrote channel matrix at d=%g lambda to %s\n", d,
                    dump_channel_path.c_str());
    }
    return 0;
}

int run_validate_command(const SweepConfig& cfg) {
    const Aperture tx = sample_disk(cfg.r_t, cfg.pitch, 0.0);
    const double d = rayleigh_distance(cfg.r_t); // representative distance
    Aperture rx = sample_disk(cfg.r_r, cfg.pitch, d);
    const ChannelMatrix h = build_channel(tx, rx);
    const ChannelSVD svd = channel_svd(h);

    std::printf("validate: r_t=%g r_r=%g pitch=%g N=%d (N_t=%zu, N_r=%zu)\n", cfg.r_t,
                cfg.r_r, cfg.pitch, cfg.n_modes, tx.points.size(), rx.points.size());
    struct Entry {
        const char* name;
        Precoder f;
    };
    const std::vector<Entry> entries = {
        {"svd", build_svd_precoder(svd, cfg.n_modes)},
        {"oam_unfocused", build_mode_precoder(ModeFamily::oam_unfocused, {}, tx, cfg.n_modes)},
        {"oam_focused", build_mode_precoder(ModeFamily::oam_focused, {}, tx, cfg.n_modes, d)},
        {"walsh_radial", build_mode_precoder(ModeFamily::walsh, {4, 0}, tx, cfg.n_modes)},
        {"walsh_angular", build_mode_precoder(ModeFamily::walsh, {0, 4}, tx, cfg.n_modes)},
        {"walsh_polar", build_mode_precoder(ModeFamily::walsh, {2, 2}, tx, cfg.n_modes)},
    };
    for (const auto& e : entries) {
        double worst_norm = 0.0;
        for (Eigen::Index c = 0; c < e.f.matrix.cols(); ++c)
            worst_norm = std::max(worst_norm, std::abs(e.f.matrix.col(c).norm() - 1.0));
        std::printf("  %-14s gram defect %.3e   max |col norm - 1| %.3e\n", e.name,
                    gram_orthogonality(e.f), worst_norm);
    }
    std::printf("  leading singular values at d=d_r:");
    for (int i = 0; i < std::min(4, static_cast<int>(svd.singular_values.size())); ++i)
        std::printf(" %.4e", svd.singular_values(i));
    std::printf("\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Near-field disk-aperture MIMO capacity simulator"};
    app.require_subcommand(1);

    SweepConfig cfg;
    std::string config_path, out_path = "sweep.csv", dump_channel_path;
    std::vector<std::string> scheme_args;
    double d_min = 0.05, d_max = 10.0, points_per_decade = 17.0;
    bool grid_flags_used = false;

    auto* sweep = app.add_subcommand("sweep", "Run the capacity-vs-distance sweep");
    sweep->add_option("--config", config_path, "JSON config file (flags override)");
    sweep->add_option("--out", out_path, "Output CSV path");
    sweep->add_option("--schemes", scheme_args, "Comma-separated scheme list")
        ->delimiter(',');
    auto* snr_opt = sweep->add_option("--snr-db", cfg.snr_db, "Received SNR in dB");
    auto* radius_opt = sweep->add_option("--radius", cfg.r_t, "Disk radius (both sides), wavelengths");
    auto* modes_opt = sweep->add_option("--modes", cfg.n_modes, "Number of modes N");
    auto* ppd_opt = sweep->add_option("--points-per-decade", points_per_decade,
                                      "Sweep density (log grid)");
    auto* dmin_opt = sweep->add_option("--d-min", d_min, "Smallest d/d_r ratio");
    auto* dmax_opt = sweep->add_option("--d-max", d_max, "Largest d/d_r ratio");
    auto* pitch_opt = sweep->add_option("--pitch", cfg.pitch, "Sample spacing, wavelengths");
    auto* threads_opt = sweep->add_option("--threads", cfg.threads, "Worker threads");
    sweep->add_option("--dump-channel", dump_channel_path,
                      "Also dump H at the first sweep distance as re,im CSV");

    std::string family_arg = "walsh_polar", prefix = "mode";
    int map_modes = 16;
    double map_d = 20.0;
    auto* modes_cmd = app.add_subcommand("modes", "Dump per-mode phase maps as CSV");
    modes_cmd->add_option("--family", family_arg,
                          "oam_unfocused | oam_focused | walsh_radial | walsh_angular | walsh_polar");
    modes_cmd->add_option("--radius", cfg.r_t, "Disk radius, wavelengths");
    modes_cmd->add_option("--pitch", cfg.pitch, "Sample spacing, wavelengths");
    modes_cmd->add_option("--modes", map_modes, "Number of modes to dump");
    modes_cmd->add_option("--d", map_d, "Focal distance for oam_focused, wavelengths");
    modes_cmd->add_option("--out-prefix", prefix, "Output file prefix");

    auto* validate_cmd = app.add_subcommand("validate", "Run orthogonality and invariant checks");
    validate_cmd->add_option("--radius", cfg.r_t, "Disk radius, wavelengths");
    validate_cmd->add_option("--pitch", cfg.pitch, "Sample spacing, wavelengths");
    validate_cmd->add_option("--modes", cfg.n_modes, "Number of modes N");

    try {
        app.parse(argc, argv);

        if (sweep->parsed()) {
            SweepConfig file_cfg;
            if (!config_path.empty())
                load_config_file(config_path, file_cfg);
            // CLI flags override file values, which override defaults.
            if (!config_path.empty()) {
                SweepConfig merged = file_cfg;
                if (snr_opt->count())
                    merged.snr_db = cfg.snr_db;
                if (radius_opt->count())
                    merged.r_t = merged.r_r = cfg.r_t;
                if (modes_opt->count())
                    merged.n_modes = cfg.n_modes;
                if (pitch_opt->count())
                    merged.pitch = cfg.pitch;
                if (threads_opt->count())
                    merged.threads = cfg.threads;
                cfg = merged;
            } else if (radius_opt->count()) {
                cfg.r_r = cfg.r_t;
            }
            if (!scheme_args.empty())
                cfg.schemes = parse_scheme_list(scheme_args);
            grid_flags_used = ppd_opt->count() || dmin_opt->count() || dmax_opt->count();
            if (grid_flags_used) {
                const int count = std::max(
                    2, static_cast<int>(std::lround(points_per_decade *
                                                    std::log10(d_max / d_min))) + 1);
                cfg.sweep = default_sweep_ratios(d_min, d_max, count);
            }
            return run_sweep_command(cfg, out_path, dump_channel_path);
        }
        if (modes_cmd->parsed()) {
            const Aperture ap = sample_disk(cfg.r_t, cfg.pitch, 0.0);
            ModeFamily family;
            WalshParams walsh{2, 2};
            if (family_arg == "oam_unfocused")
                family = ModeFamily::oam_unfocused;
            else if (family_arg == "oam_focused")
                family = ModeFamily::oam_focused;
            else if (family_arg == "walsh_radial") {
                family = ModeFamily::walsh;
                walsh = {4, 0};
            } else if (family_arg == "walsh_angular") {
                family = ModeFamily::walsh;
                walsh = {0, 4};
            } else if (family_arg == "walsh_polar") {
                family = ModeFamily::walsh;
            } else {
                throw CLI::ValidationError("--family", "unknown family '" + family_arg + "'");
            }
            auto paths = emit_mode_maps(family, walsh, ap, map_modes, prefix, map_d);
            std::printf("wrote %zu phase maps (%s_mode*.csv)\n", paths.size(), prefix.c_str());
            return 0;
        }
        cfg.r_r = cfg.r_t;
        return run_validate_command(cfg);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
