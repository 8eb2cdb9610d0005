#pragma once

// Downlink waveform synthesis (PSS, SSS, port-0 CRS, placeholder PBCH) and a
// fixed-order impairment chain: delay, channel, CFO, AWGN, resampling.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "aeriq/geo.hpp"
#include "aeriq/lte_phy.hpp"
#include "aeriq/propmodel.hpp"
#include "aeriq/resample.hpp"

namespace aeriq {

// One 10 ms frame of transmitted REs. PBCH REs carry QPSK filler only.
inline ResourceGrid build_frame_grid(const CellIdentity& cell, const LtePhyConfig& config = {}) {
    ResourceGrid grid(config, 20 * config.symbols_per_slot, 0);
    const int spl = config.symbols_per_slot;
    const int sync0 = sync_first_subcarrier(config);

    for (int slot = 0; slot < 20; ++slot) {
        for (int sym : {0, spl - 3}) {
            for (const auto& re : crs_symbols(cell, slot, sym, config)) {
                grid.at(re.subcarrier, slot * spl + sym) = config.crs_scale * re.value;
            }
        }
    }

    const auto pss = pss_sequence(cell.n_id_2);
    for (int slot : {0, 10}) {
        const auto sss = sss_sequence(cell.n_id_1, cell.n_id_2, slot == 0 ? 0 : 5);
        for (int n = 0; n < 62; ++n) {
            grid.at(sync0 + n, slot * spl + spl - 1) = config.pss_scale * pss[static_cast<std::size_t>(n)];
            grid.at(sync0 + n, slot * spl + spl - 2) = config.sss_scale * sss[static_cast<std::size_t>(n)];
        }
    }

    // PBCH: slot 1, symbols 0..3; symbols 0 and 1 leave the four-port CRS
    // positions (k = v_shift mod 3) free.
    const int v3 = cell.pci() % 3;
    const auto bits = gold_sequence(static_cast<std::uint32_t>(cell.pci()), 4 * 2 * 72);
    std::size_t b = 0;
    const double a = config.pbch_scale / std::numbers::sqrt2;
    for (int sym = 0; sym < 4; ++sym) {
        for (int k = 0; k < config.n_subcarriers(); ++k) {
            if (sym < 2 && k % 3 == v3) continue;
            grid.at(k, spl + sym) = {a * (1 - 2 * bits[b]), a * (1 - 2 * bits[b + 1])};
            b += 2;
        }
    }
    return grid;
}

inline std::vector<cd> synthesize_downlink(const CellIdentity& cell, int n_frames, const LtePhyConfig& config = {}) {
    if (n_frames < 1) throw DomainError("need at least one frame");
    const auto frame = ofdm_modulate(build_frame_grid(cell, config));
    std::vector<cd> out;
    out.reserve(frame.size() * static_cast<std::size_t>(n_frames));
    for (int f = 0; f < n_frames; ++f) out.insert(out.end(), frame.begin(), frame.end());
    return out;
}

// ---------------------------------------------------------------------------
// Impairments

struct FlatChannel {
    cd gain{1.0, 0.0};
};

// Piecewise-constant complex gain: block i of block_samples samples (counted
// after the delay) sees the two-ray gain of geometry[i]; the last geometry
// extends to the end.
struct TwoRayChannel {
    std::vector<LinkGeometry> geometry;
    TwoRayConfig model{};
    std::size_t block_samples = 38400;
};

struct ImpairmentSpec {
    std::size_t delay_samples = 0;
    double cfo_hz = 0.0;
    std::optional<double> snr_db;
    std::variant<FlatChannel, TwoRayChannel> channel = FlatChannel{};
    double input_rate = 1.92e6;
    double output_rate = 1.92e6;
    std::uint64_t seed = 0;

    // Beyond +/-7.5 kHz the CP estimator aliases.
    bool cfo_ambiguous() const { return std::abs(cfo_hz) >= 7.5e3; }
};

inline double mean_power(std::span<const cd> x) {
    if (x.empty()) return 0.0;
    double p = 0.0;
    for (const auto& v : x) p += std::norm(v);
    return p / static_cast<double>(x.size());
}

inline void add_awgn(std::span<cd> x, double noise_power, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, std::sqrt(noise_power / 2.0));
    for (auto& v : x) v += cd(n(rng), n(rng));
}

// SNR is referenced to the mean power of the delayed-out signal part (the
// prepended zeros are excluded) before resampling.
inline std::vector<cd> apply_impairments(std::span<const cd> samples, const ImpairmentSpec& spec) {
    std::vector<cd> out(spec.delay_samples, cd{});
    out.insert(out.end(), samples.begin(), samples.end());
    const std::span<cd> body(out.data() + spec.delay_samples, samples.size());

    if (const auto* flat = std::get_if<FlatChannel>(&spec.channel)) {
        if (flat->gain != cd(1.0, 0.0)) {
            for (auto& v : body) v *= flat->gain;
        }
    } else {
        const auto& tr = std::get<TwoRayChannel>(spec.channel);
        if (tr.geometry.empty() || tr.block_samples == 0) throw DomainError("two-ray channel needs geometry");
        std::vector<cd> gains;
        gains.reserve(tr.geometry.size());
        for (const auto& g : tr.geometry) gains.push_back(two_ray_gain(g, tr.model));
        for (std::size_t n = 0; n < body.size(); ++n) {
            body[n] *= gains[std::min(n / tr.block_samples, gains.size() - 1)];
        }
    }

    if (spec.cfo_hz != 0.0) {
        const double w = 2.0 * std::numbers::pi * spec.cfo_hz / spec.input_rate;
        for (std::size_t n = 0; n < out.size(); ++n) {
            out[n] *= std::polar(1.0, w * static_cast<double>(n));
        }
    }

    if (spec.snr_db) {
        const double ps = mean_power(body);
        add_awgn(out, ps / std::pow(10.0, *spec.snr_db / 10.0), spec.seed);
    }

    if (spec.output_rate != spec.input_rate) return resample(out, spec.input_rate, spec.output_rate);
    return out;
}

}  // namespace aeriq
