#pragma once

// Cell search: CP-based CFO estimation, PSS timing/sector detection with
// noncoherent combining over half-frames, SSS group detection and PCI
// assembly.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "aeriq/detail/fft.hpp"
#include "aeriq/error.hpp"
#include "aeriq/lte_phy.hpp"
#include "aeriq/resample.hpp"
#include "aeriq/sigmf_io.hpp"

namespace aeriq {

struct SyncConfig {
    LtePhyConfig phy{};
    double pss_threshold = 0.15;
    double sss_threshold = 0.15;
    // Energy weight in the blind CP timing metric |gamma| - rho * Phi.
    double cp_rho = 0.5;
};

// ---------------------------------------------------------------------------
// CFO

namespace detail {

struct CpFold {
    std::vector<cd> corr;       // sum of x[n+N] conj(x[n]) folded by n mod slot
    std::vector<double> energy;  // matching (|x[n]|^2 + |x[n+N]|^2) / 2
};

inline CpFold fold_cp_products(std::span<const cd> x, const LtePhyConfig& phy) {
    const auto slot = static_cast<std::size_t>(phy.slot_samples());
    const auto nfft = static_cast<std::size_t>(phy.fft_size);
    CpFold f{std::vector<cd>(slot), std::vector<double>(slot)};
    for (std::size_t n = 0; n + nfft < x.size(); ++n) {
        const std::size_t r = n % slot;
        f.corr[r] += x[n + nfft] * std::conj(x[n]);
        f.energy[r] += 0.5 * (std::norm(x[n]) + std::norm(x[n + nfft]));
    }
    return f;
}

// Sums the folded products over every CP position of a slot starting at
// `boundary` (mod slot length).
inline std::pair<cd, double> cp_sum(const CpFold& f, std::size_t boundary, const LtePhyConfig& phy) {
    const std::size_t slot = f.corr.size();
    cd g{};
    double e = 0.0;
    for (int s = 0; s < phy.symbols_per_slot; ++s) {
        const std::size_t off = boundary + static_cast<std::size_t>(phy.symbol_offset(s));
        for (int c = 0; c < phy.cp_length(s); ++c) {
            const std::size_t r = (off + static_cast<std::size_t>(c)) % slot;
            g += f.corr[r];
            e += f.energy[r];
        }
    }
    return {g, e};
}

inline void require_symbol(std::span<const cd> x, const LtePhyConfig& phy) {
    if (x.size() < static_cast<std::size_t>(phy.fft_size + phy.cp_first)) {
        throw LengthError("CFO estimation needs at least one OFDM symbol of samples");
    }
}

}  // namespace detail

struct CfoEstimate {
    double cfo_hz = 0.0;
    std::size_t slot_boundary = 0;  // hypothesis used, mod slot length
};

// Blind estimate: searches the slot-boundary hypothesis that maximizes the CP
// correlation metric, then reads the CFO from its phase. Range +/- scs/2.
inline CfoEstimate estimate_cfo_cp_blind(std::span<const cd> x, const SyncConfig& cfg = {}) {
    detail::require_symbol(x, cfg.phy);
    const auto fold = detail::fold_cp_products(x, cfg.phy);
    double best = -std::numeric_limits<double>::infinity();
    CfoEstimate out;
    cd best_g{};
    for (std::size_t b = 0; b < fold.corr.size(); ++b) {
        const auto [g, e] = detail::cp_sum(fold, b, cfg.phy);
        const double m = std::abs(g) - cfg.cp_rho * e;
        if (m > best) {
            best = m;
            best_g = g;
            out.slot_boundary = b;
        }
    }
    out.cfo_hz = std::arg(best_g) / (2.0 * std::numbers::pi) * cfg.phy.subcarrier_spacing;
    return out;
}

inline double estimate_cfo_cp(std::span<const cd> x, const SyncConfig& cfg = {}) {
    return estimate_cfo_cp_blind(x, cfg).cfo_hz;
}

// Estimate with the slot boundary known (after timing lock).
inline double estimate_cfo_cp_locked(std::span<const cd> x, std::size_t slot_boundary, const SyncConfig& cfg = {}) {
    detail::require_symbol(x, cfg.phy);
    const auto fold = detail::fold_cp_products(x, cfg.phy);
    const auto [g, e] = detail::cp_sum(fold, slot_boundary % fold.corr.size(), cfg.phy);
    (void)e;
    return std::arg(g) / (2.0 * std::numbers::pi) * cfg.phy.subcarrier_spacing;
}

inline std::vector<cd> compensate_cfo(std::span<const cd> x, double cfo_hz, double rate) {
    std::vector<cd> out(x.begin(), x.end());
    const double w = -2.0 * std::numbers::pi * cfo_hz / rate;
    for (std::size_t n = 0; n < out.size(); ++n) out[n] *= std::polar(1.0, w * static_cast<double>(n));
    return out;
}

// ---------------------------------------------------------------------------
// PSS

// CP-free time-domain PSS symbol for sector n_id_2.
inline std::vector<cd> pss_replica(int n_id_2, const LtePhyConfig& phy = {}) {
    const auto d = pss_sequence(n_id_2);
    std::vector<cd> buf(static_cast<std::size_t>(phy.fft_size));
    const int first = sync_first_subcarrier(phy);
    for (int n = 0; n < 62; ++n) {
        buf[static_cast<std::size_t>(subcarrier_bin(first + n, phy))] = d[static_cast<std::size_t>(n)];
    }
    detail::fft_unitary(buf, true);
    return buf;
}

struct PssDetection {
    bool detected = false;
    int n_id_2 = 0;
    int timing = 0;  // half-frame start, 0 <= timing < half frame
    double metric = 0.0;
    int occurrences = 0;  // PSS periods combined at the reported timing
};

// Offset of the PSS symbol body from a half-frame boundary.
inline int pss_body_offset(const LtePhyConfig& phy) { return phy.body_offset(phy.symbols_per_slot - 1); }

inline PssDetection detect_pss(std::span<const cd> x, const SyncConfig& cfg = {}) {
    const auto& phy = cfg.phy;
    const int nfft = phy.fft_size;
    const int half = phy.half_frame_samples();
    const int body = pss_body_offset(phy);
    const auto n = static_cast<int>(x.size());
    if (n < body + nfft) throw LengthError("PSS detection needs at least one PSS symbol of samples");

    const int n_lags = n - nfft + 1;
    std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 0; i < n; ++i) prefix[static_cast<std::size_t>(i) + 1] = prefix[static_cast<std::size_t>(i)] + std::norm(x[static_cast<std::size_t>(i)]);

    std::array<std::vector<double>, 3> corr_power;
    std::array<double, 3> replica_energy{};
    for (int r = 0; r < 3; ++r) {
        const auto rep = pss_replica(r, phy);
        for (const auto& v : rep) replica_energy[static_cast<std::size_t>(r)] += std::norm(v);
        auto& cp = corr_power[static_cast<std::size_t>(r)];
        cp.assign(static_cast<std::size_t>(n_lags), 0.0);
        for (int lag = 0; lag < n_lags; ++lag) {
            cd acc{};
            const cd* xp = x.data() + lag;
            for (int i = 0; i < nfft; ++i) acc += xp[i] * std::conj(rep[static_cast<std::size_t>(i)]);
            cp[static_cast<std::size_t>(lag)] = std::norm(acc);
        }
    }

    PssDetection best;
    best.metric = -1.0;
    const int n_tau = std::min(half, n_lags - body);
    for (int tau = 0; tau < n_tau; ++tau) {
        for (int r = 0; r < 3; ++r) {
            double num = 0.0, den = 0.0;
            int occ = 0;
            for (int lag = tau + body; lag < n_lags; lag += half, ++occ) {
                num += corr_power[static_cast<std::size_t>(r)][static_cast<std::size_t>(lag)];
                den += prefix[static_cast<std::size_t>(lag + nfft)] - prefix[static_cast<std::size_t>(lag)];
            }
            den *= replica_energy[static_cast<std::size_t>(r)];
            const double m = den > 0.0 ? num / den : 0.0;
            if (m > best.metric) {
                best.metric = m;
                best.n_id_2 = r;
                best.timing = tau;
                best.occurrences = occ;
            }
        }
    }
    best.metric = std::max(best.metric, 0.0);
    best.detected = best.metric >= cfg.pss_threshold;
    return best;
}

// ---------------------------------------------------------------------------
// SSS

struct SssDetection {
    bool detected = false;
    int n_id_1 = 0;
    int subframe_phase = 0;  // subframe (0 or 5) of the half-frame at the PSS timing
    double metric = 0.0;
};

namespace detail {

inline std::vector<cd> sync_band(std::span<const cd> x, std::size_t start, const LtePhyConfig& phy) {
    std::vector<cd> buf(x.begin() + static_cast<std::ptrdiff_t>(start),
                        x.begin() + static_cast<std::ptrdiff_t>(start) + phy.fft_size);
    fft_unitary(buf, false);
    std::vector<cd> out(62);
    const int first = sync_first_subcarrier(phy);
    for (int k = 0; k < 62; ++k) out[static_cast<std::size_t>(k)] = buf[static_cast<std::size_t>(subcarrier_bin(first + k, phy))];
    return out;
}

}  // namespace detail

inline SssDetection detect_sss(std::span<const cd> x, int n_id_2, int timing, const SyncConfig& cfg = {}) {
    const auto& phy = cfg.phy;
    const int half = phy.half_frame_samples();
    const int pss_body = pss_body_offset(phy);
    const int sss_body = phy.body_offset(phy.symbols_per_slot - 2);
    const auto d = pss_sequence(n_id_2);

    // Phase-equalized SSS observations, one per half-frame.
    std::vector<std::vector<cd>> z;
    double energy = 0.0;
    for (int m = 0;; ++m) {
        const long p0 = static_cast<long>(timing) + pss_body + static_cast<long>(m) * half;
        if (p0 + phy.fft_size > static_cast<long>(x.size())) break;
        const auto y_pss = detail::sync_band(x, static_cast<std::size_t>(p0), phy);
        const auto y_sss = detail::sync_band(x, static_cast<std::size_t>(timing + sss_body + m * half), phy);
        std::vector<cd> zm(62);
        for (std::size_t k = 0; k < 62; ++k) {
            const cd h = y_pss[k] * std::conj(d[k]);
            zm[k] = y_sss[k] * std::conj(h);
            energy += std::norm(zm[k]);
        }
        z.push_back(std::move(zm));
    }
    if (z.empty()) throw LengthError("SSS detection: no complete half-frame at the PSS timing");

    SssDetection best;
    best.metric = -1.0;
    if (!(energy > 0.0)) {
        best.metric = 0.0;
        return best;
    }
    for (int n1 = 0; n1 < 168; ++n1) {
        const auto s0 = sss_sequence(n1, n_id_2, 0);
        const auto s5 = sss_sequence(n1, n_id_2, 5);
        for (int phase : {0, 5}) {
            double num = 0.0;
            for (std::size_t m = 0; m < z.size(); ++m) {
                const bool first = (m % 2 == 0) == (phase == 0);
                const auto& s = first ? s0 : s5;
                cd acc{};
                for (std::size_t k = 0; k < 62; ++k) acc += z[m][k] * s[k];
                num += std::norm(acc);
            }
            const double metric = num / (62.0 * energy);
            if (metric > best.metric) {
                best.metric = metric;
                best.n_id_1 = n1;
                best.subframe_phase = phase;
            }
        }
    }
    best.detected = best.metric >= cfg.sss_threshold;
    return best;
}

// ---------------------------------------------------------------------------
// Cell search

struct CellSearchResult {
    CellIdentity cell;
    int timing_offset = 0;  // frame start at 1.92 Msps, 0 <= t < one frame
    int half_frame_timing = 0;
    double cfo_hz = 0.0;
    double pss_metric = 0.0;
    double sss_metric = 0.0;
    int subframe_phase = 0;
};

enum class SearchStatus { found, no_cell, group_ambiguous };

struct SyncedSegment {
    SearchStatus status = SearchStatus::no_cell;
    std::optional<CellSearchResult> result;
    double pss_metric = 0.0;
    double coarse_cfo_hz = 0.0;
    // Segment at the LTE base rate, CFO-compensated with the final estimate
    // when a cell was found (coarse estimate otherwise).
    std::vector<cd> baseband;
};

inline SyncedSegment synchronize(std::span<const cd> samples, double sample_rate, const SyncConfig& cfg = {}) {
    const double base = cfg.phy.base_rate();
    std::vector<cd> x = sample_rate == base ? std::vector<cd>(samples.begin(), samples.end())
                                            : resample(samples, sample_rate, base);
    SyncedSegment out;
    out.coarse_cfo_hz = estimate_cfo_cp(x, cfg);
    auto y = compensate_cfo(x, out.coarse_cfo_hz, base);

    const auto pss = detect_pss(y, cfg);
    out.pss_metric = pss.metric;
    if (!pss.detected) {
        out.baseband = std::move(y);
        return out;
    }
    const auto sss = detect_sss(y, pss.n_id_2, pss.timing, cfg);
    if (!sss.detected) {
        out.status = SearchStatus::group_ambiguous;
        out.baseband = std::move(y);
        return out;
    }

    CellSearchResult r;
    r.cell = {sss.n_id_1, pss.n_id_2};
    r.half_frame_timing = pss.timing;
    r.subframe_phase = sss.subframe_phase;
    r.timing_offset = (pss.timing + (sss.subframe_phase == 5 ? cfg.phy.half_frame_samples() : 0)) %
                      cfg.phy.frame_samples();
    r.pss_metric = pss.metric;
    r.sss_metric = sss.metric;
    r.cfo_hz = estimate_cfo_cp_locked(x, static_cast<std::size_t>(r.timing_offset), cfg);
    out.status = SearchStatus::found;
    out.result = r;
    out.baseband = compensate_cfo(x, r.cfo_hz, base);
    return out;
}

inline SyncedSegment synchronize(const IqSegment& seg, const SyncConfig& cfg = {}) {
    return synchronize(seg.samples, seg.sample_rate, cfg);
}

inline std::optional<CellSearchResult> cell_search(const IqSegment& seg, const SyncConfig& cfg = {}) {
    return synchronize(seg, cfg).result;
}

}  // namespace aeriq
