#pragma once

// LTE downlink primitives for the 1.4 MHz (6 RB) normal-CP numerology:
// synchronization and reference sequences, resource-grid layout and unitary
// OFDM modulation/demodulation at 1.92 Msps.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aeriq/detail/fft.hpp"
#include "aeriq/error.hpp"

namespace aeriq {

using cd = std::complex<double>;

struct LtePhyConfig {
    int n_rb = 6;
    int fft_size = 128;
    int cp_first = 10;  // symbol 0 of each slot
    int cp_other = 9;
    int symbols_per_slot = 7;
    double subcarrier_spacing = 15.0e3;

    // Per-channel amplitude scales for synthesized REs (unit power default).
    double pss_scale = 1.0;
    double sss_scale = 1.0;
    double crs_scale = 1.0;
    double pbch_scale = 1.0;

    int n_subcarriers() const { return 12 * n_rb; }
    double base_rate() const { return subcarrier_spacing * fft_size; }
    int cp_length(int symbol_in_slot) const { return symbol_in_slot == 0 ? cp_first : cp_other; }
    int slot_samples() const {
        return symbols_per_slot * fft_size + cp_first + (symbols_per_slot - 1) * cp_other;
    }
    int subframe_samples() const { return 2 * slot_samples(); }
    int frame_samples() const { return 20 * slot_samples(); }
    int half_frame_samples() const { return 10 * slot_samples(); }

    // Offset of the first CP sample of a symbol from its slot boundary.
    int symbol_offset(int symbol_in_slot) const {
        return symbol_in_slot == 0 ? 0 : cp_first + fft_size + (symbol_in_slot - 1) * (cp_other + fft_size);
    }
    // Offset of the first post-CP sample from the slot boundary.
    int body_offset(int symbol_in_slot) const {
        return symbol_offset(symbol_in_slot) + cp_length(symbol_in_slot);
    }

    void validate() const {
        if (n_rb <= 0 || fft_size <= 0 || n_subcarriers() >= fft_size) {
            throw DomainError("LtePhyConfig: need 0 < 12*n_rb < fft_size");
        }
        if (cp_first < 0 || cp_other < 0 || symbols_per_slot <= 0) {
            throw DomainError("LtePhyConfig: invalid CP/slot layout");
        }
    }
};

struct CellIdentity {
    int n_id_1 = 0;  // group, 0..167
    int n_id_2 = 0;  // sector, 0..2

    int pci() const { return 3 * n_id_1 + n_id_2; }

    static CellIdentity from_pci(int pci) {
        if (pci < 0 || pci > 503) throw DomainError("PCI out of range 0..503: " + std::to_string(pci));
        return {pci / 3, pci % 3};
    }

    bool operator==(const CellIdentity&) const = default;
};

// Complex subcarrier x OFDM-symbol matrix. Column l is symbol l counted from
// the grid start; first_slot is the slot number (0..19) of column 0.
struct ResourceGrid {
    LtePhyConfig config{};
    int n_symbols = 0;
    int first_slot = 0;
    double start_symbol_time = 0.0;
    std::vector<cd> values;  // column-major, n_subcarriers per column

    ResourceGrid() = default;
    ResourceGrid(const LtePhyConfig& cfg, int symbols, int slot0 = 0)
        : config(cfg), n_symbols(symbols), first_slot(slot0),
          values(static_cast<std::size_t>(cfg.n_subcarriers()) * static_cast<std::size_t>(symbols)) {
        if (symbols < 0 || symbols % cfg.symbols_per_slot != 0) {
            throw DomainError("grid symbol count must be a multiple of symbols_per_slot");
        }
    }

    int n_subcarriers() const { return config.n_subcarriers(); }
    cd& at(int k, int l) { return values[static_cast<std::size_t>(l) * n_subcarriers() + k]; }
    const cd& at(int k, int l) const {
        return values[static_cast<std::size_t>(l) * n_subcarriers() + k];
    }
    std::span<cd> column(int l) {
        return {values.data() + static_cast<std::size_t>(l) * n_subcarriers(),
                static_cast<std::size_t>(n_subcarriers())};
    }
    std::span<const cd> column(int l) const {
        return {values.data() + static_cast<std::size_t>(l) * n_subcarriers(),
                static_cast<std::size_t>(n_subcarriers())};
    }
    int slot_of(int l) const { return (first_slot + l / config.symbols_per_slot) % 20; }
    int symbol_in_slot(int l) const { return l % config.symbols_per_slot; }
};

// ---------------------------------------------------------------------------
// Sequences

inline int pss_root(int n_id_2) {
    static constexpr std::array<int, 3> roots{25, 29, 34};
    if (n_id_2 < 0 || n_id_2 > 2) throw DomainError("n_id_2 must be 0..2");
    return roots[static_cast<std::size_t>(n_id_2)];
}

inline std::vector<cd> pss_sequence(int n_id_2) {
    const int u = pss_root(n_id_2);
    std::vector<cd> d(62);
    for (int n = 0; n < 62; ++n) {
        // Exponent reduced mod 126 in integers to keep the phase exact.
        const long e = n <= 30 ? static_cast<long>(u) * n * (n + 1) % 126
                               : static_cast<long>(u) * (n + 1) * (n + 2) % 126;
        const double ph = -std::numbers::pi * static_cast<double>(e) / 63.0;
        d[static_cast<std::size_t>(n)] = {std::cos(ph), std::sin(ph)};
    }
    return d;
}

namespace detail {

// Length-31 m-sequence in +/-1 form, x(i+5) = sum of taps x(i+t) mod 2,
// initial state x(0..4) = 0,0,0,0,1.
inline std::array<int, 31> msequence31(std::initializer_list<int> taps) {
    std::array<int, 36> x{};
    x[4] = 1;
    for (int i = 0; i + 5 < 36; ++i) {
        int acc = 0;
        for (int t : taps) acc += x[static_cast<std::size_t>(i + t)];
        x[static_cast<std::size_t>(i + 5)] = acc % 2;
    }
    std::array<int, 31> out{};
    for (int i = 0; i < 31; ++i) out[static_cast<std::size_t>(i)] = 1 - 2 * x[static_cast<std::size_t>(i)];
    return out;
}

}  // namespace detail

// SSS for subframe 0 or 5, entries +/-1 as doubles.
inline std::vector<double> sss_sequence(int n_id_1, int n_id_2, int subframe) {
    if (n_id_1 < 0 || n_id_1 > 167) throw DomainError("n_id_1 must be 0..167");
    if (n_id_2 < 0 || n_id_2 > 2) throw DomainError("n_id_2 must be 0..2");
    if (subframe != 0 && subframe != 5) throw DomainError("SSS subframe must be 0 or 5");

    static const auto s_t = detail::msequence31({0, 2});
    static const auto c_t = detail::msequence31({0, 3});
    static const auto z_t = detail::msequence31({0, 1, 2, 4});

    const int qp = n_id_1 / 30;
    const int q = (n_id_1 + qp * (qp + 1) / 2) / 30;
    const int mp = n_id_1 + q * (q + 1) / 2;
    const int m0 = mp % 31;
    const int m1 = (m0 + mp / 31 + 1) % 31;

    auto at = [](const std::array<int, 31>& seq, int i) { return seq[static_cast<std::size_t>(i % 31)]; };

    std::vector<double> d(62);
    for (int n = 0; n < 31; ++n) {
        const int s0 = at(s_t, n + m0), s1 = at(s_t, n + m1);
        const int c0 = at(c_t, n + n_id_2), c1 = at(c_t, n + n_id_2 + 3);
        const int z0 = at(z_t, n + m0 % 8), z1 = at(z_t, n + m1 % 8);
        if (subframe == 0) {
            d[static_cast<std::size_t>(2 * n)] = s0 * c0;
            d[static_cast<std::size_t>(2 * n + 1)] = s1 * c1 * z0;
        } else {
            d[static_cast<std::size_t>(2 * n)] = s1 * c0;
            d[static_cast<std::size_t>(2 * n + 1)] = s0 * c1 * z1;
        }
    }
    return d;
}

// Length-31 Gold sequence c(n), n = 0..length-1, for initializer c_init.
inline std::vector<std::uint8_t> gold_sequence(std::uint32_t c_init, std::size_t length) {
    constexpr std::size_t nc = 1600;
    const std::size_t total = nc + length + 31;
    std::vector<std::uint8_t> x1(total, 0), x2(total, 0);
    x1[0] = 1;
    for (std::size_t i = 0; i < 31; ++i) x2[i] = static_cast<std::uint8_t>((c_init >> i) & 1u);
    for (std::size_t n = 0; n + 31 < total; ++n) {
        x1[n + 31] = static_cast<std::uint8_t>((x1[n + 3] + x1[n]) & 1u);
        x2[n + 31] = static_cast<std::uint8_t>((x2[n + 3] + x2[n + 2] + x2[n + 1] + x2[n]) & 1u);
    }
    std::vector<std::uint8_t> c(length);
    for (std::size_t n = 0; n < length; ++n) c[n] = static_cast<std::uint8_t>((x1[n + nc] + x2[n + nc]) & 1u);
    return c;
}

inline bool is_crs_symbol(int symbol_in_slot, const LtePhyConfig& config = {}) {
    return symbol_in_slot == 0 || symbol_in_slot == config.symbols_per_slot - 3;
}

struct CrsElement {
    int subcarrier = 0;
    cd value;
};

// Port-0 cell-specific reference signal on one CRS-bearing symbol.
inline std::vector<CrsElement> crs_symbols(const CellIdentity& cell, int slot, int symbol,
                                           const LtePhyConfig& config = {}) {
    if (slot < 0 || slot > 19) throw DomainError("slot must be 0..19");
    if (!is_crs_symbol(symbol, config)) {
        throw DomainError("symbol " + std::to_string(symbol) + " carries no port-0 CRS");
    }
    constexpr int n_rb_max = 110;
    const int pci = cell.pci();
    const std::uint32_t c_init =
        (1u << 10) * static_cast<std::uint32_t>(7 * (slot + 1) + symbol + 1) *
            static_cast<std::uint32_t>(2 * pci + 1) +
        static_cast<std::uint32_t>(2 * pci) + 1u;
    const auto c = gold_sequence(c_init, 4 * n_rb_max);

    const int v = symbol == 0 ? 0 : 3;
    const int v_shift = pci % 6;
    const double a = 1.0 / std::numbers::sqrt2;
    std::vector<CrsElement> out;
    out.reserve(static_cast<std::size_t>(2 * config.n_rb));
    for (int m = 0; m < 2 * config.n_rb; ++m) {
        const int mp = m + n_rb_max - config.n_rb;
        const cd r(a * (1 - 2 * c[static_cast<std::size_t>(2 * mp)]),
                   a * (1 - 2 * c[static_cast<std::size_t>(2 * mp + 1)]));
        out.push_back({6 * m + (v + v_shift) % 6, r});
    }
    return out;
}

// PSS/SSS occupy the 62 subcarriers around DC: grid rows 5..66 for 6 RB.
inline int sync_first_subcarrier(const LtePhyConfig& config = {}) {
    return config.n_subcarriers() / 2 - 31;
}

// ---------------------------------------------------------------------------
// OFDM

// FFT bin of grid row k (rows are ordered low to high frequency, DC skipped).
inline int subcarrier_bin(int k, const LtePhyConfig& config) {
    const int half = config.n_subcarriers() / 2;
    return k < half ? config.fft_size - half + k : k - half + 1;
}

inline std::vector<cd> ofdm_modulate(const ResourceGrid& grid) {
    const auto& cfg = grid.config;
    cfg.validate();
    const int n_slots = grid.n_symbols / cfg.symbols_per_slot;
    std::vector<cd> out;
    out.reserve(static_cast<std::size_t>(n_slots) * static_cast<std::size_t>(cfg.slot_samples()));
    std::vector<cd> buf(static_cast<std::size_t>(cfg.fft_size));
    for (int l = 0; l < grid.n_symbols; ++l) {
        std::fill(buf.begin(), buf.end(), cd{});
        const auto col = grid.column(l);
        for (int k = 0; k < cfg.n_subcarriers(); ++k) {
            buf[static_cast<std::size_t>(subcarrier_bin(k, cfg))] = col[static_cast<std::size_t>(k)];
        }
        detail::fft_unitary(buf, true);
        const int cp = cfg.cp_length(l % cfg.symbols_per_slot);
        out.insert(out.end(), buf.end() - cp, buf.end());
        out.insert(out.end(), buf.begin(), buf.end());
    }
    return out;
}

// Demodulates whole slots starting at the slot boundary `offset`. n_slots = 0
// takes every complete slot available.
inline ResourceGrid ofdm_demodulate(std::span<const cd> samples, std::size_t offset,
                                    const LtePhyConfig& config = {}, int first_slot = 0,
                                    int n_slots = 0) {
    config.validate();
    const auto slot_len = static_cast<std::size_t>(config.slot_samples());
    const std::size_t available = samples.size() > offset ? (samples.size() - offset) / slot_len : 0;
    if (n_slots == 0) n_slots = static_cast<int>(available);
    if (n_slots <= 0 || static_cast<std::size_t>(n_slots) > available) {
        throw LengthError("insufficient samples for " + std::to_string(std::max(n_slots, 1)) +
                          " slot(s) from offset " + std::to_string(offset));
    }
    ResourceGrid grid(config, n_slots * config.symbols_per_slot, first_slot % 20);
    grid.start_symbol_time = static_cast<double>(offset) / config.base_rate();
    std::vector<cd> buf(static_cast<std::size_t>(config.fft_size));
    for (int l = 0; l < grid.n_symbols; ++l) {
        const int sym = l % config.symbols_per_slot;
        const std::size_t start = offset + static_cast<std::size_t>(l / config.symbols_per_slot) * slot_len +
                                  static_cast<std::size_t>(config.body_offset(sym));
        std::copy_n(samples.begin() + static_cast<std::ptrdiff_t>(start), config.fft_size, buf.begin());
        detail::fft_unitary(buf, false);
        auto col = grid.column(l);
        for (int k = 0; k < config.n_subcarriers(); ++k) {
            col[static_cast<std::size_t>(k)] = buf[static_cast<std::size_t>(subcarrier_bin(k, config))];
        }
    }
    return grid;
}

}  // namespace aeriq
