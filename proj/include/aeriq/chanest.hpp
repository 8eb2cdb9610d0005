#pragma once

// CRS least-squares channel estimation, separable cubic-spline interpolation
// over the resource grid, and RSRP.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <vector>

#include "aeriq/error.hpp"
#include "aeriq/lte_phy.hpp"

namespace aeriq {

struct PilotEstimate {
    int subcarrier = 0;
    int symbol = 0;  // grid column
    cd h;
};

inline std::vector<PilotEstimate> extract_crs_ls(const ResourceGrid& grid, const CellIdentity& cell) {
    const auto& cfg = grid.config;
    std::vector<PilotEstimate> out;
    for (int l = 0; l < grid.n_symbols; ++l) {
        const int sym = grid.symbol_in_slot(l);
        if (!is_crs_symbol(sym, cfg)) continue;
        for (const auto& re : crs_symbols(cell, grid.slot_of(l), sym, cfg)) {
            // Unit-modulus pilots: y / x == y * conj(x).
            out.push_back({re.subcarrier, l, grid.at(re.subcarrier, l) * std::conj(re.value)});
        }
    }
    if (out.empty()) throw DomainError("grid is not slot-aligned: no CRS-bearing symbols");
    return out;
}

inline double compute_rsrp(std::span<const PilotEstimate> pilots) {
    if (pilots.empty()) throw DomainError("RSRP of an empty pilot set");
    double p = 0.0;
    for (const auto& e : pilots) p += std::norm(e.h);
    return 10.0 * std::log10(p / static_cast<double>(pilots.size()));
}

// Half the mean squared difference between neighbouring pilots of a symbol.
inline double estimate_noise_var(std::span<const PilotEstimate> pilots) {
    std::map<int, std::vector<const PilotEstimate*>> by_symbol;
    for (const auto& p : pilots) by_symbol[p.symbol].push_back(&p);
    double acc = 0.0;
    std::size_t count = 0;
    for (auto& [l, v] : by_symbol) {
        std::sort(v.begin(), v.end(), [](auto* a, auto* b) { return a->subcarrier < b->subcarrier; });
        for (std::size_t i = 1; i < v.size(); ++i) {
            acc += 0.5 * std::norm(v[i]->h - v[i - 1]->h);
            ++count;
        }
    }
    return count ? acc / static_cast<double>(count) : 0.0;
}

// ---------------------------------------------------------------------------
// Interpolation

namespace detail {

// Linear map from knot values to values at `at`: not-a-knot cubic spline for
// four or more knots, linear below that, one knot held constant. Outside the
// knot span the end slope is continued linearly.
class SplineWeights {
public:
    SplineWeights(std::span<const double> knots, std::span<const double> at)
        : n_(knots.size()), m_(at.size()), w_(n_ * m_, 0.0) {
        if (n_ == 0) throw DomainError("interpolation needs at least one knot");
        for (std::size_t i = 1; i < n_; ++i) {
            if (!(knots[i] > knots[i - 1])) throw DomainError("interpolation knots must increase");
        }
        std::vector<double> y(n_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            std::fill(y.begin(), y.end(), 0.0);
            y[j] = 1.0;
            const auto second = n_ >= 4 ? not_a_knot_second_derivatives(knots, y) : std::vector<double>(n_, 0.0);
            for (std::size_t q = 0; q < m_; ++q) w_[q * n_ + j] = evaluate(knots, y, second, at[q]);
        }
    }

    bool cubic() const { return n_ >= 4; }

    template <class T>
    T apply(std::size_t q, std::span<const T> values) const {
        T acc{};
        for (std::size_t j = 0; j < n_; ++j) acc += w_[q * n_ + j] * values[j];
        return acc;
    }

private:
    static std::vector<double> not_a_knot_second_derivatives(std::span<const double> x, std::span<const double> y) {
        const std::size_t n = x.size();
        std::vector<double> h(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x[i + 1] - x[i];
        // Dense system; n is at most a few dozen.
        std::vector<double> a(n * n, 0.0), b(n, 0.0);
        auto A = [&](std::size_t r, std::size_t c) -> double& { return a[r * n + c]; };
        A(0, 0) = h[1];
        A(0, 1) = -(h[0] + h[1]);
        A(0, 2) = h[0];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            A(i, i - 1) = h[i - 1];
            A(i, i) = 2.0 * (h[i - 1] + h[i]);
            A(i, i + 1) = h[i];
            b[i] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
        }
        A(n - 1, n - 3) = h[n - 2];
        A(n - 1, n - 2) = -(h[n - 3] + h[n - 2]);
        A(n - 1, n - 1) = h[n - 3];

        for (std::size_t c = 0; c < n; ++c) {
            std::size_t piv = c;
            for (std::size_t r = c + 1; r < n; ++r) {
                if (std::abs(A(r, c)) > std::abs(A(piv, c))) piv = r;
            }
            if (piv != c) {
                for (std::size_t k = 0; k < n; ++k) std::swap(A(c, k), A(piv, k));
                std::swap(b[c], b[piv]);
            }
            for (std::size_t r = c + 1; r < n; ++r) {
                const double f = A(r, c) / A(c, c);
                if (f == 0.0) continue;
                for (std::size_t k = c; k < n; ++k) A(r, k) -= f * A(c, k);
                b[r] -= f * b[c];
            }
        }
        std::vector<double> m(n);
        for (std::size_t c = n; c-- > 0;) {
            double s = b[c];
            for (std::size_t k = c + 1; k < n; ++k) s -= A(c, k) * m[k];
            m[c] = s / A(c, c);
        }
        return m;
    }

    static double evaluate(std::span<const double> x, std::span<const double> y, const std::vector<double>& m,
                           double t) {
        const std::size_t n = x.size();
        if (n == 1) return y[0];
        if (t <= x[0] || t >= x[n - 1]) {
            const bool left = t <= x[0];
            const std::size_t i = left ? 0 : n - 2;
            const double h = x[i + 1] - x[i];
            const double slope = left ? (y[1] - y[0]) / h - h * (2.0 * m[0] + m[1]) / 6.0
                                      : (y[n - 1] - y[n - 2]) / h + h * (m[n - 2] + 2.0 * m[n - 1]) / 6.0;
            return left ? y[0] + slope * (t - x[0]) : y[n - 1] + slope * (t - x[n - 1]);
        }
        const auto it = std::upper_bound(x.begin(), x.end(), t);
        const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
        const double h = x[i + 1] - x[i];
        const double a = x[i + 1] - t, b = t - x[i];
        return m[i] * a * a * a / (6.0 * h) + m[i + 1] * b * b * b / (6.0 * h) + (y[i] / h - m[i] * h / 6.0) * a +
               (y[i + 1] / h - m[i + 1] * h / 6.0) * b;
    }

    std::size_t n_, m_;
    std::vector<double> w_;  // m_ rows of n_ weights
};

}  // namespace detail

struct ChannelGrid {
    int n_subcarriers = 0;
    int n_symbols = 0;
    std::vector<cd> values;  // column-major
    bool linear_fallback = false;

    const cd& at(int k, int l) const { return values[static_cast<std::size_t>(l) * n_subcarriers + k]; }
    cd& at(int k, int l) { return values[static_cast<std::size_t>(l) * n_subcarriers + k]; }
};

// Frequency first within each pilot-bearing symbol, then time per subcarrier.
inline ChannelGrid interpolate_grid(std::span<const PilotEstimate> pilots, int n_symbols, int n_subcarriers = 72) {
    if (pilots.empty()) throw DomainError("no pilots to interpolate");
    std::map<int, std::vector<PilotEstimate>> by_symbol;
    for (const auto& p : pilots) by_symbol[p.symbol].push_back(p);

    std::vector<double> all_k(static_cast<std::size_t>(n_subcarriers));
    for (int k = 0; k < n_subcarriers; ++k) all_k[static_cast<std::size_t>(k)] = k;

    // Frequency pass. Pilot layouts repeat, so weights are cached per layout.
    std::map<std::vector<int>, detail::SplineWeights> freq_cache;
    std::vector<double> sym_pos;
    std::vector<std::vector<cd>> sym_vals;
    for (auto& [l, v] : by_symbol) {
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.subcarrier < b.subcarrier; });
        std::vector<int> layout;
        std::vector<double> knots;
        std::vector<cd> vals;
        for (const auto& p : v) {
            layout.push_back(p.subcarrier);
            knots.push_back(p.subcarrier);
            vals.push_back(p.h);
        }
        auto it = freq_cache.find(layout);
        if (it == freq_cache.end()) it = freq_cache.emplace(layout, detail::SplineWeights(knots, all_k)).first;
        std::vector<cd> col(static_cast<std::size_t>(n_subcarriers));
        for (int k = 0; k < n_subcarriers; ++k) {
            col[static_cast<std::size_t>(k)] = it->second.apply<cd>(static_cast<std::size_t>(k), vals);
        }
        sym_pos.push_back(l);
        sym_vals.push_back(std::move(col));
    }

    std::vector<double> all_l(static_cast<std::size_t>(n_symbols));
    for (int l = 0; l < n_symbols; ++l) all_l[static_cast<std::size_t>(l)] = l;
    const detail::SplineWeights time_w(sym_pos, all_l);

    ChannelGrid out;
    out.n_subcarriers = n_subcarriers;
    out.n_symbols = n_symbols;
    out.values.resize(static_cast<std::size_t>(n_subcarriers) * static_cast<std::size_t>(n_symbols));
    out.linear_fallback = !time_w.cubic();
    std::vector<cd> series(sym_pos.size());
    for (int k = 0; k < n_subcarriers; ++k) {
        for (std::size_t s = 0; s < sym_pos.size(); ++s) series[s] = sym_vals[s][static_cast<std::size_t>(k)];
        for (int l = 0; l < n_symbols; ++l) {
            out.at(k, l) = time_w.apply<cd>(static_cast<std::size_t>(l), series);
        }
    }
    return out;
}

struct ChannelEstimate {
    ChannelGrid h_grid;
    std::vector<PilotEstimate> h_crs;
    double rsrp_dbfs = 0.0;
    double noise_var_est = 0.0;
};

inline ChannelEstimate estimate_channel(const ResourceGrid& grid, const CellIdentity& cell) {
    ChannelEstimate est;
    est.h_crs = extract_crs_ls(grid, cell);
    est.h_grid = interpolate_grid(est.h_crs, grid.n_symbols, grid.n_subcarriers());
    est.rsrp_dbfs = compute_rsrp(est.h_crs);
    est.noise_var_est = estimate_noise_var(est.h_crs);
    return est;
}

// Demodulates every complete subframe of a base-rate segment given the frame
// start (mod one frame) found by cell search.
inline ResourceGrid demodulate_subframes(std::span<const cd> x, int frame_timing, const LtePhyConfig& phy = {}) {
    const int sf = phy.subframe_samples();
    const int s0 = frame_timing % sf;
    const int sf_index = (((s0 - frame_timing) / sf) % 10 + 10) % 10;
    const auto n_sf = x.size() > static_cast<std::size_t>(s0) ? (x.size() - static_cast<std::size_t>(s0)) / static_cast<std::size_t>(sf) : 0;
    if (n_sf == 0) throw LengthError("segment holds no complete subframe");
    return ofdm_demodulate(x, static_cast<std::size_t>(s0), phy, 2 * sf_index, static_cast<int>(2 * n_sf));
}

}  // namespace aeriq
