#include <gtest/gtest.h>

#include "aeriq/chanest.hpp"
#include "aeriq/synth.hpp"
#include "aeriq/sync.hpp"
#include "oracles.hpp"

using namespace aeriq;

namespace {

// Transmitted grid of subframes 0..n_sf-1 with every CRS RE multiplied by f(k, l).
template <class F>
ResourceGrid crs_grid(const CellIdentity& cell, int n_slots, F f) {
    ResourceGrid g({}, 7 * n_slots);
    for (int l = 0; l < g.n_symbols; ++l) {
        if (!is_crs_symbol(g.symbol_in_slot(l))) continue;
        for (const auto& re : crs_symbols(cell, g.slot_of(l), g.symbol_in_slot(l))) g.at(re.subcarrier, l) = f(re.subcarrier, l) * re.value;
    }
    return g;
}

ResourceGrid received(const std::vector<cd>& x, const CellIdentity& cell) {
    IqSegment seg;
    seg.samples = x;
    seg.sample_rate = 1.92e6;
    const auto s = synchronize(seg);
    EXPECT_EQ(s.status, SearchStatus::found);
    EXPECT_EQ(s.result->cell, cell);
    return demodulate_subframes(s.baseband, s.result->timing_offset);
}

}  // namespace

TEST(Ls, ScaledPilotsGiveExactEstimate) {
    const auto cell = CellIdentity::from_pci(301);
    const auto g = crs_grid(cell, 2, [](int, int) { return cd(2.0, 0.0); });
    const auto h = extract_crs_ls(g, cell);
    EXPECT_EQ(h.size(), 48u);
    for (const auto& p : h) EXPECT_NEAR(std::abs(p.h - cd(2.0, 0.0)), 0.0, 1e-14);
}

TEST(Ls, FlatGainEndToEnd) {
    const auto cell = CellIdentity::from_pci(301);
    ImpairmentSpec s;
    const cd gain(0.3, -0.4);
    s.channel = FlatChannel{gain};
    const auto grid = received(apply_impairments(synthesize_downlink(cell, 2), s), cell);
    for (const auto& p : extract_crs_ls(grid, cell)) EXPECT_NEAR(std::abs(p.h - gain), 0.0, 1e-6);
}

TEST(Ls, WrongPciDropsPower) {
    const auto cell = CellIdentity::from_pci(301);
    const auto grid = ofdm_demodulate(synthesize_downlink(cell, 2), 0);
    const double right = compute_rsrp(extract_crs_ls(grid, cell));
    const double wrong = compute_rsrp(extract_crs_ls(grid, CellIdentity::from_pci(302)));
    EXPECT_GT(right - wrong, 10.0);
}

TEST(Ls, NoCrsSymbolsRejected) {
    EXPECT_THROW(compute_rsrp(std::span<const PilotEstimate>{}), DomainError);
    EXPECT_THROW(interpolate_grid({}, 14), DomainError);
}

TEST(Interp, ConstantReproducedExactly) {
    const auto cell = CellIdentity::from_pci(17);
    const cd c(0.7, -1.1);
    const auto est = estimate_channel(crs_grid(cell, 4, [&](int, int) { return c; }), cell);
    EXPECT_FALSE(est.h_grid.linear_fallback);
    for (const auto& v : est.h_grid.values) EXPECT_NEAR(std::abs(v - c), 0.0, 1e-12);
}

TEST(Interp, LinearInSubcarrierExact) {
    const auto cell = CellIdentity::from_pci(4);
    auto f = [](int k, int) { return cd(0.2 + 0.01 * k, -0.5 + 0.003 * k); };
    const auto est = estimate_channel(crs_grid(cell, 4, f), cell);
    for (int l = 0; l < 28; ++l) {
        for (int k = 6; k < 66; ++k) EXPECT_NEAR(std::abs(est.h_grid.at(k, l) - f(k, l)), 0.0, 1e-9) << k << "," << l;
    }
}

TEST(Interp, CubicPolynomialInTimeExact) {
    const auto cell = CellIdentity::from_pci(4);
    auto f = [](int, int l) {
        const double t = l;
        return cd(1.0 + 0.05 * t - 0.002 * t * t + 0.0001 * t * t * t, 0.0);
    };
    const auto est = estimate_channel(crs_grid(cell, 6, f), cell);
    // Interior of the pilot span (first CRS column 0, last 39).
    for (int l = 0; l <= 39; ++l) {
        for (int k = 0; k < 72; k += 7) EXPECT_NEAR(std::abs(est.h_grid.at(k, l) - f(k, l)), 0.0, 1e-9) << l;
    }
}

TEST(Interp, FewPilotSymbolsFallBackToLinear) {
    const auto cell = CellIdentity::from_pci(4);
    const auto est = estimate_channel(crs_grid(cell, 1, [](int, int) { return cd(1.0, 0.0); }), cell);
    EXPECT_TRUE(est.h_grid.linear_fallback);
    EXPECT_EQ(est.h_grid.n_symbols, 7);
}

TEST(Interp, SplineMatchesNaturalFormulaAtKnots) {
    const std::vector<double> knots{0, 1, 2.5, 4, 7};
    const std::vector<double> at{0, 1, 2.5, 4, 7, -1, 8};
    const detail::SplineWeights w(knots, at);
    const std::vector<double> y{1, -2, 0.5, 3, 2};
    for (std::size_t q = 0; q < 5; ++q) EXPECT_NEAR(w.apply<double>(q, y), y[q], 1e-12);
    // A cubic is reproduced everywhere, extrapolation included only for lines.
    const std::vector<double> lin{1, 3, 6, 9, 15};
    EXPECT_NEAR(w.apply<double>(5, lin), -1.0, 1e-12);
    EXPECT_NEAR(w.apply<double>(6, lin), 17.0, 1e-12);
}

TEST(Interp, TwoTapChannelNmse) {
    const auto cell = CellIdentity::from_pci(222);
    const auto tx = synthesize_downlink(cell, 2);
    const cd a(0.5, 0.3);
    std::vector<cd> x(tx.size());
    for (std::size_t n = 0; n < tx.size(); ++n) x[n] = tx[n] + (n >= 2 ? a * tx[n - 2] : cd{});
    ImpairmentSpec s;
    s.snr_db = 20.0;
    s.seed = 5;
    const auto y = apply_impairments(x, s);
    const auto grid = ofdm_demodulate(y, 0, {}, 0, 20);
    const auto est = estimate_channel(grid, cell);
    double err = 0, ref = 0;
    const LtePhyConfig phy;
    for (int k = 0; k < 72; ++k) {
        const int bin = subcarrier_bin(k, phy);
        const int f = bin < 64 ? bin : bin - 128;
        const cd h = 1.0 + a * std::polar(1.0, -2.0 * std::numbers::pi * 2.0 * f / 128.0);
        for (int l = 0; l < grid.n_symbols; ++l) {
            err += std::norm(est.h_grid.at(k, l) - h);
            ref += std::norm(h);
        }
    }
    EXPECT_LT(10 * std::log10(err / ref), -20.0);
}

TEST(Rsrp, UnitPilotsAreZeroDbfs) {
    std::vector<PilotEstimate> p(30, PilotEstimate{0, 0, cd(1.0, 0.0)});
    EXPECT_EQ(compute_rsrp(p), 0.0);
}

TEST(Rsrp, ScalingByTenAddsTwentyDb) {
    const auto cell = CellIdentity::from_pci(88);
    ImpairmentSpec s;
    s.snr_db = 15;
    s.seed = 2;
    auto x = apply_impairments(synthesize_downlink(cell, 2), s);
    const auto r1 = compute_rsrp(extract_crs_ls(ofdm_demodulate(x, 0), cell));
    for (auto& v : x) v *= 10.0;
    const auto r2 = compute_rsrp(extract_crs_ls(ofdm_demodulate(x, 0), cell));
    EXPECT_NEAR(r2 - r1, 20.0, 1e-6);
}

TEST(Rsrp, FlatGainAt30dB) {
    const auto cell = CellIdentity::from_pci(301);
    ImpairmentSpec s;
    s.channel = FlatChannel{{0.0, 0.1}};
    s.snr_db = 30;
    s.seed = 8;
    s.delay_samples = 1413;
    const auto grid = received(apply_impairments(synthesize_downlink(cell, 2), s), cell);
    EXPECT_NEAR(compute_rsrp(extract_crs_ls(grid, cell)), -20.0, 0.1);
}

TEST(Noise, VarianceEstimateTracksInjectedNoise) {
    const auto cell = CellIdentity::from_pci(9);
    auto clean = ofdm_demodulate(synthesize_downlink(cell, 1), 0);
    EXPECT_NEAR(estimate_noise_var(extract_crs_ls(clean, cell)), 0.0, 1e-20);
    const auto noise = oracle::random_complex(clean.values.size(), 4, std::sqrt(0.01 / 2));
    for (std::size_t i = 0; i < noise.size(); ++i) clean.values[i] += noise[i];
    EXPECT_NEAR(estimate_noise_var(extract_crs_ls(clean, cell)), 0.01, 0.002);
}

TEST(Subframes, FrameOffsetMapsToSlotNumbers) {
    const auto cell = CellIdentity::from_pci(61);
    const auto x = synthesize_downlink(cell, 2);
    // Window starting mid-frame: frame start at 19200 - 5000 within the window.
    const std::vector<cd> w(x.begin() + 5000, x.begin() + 5000 + 30000);
    const auto g = demodulate_subframes(w, 19200 - 5000);
    EXPECT_EQ(g.first_slot % 2, 0);
    const auto p = extract_crs_ls(g, cell);
    for (const auto& e : p) EXPECT_NEAR(std::abs(e.h - cd(1.0, 0.0)), 0.0, 1e-9);
}
