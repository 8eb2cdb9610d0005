#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "aeriq/error.hpp"

namespace aeriq {

// Polyphase rational resampler (up by L, down by M) with a Kaiser-windowed
// sinc prototype. The prototype is centred, so output sample m lands exactly
// at time m / out_rate relative to input sample 0.
class RationalResampler {
public:
    // passband_fraction: edge of the protected band as a fraction of the
    // lower of the two Nyquist rates. The stopband starts where images would
    // fold back onto that band.
    RationalResampler(int up, int down, double stopband_db = 75.0, double passband_fraction = 0.75)
        : up_(up), down_(down) {
        if (up <= 0 || down <= 0) throw DomainError("resampling factors must be positive");
        const int g = std::gcd(up, down);
        up_ /= g;
        down_ /= g;
        if (up_ == 1 && down_ == 1) return;

        const double high = static_cast<double>(up_);  // input rate normalized to 1
        const double min_nyq = 0.5 * std::min(1.0, static_cast<double>(up_) / down_);
        const double transition = 2.0 * (1.0 - passband_fraction) * min_nyq;
        const double cutoff = min_nyq / high;              // cycles per high-rate sample
        const double dw = 2.0 * std::numbers::pi * transition / high;

        const double beta = stopband_db > 50.0 ? 0.1102 * (stopband_db - 8.7)
                                               : 0.5842 * std::pow(stopband_db - 21.0, 0.4) +
                                                     0.07886 * (stopband_db - 21.0);
        int n_taps = static_cast<int>(std::ceil((stopband_db - 8.0) / (2.285 * dw))) + 1;
        half_ = n_taps / 2 + 1;
        const double i0b = std::cyl_bessel_i(0.0, beta);
        taps_.resize(static_cast<std::size_t>(2 * half_ + 1));
        double sum = 0.0;
        for (int k = -half_; k <= half_; ++k) {
            const double r = static_cast<double>(k) / half_;
            const double w = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0b;
            const double x = 2.0 * cutoff * k;
            const double sinc = k == 0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
            const double h = 2.0 * cutoff * sinc * w;
            taps_[static_cast<std::size_t>(k + half_)] = h;
            sum += h;
        }
        // Unity DC gain after zero-stuffing by L.
        for (auto& h : taps_) h *= high / sum;
    }

    int up() const { return up_; }
    int down() const { return down_; }
    std::size_t n_taps() const { return taps_.size(); }

    std::size_t output_length(std::size_t n_in) const {
        return static_cast<std::size_t>(
            (static_cast<std::uint64_t>(n_in) * static_cast<std::uint64_t>(up_) + down_ - 1) /
            static_cast<std::uint64_t>(down_));
    }

    std::vector<std::complex<double>> process(std::span<const std::complex<double>> in) const {
        if (up_ == 1 && down_ == 1) return {in.begin(), in.end()};
        const std::size_t n_out = output_length(in.size());
        std::vector<std::complex<double>> out(n_out);
        const std::int64_t L = up_, H = half_, N = static_cast<std::int64_t>(in.size());
        for (std::size_t m = 0; m < n_out; ++m) {
            const std::int64_t t = static_cast<std::int64_t>(m) * down_;
            std::int64_t n_lo = (t - H + L - 1);
            n_lo = n_lo >= 0 ? n_lo / L : -((-n_lo) / L);
            const std::int64_t n_hi = (t + H) / L;
            std::complex<double> acc{};
            for (std::int64_t n = std::max<std::int64_t>(n_lo, 0); n <= std::min(n_hi, N - 1); ++n) {
                acc += in[static_cast<std::size_t>(n)] * taps_[static_cast<std::size_t>(t - n * L + H)];
            }
            out[m] = acc;
        }
        return out;
    }

private:
    int up_;
    int down_;
    int half_ = 0;
    std::vector<double> taps_;
};

// Rates must be whole Hz; the reduced ratio is capped so a nonsense rate pair
// cannot blow up the filter length.
inline RationalResampler make_resampler(double in_rate, double out_rate, int max_factor = 1000) {
    const auto in_hz = std::llround(in_rate), out_hz = std::llround(out_rate);
    if (in_hz <= 0 || out_hz <= 0 || std::abs(in_rate - static_cast<double>(in_hz)) > 1e-6 ||
        std::abs(out_rate - static_cast<double>(out_hz)) > 1e-6) {
        throw DomainError("resampling needs positive whole-Hz rates");
    }
    const auto g = std::gcd(in_hz, out_hz);
    const auto up = out_hz / g, down = in_hz / g;
    if (up > max_factor || down > max_factor) {
        throw DomainError("resampling ratio " + std::to_string(up) + "/" + std::to_string(down) +
                          " exceeds the supported factor limit");
    }
    return RationalResampler(static_cast<int>(up), static_cast<int>(down));
}

inline std::vector<std::complex<double>> resample(std::span<const std::complex<double>> in,
                                                  double in_rate, double out_rate) {
    return make_resampler(in_rate, out_rate).process(in);
}

}  // namespace aeriq
