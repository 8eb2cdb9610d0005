#pragma once

// Air-to-ground propagation: free-space and two-ray (image method) path loss
// with elevation-dependent antenna patterns, intercept fitting, shadowing
// extraction and Gaussian / skew-normal shadowing fits.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aeriq/detail/nelder_mead.hpp"
#include "aeriq/error.hpp"
#include "aeriq/geo.hpp"
#include "aeriq/records.hpp"

namespace aeriq {

inline constexpr double kSpeedOfLight = 299792458.0;

inline double wavelength(double frequency_hz) { return kSpeedOfLight / frequency_hz; }

inline double fspl_db(double distance, double lambda) {
    if (!(distance > 0.0)) throw DomainError("free-space path loss needs a positive distance");
    return 20.0 * std::log10(4.0 * std::numbers::pi * distance / lambda);
}

// Half-wave dipole, vertical axis, elevation measured from the horizon.
inline double dipole_gain(double elevation_deg) {
    const double th = deg2rad(elevation_deg);
    const double c = std::cos(th);
    if (std::abs(c) < 1e-12) return 0.0;
    const double v = std::cos(0.5 * std::numbers::pi * std::sin(th)) / c;
    return v * v;
}

enum class AntennaPattern { isotropic, half_wave_dipole };

inline double pattern_gain(AntennaPattern p, double elevation_deg) {
    return p == AntennaPattern::isotropic ? 1.0 : dipole_gain(elevation_deg);
}

// Vertical-polarization Fresnel coefficient at grazing angle psi (radians).
inline std::complex<double> fresnel_vertical(double grazing_rad, double permittivity) {
    const double s = std::sin(grazing_rad), c = std::cos(grazing_rad);
    const std::complex<double> root = std::sqrt(std::complex<double>(permittivity - c * c, 0.0));
    return (permittivity * s - root) / (permittivity * s + root);
}

struct Reflection {
    enum class Kind { fixed, fresnel };
    Kind kind = Kind::fresnel;
    std::complex<double> gamma{-1.0, 0.0};  // used when kind == fixed
    double permittivity = 15.0;             // used when kind == fresnel

    std::complex<double> coefficient(double grazing_rad) const {
        return kind == Kind::fixed ? gamma : fresnel_vertical(grazing_rad, permittivity);
    }

    void validate() const {
        if (kind == Kind::fixed && std::abs(gamma) > 1.0 + 1e-12) {
            throw DomainError("fixed reflection coefficient must satisfy |gamma| <= 1");
        }
        if (kind == Kind::fresnel && !(permittivity > 1.0)) {
            throw DomainError("relative permittivity must exceed 1");
        }
    }
};

struct TwoRayConfig {
    double lambda = wavelength(3.51e9);
    Reflection reflection{};
    AntennaPattern tx_pattern = AntennaPattern::half_wave_dipole;
    AntennaPattern rx_pattern = AntennaPattern::half_wave_dipole;
};

// Complex amplitude gain of the LoS + ground-reflected pair, i.e.
// (lambda / 4 pi) * F with F the normalized field sum.
inline std::complex<double> two_ray_gain(const LinkGeometry& g, const TwoRayConfig& cfg) {
    cfg.reflection.validate();
    const double dh = g.rx_height - g.tx_height;
    const double d_los = std::hypot(g.ground_distance, dh);
    const double d_ref = std::hypot(g.ground_distance, g.tx_height + g.rx_height);
    if (!(d_los > 0.0)) throw DomainError("two-ray model: coincident antennas");

    const double el_los = rad2deg(std::atan2(dh, g.ground_distance));
    const double psi = std::atan2(g.tx_height + g.rx_height, g.ground_distance);
    const double el_ref = rad2deg(psi);
    // Patterns are symmetric about the horizon, so departure (-psi) and
    // arrival (+psi) share a gain.
    const double g_los = std::sqrt(pattern_gain(cfg.tx_pattern, el_los) * pattern_gain(cfg.rx_pattern, el_los));
    const double g_ref = std::sqrt(pattern_gain(cfg.tx_pattern, el_ref) * pattern_gain(cfg.rx_pattern, el_ref));

    const double dphi = 2.0 * std::numbers::pi * (d_ref - d_los) / cfg.lambda;
    const std::complex<double> field =
        g_los / d_los + cfg.reflection.coefficient(psi) * g_ref * std::polar(1.0, -dphi) / d_ref;
    return cfg.lambda / (4.0 * std::numbers::pi) * field;
}

inline double two_ray_pl_db(const LinkGeometry& g, const TwoRayConfig& cfg) {
    return -20.0 * std::log10(std::abs(two_ray_gain(g, cfg)));
}

enum class PathLossModel { fspl, two_ray };

inline std::string_view model_name(PathLossModel m) { return m == PathLossModel::fspl ? "fspl" : "two_ray"; }

// Free-space loss also carries the antenna patterns at the LoS elevation.
inline double model_path_loss_db(PathLossModel model, const LinkGeometry& g, const TwoRayConfig& cfg) {
    if (model == PathLossModel::two_ray) return two_ray_pl_db(g, cfg);
    const double d = std::hypot(g.ground_distance, g.rx_height - g.tx_height);
    const double el = rad2deg(std::atan2(g.rx_height - g.tx_height, g.ground_distance));
    const double gain = pattern_gain(cfg.tx_pattern, el) * pattern_gain(cfg.rx_pattern, el);
    return fspl_db(d, cfg.lambda) - 10.0 * std::log10(gain);
}

// ---------------------------------------------------------------------------
// Path-loss fitting

struct PathLossPoint {
    LinkGeometry geometry;
    double rsrp_db = 0.0;
};

inline std::vector<PathLossPoint> path_loss_points(std::span<const GeoSample> samples) {
    std::vector<PathLossPoint> out;
    for (const auto& s : samples) {
        if (!s.detected || !s.rsrp_dbfs || !std::isfinite(*s.rsrp_dbfs)) continue;
        out.push_back({geometry_from_heights(s.ground_distance_m, s.tx_height_m, s.rx_height_m), *s.rsrp_dbfs});
    }
    return out;
}

struct PropagationFit {
    PathLossModel model = PathLossModel::fspl;
    double p0_db = 0.0;
    double rmse_db = 0.0;
    std::size_t n_points = 0;
};

inline constexpr std::size_t kMinPathLossPoints = 10;

// Least-squares intercept of RSRP = p0 - PL: p0 is the mean of RSRP + PL.
// Points whose model loss is not finite (pattern nulls) are skipped.
inline PropagationFit fit_path_loss(std::span<const PathLossPoint> points, PathLossModel model,
                                    const TwoRayConfig& cfg) {
    std::vector<double> sums;
    sums.reserve(points.size());
    for (const auto& p : points) {
        const double pl = model_path_loss_db(model, p.geometry, cfg);
        if (std::isfinite(pl) && std::isfinite(p.rsrp_db)) sums.push_back(p.rsrp_db + pl);
    }
    if (sums.size() < kMinPathLossPoints) {
        throw FitError("path-loss fit needs at least " + std::to_string(kMinPathLossPoints) +
                       " usable points, got " + std::to_string(sums.size()));
    }
    PropagationFit fit;
    fit.model = model;
    fit.n_points = sums.size();
    fit.p0_db = std::accumulate(sums.begin(), sums.end(), 0.0) / static_cast<double>(sums.size());
    double ss = 0.0;
    for (double s : sums) ss += (s - fit.p0_db) * (s - fit.p0_db);
    fit.rmse_db = std::sqrt(ss / static_cast<double>(sums.size()));
    return fit;
}

// w_i = RSRP_i - p0 + PL_i over the same usable points the fit used.
inline std::vector<double> extract_shadowing(std::span<const PathLossPoint> points, const PropagationFit& fit,
                                             const TwoRayConfig& cfg) {
    std::vector<double> w;
    w.reserve(points.size());
    for (const auto& p : points) {
        const double pl = model_path_loss_db(fit.model, p.geometry, cfg);
        if (std::isfinite(pl) && std::isfinite(p.rsrp_db)) w.push_back(p.rsrp_db - fit.p0_db + pl);
    }
    return w;
}

// ---------------------------------------------------------------------------
// Distributions

inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

inline double normal_log_pdf(double z) { return -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi); }

inline double normal_log_cdf(double x) {
    if (x > -30.0) return std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
    const double x2 = x * x;
    return -0.5 * x2 - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) +
           std::log1p(-1.0 / x2 + 3.0 / (x2 * x2));
}

inline double skew_normal_log_pdf(double x, double xi, double omega, double alpha) {
    const double z = (x - xi) / omega;
    return std::log(2.0) - std::log(omega) + normal_log_pdf(z) + normal_log_cdf(alpha * z);
}

inline double skew_normal_pdf(double x, double xi, double omega, double alpha) {
    const double z = (x - xi) / omega;
    return 2.0 / omega * normal_pdf(z) * 0.5 * std::erfc(-alpha * z / std::numbers::sqrt2);
}

struct GaussianFit {
    double mu = 0.0;
    double sigma = 0.0;
    double loglik = 0.0;
};

struct SkewNormalFit {
    double xi = 0.0;
    double omega = 0.0;
    double alpha = 0.0;
    double loglik = 0.0;
    int evaluations = 0;
    bool converged = false;
};

struct ShadowingFit {
    std::vector<double> samples;
    GaussianFit gaussian;
    SkewNormalFit skew_normal;
};

inline double skew_normal_loglik(std::span<const double> x, double xi, double omega, double alpha) {
    if (!(omega > 0.0)) return -std::numeric_limits<double>::infinity();
    double ll = 0.0;
    for (double v : x) ll += skew_normal_log_pdf(v, xi, omega, alpha);
    return ll;
}

inline constexpr std::size_t kMinShadowingSamples = 30;

inline ShadowingFit fit_shadowing(std::span<const double> w) {
    if (w.size() < kMinShadowingSamples) {
        throw FitError("shadowing fit needs at least " + std::to_string(kMinShadowingSamples) + " samples");
    }
    const double n = static_cast<double>(w.size());
    const double mean = std::accumulate(w.begin(), w.end(), 0.0) / n;
    double m2 = 0.0, m3 = 0.0;
    for (double v : w) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    if (!(m2 > 0.0) || !std::isfinite(m2)) throw FitError("shadowing samples have zero variance");
    const double sd = std::sqrt(m2);

    ShadowingFit out;
    out.samples.assign(w.begin(), w.end());
    out.gaussian.mu = mean;
    out.gaussian.sigma = sd;
    out.gaussian.loglik = 0.0;
    for (double v : w) out.gaussian.loglik += normal_log_pdf((v - mean) / sd) - std::log(sd);

    // Moment-matched (xi, omega) for a given shape alpha.
    auto start_for = [&](double alpha) {
        const double delta = alpha / std::sqrt(1.0 + alpha * alpha);
        const double omega = sd / std::sqrt(1.0 - 2.0 * delta * delta / std::numbers::pi);
        const double xi = mean - omega * delta * std::sqrt(2.0 / std::numbers::pi);
        return std::array<double, 3>{(xi - mean) / sd, std::log(omega / sd), alpha};
    };

    // Method-of-moments shape from the sample skewness (clamped inside the
    // family's attainable range).
    const double skew = std::clamp(m3 / (m2 * sd), -0.99, 0.99);
    const double r = std::cbrt(2.0 * std::abs(skew) / (4.0 - std::numbers::pi));
    const double delta_mom = std::copysign(std::sqrt(std::numbers::pi / 2.0) * r / std::sqrt(1.0 + r * r), skew);
    const double delta_c = std::clamp(delta_mom, -0.995, 0.995);
    const double alpha_mom = delta_c / std::sqrt(1.0 - delta_c * delta_c);

    auto objective = [&](const std::array<double, 3>& p) {
        return -skew_normal_loglik(w, mean + sd * p[0], sd * std::exp(p[1]), p[2]);
    };

    const std::array<double, 6> alphas{alpha_mom, -5.0, -1.0, 0.0, 1.0, 5.0};
    detail::NelderMeadResult<3> best;
    int total_evals = 0;
    for (double a0 : alphas) {
        auto res = detail::nelder_mead(objective, start_for(a0), {0.1, 0.1, 0.5});
        // One restart from the optimum guards against a collapsed simplex.
        auto again = detail::nelder_mead(objective, res.x, {0.05, 0.05, 0.25});
        again.evaluations += res.evaluations;
        total_evals += again.evaluations;
        if (again.value < best.value) best = again;
    }
    out.skew_normal.xi = mean + sd * best.x[0];
    out.skew_normal.omega = sd * std::exp(best.x[1]);
    out.skew_normal.alpha = best.x[2];
    out.skew_normal.loglik = -best.value;
    out.skew_normal.evaluations = total_evals;
    out.skew_normal.converged = best.converged;
    // alpha = 0 is the Gaussian; keep the nesting exact under rounding.
    if (!(out.skew_normal.loglik >= out.gaussian.loglik)) {
        out.skew_normal.xi = mean;
        out.skew_normal.omega = sd;
        out.skew_normal.alpha = 0.0;
        out.skew_normal.loglik = out.gaussian.loglik;
    }
    return out;
}

}  // namespace aeriq
