#pragma once

// Batch orchestration behind the aeriq CLI: configuration, per-segment decode
// fan-out, GPS fusion, model fitting with a JSON report, and synthetic
// flights shaped like the field captures.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "aeriq/chanest.hpp"
#include "aeriq/detail/text.hpp"
#include "aeriq/error.hpp"
#include "aeriq/geo.hpp"
#include "aeriq/lte_phy.hpp"
#include "aeriq/propmodel.hpp"
#include "aeriq/records.hpp"
#include "aeriq/sigmf_io.hpp"
#include "aeriq/synth.hpp"
#include "aeriq/sync.hpp"

namespace aeriq {

// ---------------------------------------------------------------------------
// Configuration

struct CaptureConfig {
    double sample_rate_hz = 2.0e6;
    double center_frequency_hz = 3.51e9;
    double segment_duration_s = 0.020;
    double segment_period_s = 0.100;
};

struct ProcessingConfig {
    double detection_threshold = 0.15;
    double calibration_offset_db = 0.0;
    double clock_offset_s = 0.0;
    double max_extrapolation_s = 1.0;
};

struct ModelConfig {
    Reflection reflection{};
    AntennaPattern tx_pattern = AntennaPattern::half_wave_dipole;
    AntennaPattern rx_pattern = AntennaPattern::half_wave_dipole;
};

struct PipelineConfig {
    CaptureConfig capture;
    TxAnchor tx_anchor;
    ProcessingConfig processing;
    ModelConfig models;

    TwoRayConfig two_ray() const {
        return {wavelength(capture.center_frequency_hz), models.reflection, models.tx_pattern, models.rx_pattern};
    }

    SyncConfig sync() const {
        SyncConfig s;
        s.pss_threshold = processing.detection_threshold;
        return s;
    }

    void validate() const {
        if (!(capture.sample_rate_hz > 0) || !(capture.center_frequency_hz > 0) ||
            !(capture.segment_duration_s > 0) || !(capture.segment_period_s > 0)) {
            throw ConfigError("capture rates and durations must be positive");
        }
        if (capture.segment_duration_s > capture.segment_period_s) {
            throw ConfigError("segment duration exceeds the segment period");
        }
        if (!(std::abs(tx_anchor.latitude) <= 90) || !(std::abs(tx_anchor.longitude) <= 180)) {
            throw ConfigError("tx anchor coordinates out of range");
        }
        if (!(processing.detection_threshold > 0 && processing.detection_threshold <= 1)) {
            throw ConfigError("detection_threshold must lie in (0, 1]");
        }
        if (!(processing.max_extrapolation_s >= 0)) throw ConfigError("max_extrapolation_s must be >= 0");
        try {
            models.reflection.validate();
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
    }
};

namespace detail {

inline AntennaPattern parse_pattern(std::string_view v) {
    if (v == "dipole" || v == "half_wave_dipole") return AntennaPattern::half_wave_dipole;
    if (v == "isotropic") return AntennaPattern::isotropic;
    throw ConfigError("unknown antenna pattern '" + std::string(v) + "'");
}

inline std::string_view pattern_name(AntennaPattern p) {
    return p == AntennaPattern::isotropic ? "isotropic" : "dipole";
}

}  // namespace detail

// Assigns one "section.key" entry; unknown keys are rejected.
inline void set_config_value(PipelineConfig& cfg, std::string_view key, std::string_view raw) {
    auto value = std::string(detail::trim(raw));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
        value = value.substr(1, value.size() - 2);
    }
    auto num = [&]() {
        const auto v = detail::parse_double(value);
        if (!v || !std::isfinite(*v)) throw ConfigError("config key " + std::string(key) + ": expected a number, got '" + value + "'");
        return *v;
    };
    std::map<std::string_view, double*> numeric{
        {"capture.sample_rate_hz", &cfg.capture.sample_rate_hz},
        {"capture.center_frequency_hz", &cfg.capture.center_frequency_hz},
        {"capture.segment_duration_s", &cfg.capture.segment_duration_s},
        {"capture.segment_period_s", &cfg.capture.segment_period_s},
        {"tx_anchor.lat", &cfg.tx_anchor.latitude},
        {"tx_anchor.lon", &cfg.tx_anchor.longitude},
        {"tx_anchor.ground_alt_m", &cfg.tx_anchor.ground_altitude_m},
        {"tx_anchor.antenna_height_m", &cfg.tx_anchor.antenna_height_m},
        {"tx_anchor.rx_antenna_offset_m", &cfg.tx_anchor.rx_antenna_offset_m},
        {"processing.detection_threshold", &cfg.processing.detection_threshold},
        {"processing.calibration_offset_db", &cfg.processing.calibration_offset_db},
        {"processing.clock_offset_s", &cfg.processing.clock_offset_s},
        {"processing.max_extrapolation_s", &cfg.processing.max_extrapolation_s},
        {"models.permittivity", &cfg.models.reflection.permittivity},
    };
    if (const auto it = numeric.find(key); it != numeric.end()) {
        *it->second = num();
    } else if (key == "models.gamma_re") {
        cfg.models.reflection.gamma.real(num());
    } else if (key == "models.gamma_im") {
        cfg.models.reflection.gamma.imag(num());
    } else if (key == "models.reflection") {
        if (value == "fresnel") {
            cfg.models.reflection.kind = Reflection::Kind::fresnel;
        } else if (value == "fixed") {
            cfg.models.reflection.kind = Reflection::Kind::fixed;
        } else {
            throw ConfigError("models.reflection must be 'fresnel' or 'fixed'");
        }
    } else if (key == "models.tx_pattern") {
        cfg.models.tx_pattern = detail::parse_pattern(value);
    } else if (key == "models.rx_pattern") {
        cfg.models.rx_pattern = detail::parse_pattern(value);
    } else {
        throw ConfigError("unknown config key '" + std::string(key) + "'");
    }
}

// TOML-style subset: [section] headers, key = value lines, '#' comments.
inline PipelineConfig parse_config(std::string_view text, PipelineConfig cfg = {}) {
    std::string section;
    std::size_t lineno = 0;
    for (auto line : detail::lines(text)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
            section = std::string(detail::trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const auto key = std::string(detail::trim(line.substr(0, eq)));
        const auto full = section.empty() ? key : section + "." + key;
        set_config_value(cfg, full, line.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
    return parse_config(detail::read_file(path));
}

// ---------------------------------------------------------------------------
// Ordered parallel map

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

template <class T, class F>
std::vector<T> parallel_map(std::size_t n, unsigned workers, F&& f) {
    std::vector<std::optional<T>> slots(n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                slots[i].emplace(f(i));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        run();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
    }
    if (failure) std::rethrow_exception(failure);
    std::vector<T> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

// ---------------------------------------------------------------------------
// Decode

inline DecodedSegment decode_segment(const IqSegment& seg, const PipelineConfig& cfg) {
    DecodedSegment row;
    row.segment_index = seg.segment_index;
    row.capture_time = seg.capture_time;
    const auto sync_cfg = cfg.sync();
    const auto synced = synchronize(seg, sync_cfg);
    row.pss_metric = synced.pss_metric;
    if (synced.status != SearchStatus::found) return row;

    const auto& r = *synced.result;
    row.detected = true;
    row.pci = r.cell.pci();
    row.n_id_1 = r.cell.n_id_1;
    row.n_id_2 = r.cell.n_id_2;
    row.timing_offset = r.timing_offset;
    row.subframe_phase = r.subframe_phase;
    row.cfo_hz = r.cfo_hz;
    row.sss_metric = r.sss_metric;
    try {
        const auto grid = demodulate_subframes(synced.baseband, r.timing_offset, sync_cfg.phy);
        const auto pilots = extract_crs_ls(grid, r.cell);
        row.rsrp_dbfs = compute_rsrp(pilots) + cfg.processing.calibration_offset_db;
        row.noise_var = estimate_noise_var(pilots);
    } catch (const LengthError&) {
        // Too short for a full subframe: synchronized but no RSRP.
    }
    return row;
}

inline std::vector<DecodedSegment> decode_recording(const Recording& rec, const PipelineConfig& cfg,
                                                    unsigned workers = default_workers()) {
    return parallel_map<DecodedSegment>(rec.segments.size(), workers,
                                        [&](std::size_t i) { return decode_segment(rec.segments[i], cfg); });
}

// ---------------------------------------------------------------------------
// Fit report

struct ReportSample {
    std::size_t segment_index = 0;
    double capture_time = 0.0;
    double distance_3d_m = 0.0;
    double elevation_deg = 0.0;
    double rsrp_dbfs = 0.0;
    double fspl_predicted_dbfs = 0.0;
    double two_ray_predicted_dbfs = 0.0;
    double shadowing_db = 0.0;

    bool operator==(const ReportSample&) const = default;
};

struct FitReport {
    PropagationFit fspl;
    PropagationFit two_ray;
    std::size_t shadowing_n = 0;
    double shadowing_mean = 0.0;
    double shadowing_std = 0.0;
    double shadowing_min = 0.0;
    double shadowing_max = 0.0;
    GaussianFit gaussian;
    SkewNormalFit skew_normal;
    std::vector<ReportSample> samples;
    double wavelength_m = 0.0;
};

inline FitReport fit_geosamples(std::span<const GeoSample> geo, const PipelineConfig& cfg) {
    const auto tr = cfg.two_ray();
    // Only rows whose two models are both finite take part, so both fits and
    // the shadowing series share one sample set.
    std::vector<PathLossPoint> pts;
    std::vector<const GeoSample*> src;
    for (const auto& s : geo) {
        if (!s.detected || !s.rsrp_dbfs || !std::isfinite(*s.rsrp_dbfs)) continue;
        const auto g = geometry_from_heights(s.ground_distance_m, s.tx_height_m, s.rx_height_m);
        if (!(g.distance_3d > 0.0)) continue;
        if (!std::isfinite(model_path_loss_db(PathLossModel::fspl, g, tr)) ||
            !std::isfinite(model_path_loss_db(PathLossModel::two_ray, g, tr))) {
            continue;
        }
        pts.push_back({g, *s.rsrp_dbfs});
        src.push_back(&s);
    }
    FitReport rep;
    rep.wavelength_m = tr.lambda;
    rep.fspl = fit_path_loss(pts, PathLossModel::fspl, tr);
    rep.two_ray = fit_path_loss(pts, PathLossModel::two_ray, tr);
    const auto w = extract_shadowing(pts, rep.two_ray, tr);
    const auto sh = fit_shadowing(w);
    rep.gaussian = sh.gaussian;
    rep.skew_normal = sh.skew_normal;
    rep.shadowing_n = w.size();
    rep.shadowing_mean = sh.gaussian.mu;
    rep.shadowing_std = sh.gaussian.sigma;
    rep.shadowing_min = *std::min_element(w.begin(), w.end());
    rep.shadowing_max = *std::max_element(w.begin(), w.end());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        ReportSample r;
        r.segment_index = src[i]->segment_index;
        r.capture_time = src[i]->capture_time;
        r.distance_3d_m = pts[i].geometry.distance_3d;
        r.elevation_deg = pts[i].geometry.elevation_deg;
        r.rsrp_dbfs = pts[i].rsrp_db;
        r.fspl_predicted_dbfs = rep.fspl.p0_db - model_path_loss_db(PathLossModel::fspl, pts[i].geometry, tr);
        r.two_ray_predicted_dbfs = rep.two_ray.p0_db - model_path_loss_db(PathLossModel::two_ray, pts[i].geometry, tr);
        r.shadowing_db = w[i];
        rep.samples.push_back(r);
    }
    return rep;
}

inline nlohmann::ordered_json report_to_json(const FitReport& r) {
    auto fit = [](const PropagationFit& f) {
        return nlohmann::ordered_json{{"model", std::string(model_name(f.model))},
                                      {"p0_db", f.p0_db},
                                      {"rmse_db", f.rmse_db},
                                      {"n_points", f.n_points}};
    };
    nlohmann::ordered_json j;
    j["wavelength_m"] = r.wavelength_m;
    j["fspl"] = fit(r.fspl);
    j["two_ray"] = fit(r.two_ray);
    j["shadowing"] = {
        {"n", r.shadowing_n},
        {"mean_db", r.shadowing_mean},
        {"std_db", r.shadowing_std},
        {"min_db", r.shadowing_min},
        {"max_db", r.shadowing_max},
        {"gaussian", {{"mu_db", r.gaussian.mu}, {"sigma_db", r.gaussian.sigma}, {"loglik", r.gaussian.loglik}}},
        {"skew_normal",
         {{"xi_db", r.skew_normal.xi},
          {"omega_db", r.skew_normal.omega},
          {"alpha", r.skew_normal.alpha},
          {"loglik", r.skew_normal.loglik},
          {"evaluations", r.skew_normal.evaluations},
          {"converged", r.skew_normal.converged}}},
    };
    auto samples = nlohmann::ordered_json::array();
    for (const auto& s : r.samples) {
        samples.push_back({{"segment_index", s.segment_index},
                           {"capture_time", s.capture_time},
                           {"distance_3d_m", s.distance_3d_m},
                           {"elevation_deg", s.elevation_deg},
                           {"rsrp_dbfs", s.rsrp_dbfs},
                           {"fspl_predicted_dbfs", s.fspl_predicted_dbfs},
                           {"two_ray_predicted_dbfs", s.two_ray_predicted_dbfs},
                           {"shadowing_db", s.shadowing_db}});
    }
    j["samples"] = std::move(samples);
    return j;
}

inline FitReport report_from_json(const nlohmann::json& j) {
    try {
        auto fit = [](const nlohmann::json& f) {
            PropagationFit p;
            p.model = f.at("model").get<std::string>() == "fspl" ? PathLossModel::fspl : PathLossModel::two_ray;
            p.p0_db = f.at("p0_db").get<double>();
            p.rmse_db = f.at("rmse_db").get<double>();
            p.n_points = f.at("n_points").get<std::size_t>();
            return p;
        };
        FitReport r;
        r.wavelength_m = j.at("wavelength_m").get<double>();
        r.fspl = fit(j.at("fspl"));
        r.two_ray = fit(j.at("two_ray"));
        const auto& sh = j.at("shadowing");
        r.shadowing_n = sh.at("n").get<std::size_t>();
        r.shadowing_mean = sh.at("mean_db").get<double>();
        r.shadowing_std = sh.at("std_db").get<double>();
        r.shadowing_min = sh.at("min_db").get<double>();
        r.shadowing_max = sh.at("max_db").get<double>();
        const auto& g = sh.at("gaussian");
        r.gaussian = {g.at("mu_db").get<double>(), g.at("sigma_db").get<double>(), g.at("loglik").get<double>()};
        const auto& s = sh.at("skew_normal");
        r.skew_normal.xi = s.at("xi_db").get<double>();
        r.skew_normal.omega = s.at("omega_db").get<double>();
        r.skew_normal.alpha = s.at("alpha").get<double>();
        r.skew_normal.loglik = s.at("loglik").get<double>();
        r.skew_normal.evaluations = s.at("evaluations").get<int>();
        r.skew_normal.converged = s.at("converged").get<bool>();
        for (const auto& e : j.at("samples")) {
            ReportSample rs;
            rs.segment_index = e.at("segment_index").get<std::size_t>();
            rs.capture_time = e.at("capture_time").get<double>();
            rs.distance_3d_m = e.at("distance_3d_m").get<double>();
            rs.elevation_deg = e.at("elevation_deg").get<double>();
            rs.rsrp_dbfs = e.at("rsrp_dbfs").get<double>();
            rs.fspl_predicted_dbfs = e.at("fspl_predicted_dbfs").get<double>();
            rs.two_ray_predicted_dbfs = e.at("two_ray_predicted_dbfs").get<double>();
            rs.shadowing_db = e.at("shadowing_db").get<double>();
            r.samples.push_back(rs);
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("fit report: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Synthetic flights

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct ZigzagParams {
    double altitude_agl_m = 50.0;
    double start_east_m = 40.0;  // take-off point relative to the tower
    double start_north_m = 0.0;
    double leg_length_m = 200.0;
    double leg_spacing_m = 40.0;
    int legs = 4;
    double speed_mps = 10.0;
    double start_time = 1652364000.0;  // 2022-05-12T14:00:00Z
};

// Take-off point, alternating south/north legs stepping east, then straight
// back to the take-off point; sampled at 1 Hz.
inline std::vector<GpsFix> zigzag_track(const TxAnchor& anchor, const ZigzagParams& p) {
    std::vector<std::pair<double, double>> corners{{p.start_east_m, p.start_north_m}};
    double e = p.start_east_m, n = p.start_north_m;
    for (int leg = 0; leg < p.legs; ++leg) {
        n += (leg % 2 == 0 ? -1.0 : 1.0) * p.leg_length_m;
        corners.emplace_back(e, n);
        if (leg + 1 < p.legs) {
            e += p.leg_spacing_m;
            corners.emplace_back(e, n);
        }
    }
    corners.emplace_back(p.start_east_m, p.start_north_m);

    const Geodetic origin{anchor.latitude, anchor.longitude, anchor.ground_altitude_m};
    std::vector<GpsFix> fixes;
    double t = 0.0;
    std::size_t seg = 0;
    double along = 0.0;
    while (seg + 1 < corners.size()) {
        const auto [e0, n0] = corners[seg];
        const auto [e1, n1] = corners[seg + 1];
        const double len = std::hypot(e1 - e0, n1 - n0);
        if (along > len) {
            along -= len;
            ++seg;
            continue;
        }
        const double f = len > 0 ? along / len : 0.0;
        const auto g = enu_to_geodetic({e0 + f * (e1 - e0), n0 + f * (n1 - n0), p.altitude_agl_m}, origin);
        fixes.push_back({p.start_time + t, g.latitude, g.longitude, g.height});
        t += 1.0;
        along += p.speed_mps;
    }
    const auto g = enu_to_geodetic({p.start_east_m, p.start_north_m, p.altitude_agl_m}, origin);
    fixes.push_back({p.start_time + t, g.latitude, g.longitude, g.height});
    return fixes;
}

struct FlightSynthParams {
    CellIdentity cell = CellIdentity::from_pci(301);
    std::optional<double> snr_db = 20.0;
    double cfo_hz = 0.0;
    bool two_ray_channel = true;
    std::uint64_t seed = 1;
    // Optional cap on the number of segments (0 = whole track).
    std::size_t max_segments = 0;
};

struct SynthFlight {
    std::vector<IqSegment> segments;
    std::vector<GpsFix> gps;
    std::vector<int> frame_timing;  // true frame start in each segment at 1.92 Msps
    std::vector<LinkGeometry> geometry;
};

inline SynthFlight synthesize_flight(const std::vector<GpsFix>& track_fixes, const FlightSynthParams& params,
                                     const PipelineConfig& cfg, unsigned workers = default_workers()) {
    cfg.validate();
    const GpsTrack track(track_fixes);
    const LtePhyConfig phy;
    const double base = phy.base_rate();
    const double rate = cfg.capture.sample_rate_hz;
    const auto frame = synthesize_downlink(params.cell, 1, phy);
    const auto frame_len = static_cast<std::int64_t>(frame.size());
    const auto resampler = make_resampler(base, rate);

    const auto n_out = static_cast<std::size_t>(std::llround(cfg.capture.segment_duration_s * rate));
    const std::int64_t pad_in = resampler.down() * ((64 + resampler.down() - 1) / resampler.down());
    const std::int64_t pad_out = pad_in * resampler.up() / resampler.down();
    const auto n_in = static_cast<std::int64_t>(std::ceil(static_cast<double>(n_out) * base / rate)) + 2 * pad_in;

    std::vector<double> times;
    for (std::size_t k = 0;; ++k) {
        const double t = track.start_time() + static_cast<double>(k) * cfg.capture.segment_period_s;
        if (t + cfg.capture.segment_duration_s > track.end_time() + 1e-9) break;
        if (params.max_segments && k >= params.max_segments) break;
        times.push_back(t);
    }
    if (times.empty()) throw DataError("trajectory is shorter than one segment");

    const auto tr = cfg.two_ray();
    struct Out {
        IqSegment seg;
        int timing;
        LinkGeometry geom;
    };
    auto results = parallel_map<Out>(times.size(), workers, [&](std::size_t k) {
        const std::uint64_t s = splitmix64(params.seed ^ splitmix64(static_cast<std::uint64_t>(k)));
        const auto offset = static_cast<std::int64_t>(s % static_cast<std::uint64_t>(frame_len));
        std::vector<cd> tx(static_cast<std::size_t>(n_in));
        for (std::int64_t n = 0; n < n_in; ++n) {
            const std::int64_t idx = ((offset - pad_in + n) % frame_len + frame_len) % frame_len;
            tx[static_cast<std::size_t>(n)] = frame[static_cast<std::size_t>(idx)];
        }
        const auto pos = position_at(track, times[k]).fix;
        const auto geom = link_geometry(cfg.tx_anchor, pos);

        ImpairmentSpec spec;
        spec.cfo_hz = params.cfo_hz;
        spec.snr_db = params.snr_db;
        spec.channel = FlatChannel{params.two_ray_channel ? two_ray_gain(geom, tr) : cd(1.0, 0.0)};
        spec.input_rate = base;
        spec.output_rate = rate;
        spec.seed = splitmix64(s);
        const auto rx = apply_impairments(tx, spec);

        Out o;
        o.seg.samples.assign(rx.begin() + pad_out, rx.begin() + pad_out + static_cast<std::ptrdiff_t>(n_out));
        o.seg.sample_rate = rate;
        o.seg.center_frequency = cfg.capture.center_frequency_hz;
        o.seg.capture_time = times[k];
        o.seg.segment_index = k;
        o.timing = static_cast<int>((frame_len - offset) % frame_len);
        o.geom = geom;
        return o;
    });

    SynthFlight flight;
    flight.gps = track_fixes;
    for (auto& r : results) {
        flight.segments.push_back(std::move(r.seg));
        flight.frame_timing.push_back(r.timing);
        flight.geometry.push_back(r.geom);
    }
    return flight;
}

inline RecordingPaths write_flight(const SynthFlight& flight, const std::filesystem::path& base,
                                   const std::filesystem::path& gps_csv, const PipelineConfig& cfg) {
    SigmfGlobal g;
    g.sample_rate = cfg.capture.sample_rate_hz;
    g.center_frequency = cfg.capture.center_frequency_hz;
    g.description = "synthetic LTE downlink flight";
    const auto paths = write_recording(flight.segments, g, base);
    write_gps_csv(gps_csv, flight.gps);
    return paths;
}

}  // namespace aeriq
