#pragma once

// GPS track interpolation, WGS-84 local frames and transmitter-to-UAV link
// geometry, and fusion of per-segment results with the GPS track.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "aeriq/detail/text.hpp"
#include "aeriq/error.hpp"
#include "aeriq/records.hpp"
#include "aeriq/sigmf_io.hpp"

namespace aeriq {

namespace wgs84 {
inline constexpr double a = 6378137.0;
inline constexpr double f = 1.0 / 298.257223563;
inline constexpr double b = a * (1.0 - f);
inline constexpr double e2 = f * (2.0 - f);
inline constexpr double ep2 = e2 / ((1.0 - f) * (1.0 - f));
}  // namespace wgs84

inline constexpr double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
inline constexpr double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

struct Ecef {
    double x = 0, y = 0, z = 0;
};

struct Enu {
    double east = 0, north = 0, up = 0;
};

struct Geodetic {
    double latitude = 0;   // degrees
    double longitude = 0;  // degrees
    double height = 0;     // metres above the ellipsoid (or any consistent datum)
};

inline Ecef geodetic_to_ecef(const Geodetic& g) {
    const double lat = deg2rad(g.latitude), lon = deg2rad(g.longitude);
    const double s = std::sin(lat), c = std::cos(lat);
    const double n = wgs84::a / std::sqrt(1.0 - wgs84::e2 * s * s);
    return {(n + g.height) * c * std::cos(lon), (n + g.height) * c * std::sin(lon),
            (n * (1.0 - wgs84::e2) + g.height) * s};
}

// Bowring's parametric-latitude iteration; three rounds reach double precision
// for terrestrial heights.
inline Geodetic ecef_to_geodetic(const Ecef& e) {
    const double p = std::hypot(e.x, e.y);
    const double lon = std::atan2(e.y, e.x);
    double beta = std::atan2(e.z, (1.0 - wgs84::f) * p);
    double lat = 0.0;
    for (int i = 0; i < 5; ++i) {
        const double sb = std::sin(beta), cb = std::cos(beta);
        lat = std::atan2(e.z + wgs84::ep2 * wgs84::b * sb * sb * sb,
                         p - wgs84::e2 * wgs84::a * cb * cb * cb);
        beta = std::atan2((1.0 - wgs84::f) * std::sin(lat), std::cos(lat));
    }
    const double s = std::sin(lat);
    const double n = wgs84::a / std::sqrt(1.0 - wgs84::e2 * s * s);
    const double h = std::abs(std::cos(lat)) > 1e-10 ? p / std::cos(lat) - n
                                                      : std::abs(e.z) - wgs84::b;
    return {rad2deg(lat), rad2deg(lon), h};
}

inline Enu geodetic_to_enu(const Geodetic& point, const Geodetic& origin) {
    const Ecef p = geodetic_to_ecef(point), o = geodetic_to_ecef(origin);
    const double dx = p.x - o.x, dy = p.y - o.y, dz = p.z - o.z;
    const double lat = deg2rad(origin.latitude), lon = deg2rad(origin.longitude);
    const double sl = std::sin(lat), cl = std::cos(lat), so = std::sin(lon), co = std::cos(lon);
    return {-so * dx + co * dy, -sl * co * dx - sl * so * dy + cl * dz,
            cl * co * dx + cl * so * dy + sl * dz};
}

inline Geodetic enu_to_geodetic(const Enu& v, const Geodetic& origin) {
    const Ecef o = geodetic_to_ecef(origin);
    const double lat = deg2rad(origin.latitude), lon = deg2rad(origin.longitude);
    const double sl = std::sin(lat), cl = std::cos(lat), so = std::sin(lon), co = std::cos(lon);
    const double dx = -so * v.east - sl * co * v.north + cl * co * v.up;
    const double dy = co * v.east - sl * so * v.north + cl * so * v.up;
    const double dz = cl * v.north + sl * v.up;
    return ecef_to_geodetic({o.x + dx, o.y + dy, o.z + dz});
}

// ---------------------------------------------------------------------------
// Track

class GpsTrack {
public:
    explicit GpsTrack(std::vector<GpsFix> fixes) : fixes_(std::move(fixes)) {
        if (fixes_.size() < 2) throw DataError("GPS track needs at least 2 fixes");
        for (std::size_t i = 0; i < fixes_.size(); ++i) check_fix(fixes_[i], i + 1);
        check_time_order(fixes_);
    }

    const std::vector<GpsFix>& fixes() const { return fixes_; }
    double start_time() const { return fixes_.front().time; }
    double end_time() const { return fixes_.back().time; }

private:
    std::vector<GpsFix> fixes_;
};

struct TrackPosition {
    GpsFix fix;
    bool clamped = false;  // query was outside the span but within tolerance
};

inline TrackPosition position_at(const GpsTrack& track, double t, double max_extrapolation = 1.0) {
    const auto& fx = track.fixes();
    if (t < track.start_time() || t > track.end_time()) {
        const double gap = t < track.start_time() ? track.start_time() - t : t - track.end_time();
        if (!(gap <= max_extrapolation)) {
            throw OutOfRangeError("time " + detail::format_double(t) + " is " +
                                  detail::format_double(gap) + " s outside the GPS track span [" +
                                  detail::format_double(track.start_time()) + ", " +
                                  detail::format_double(track.end_time()) + "]");
        }
        GpsFix f = t < track.start_time() ? fx.front() : fx.back();
        f.time = t;
        return {f, true};
    }
    const auto it = std::lower_bound(fx.begin(), fx.end(), t,
                                     [](const GpsFix& f, double v) { return f.time < v; });
    if (it->time == t) return {*it, false};
    const GpsFix& hi = *it;
    const GpsFix& lo = *(it - 1);
    const double w = (t - lo.time) / (hi.time - lo.time);
    auto lerp = [w](double x0, double x1) { return x0 + w * (x1 - x0); };
    return {{t, lerp(lo.latitude, hi.latitude), lerp(lo.longitude, hi.longitude),
             lerp(lo.altitude, hi.altitude)},
            false};
}

// ---------------------------------------------------------------------------
// Link geometry

struct TxAnchor {
    double latitude = 35.727451;
    double longitude = -78.695974;
    double ground_altitude_m = 0.0;  // GPS altitude of the tower base
    double antenna_height_m = 10.0;  // above the tower base
    double rx_antenna_offset_m = 0.0;
};

struct LinkGeometry {
    double ground_distance = 0;  // m
    double distance_3d = 0;      // m
    double elevation_deg = 0;    // from tx toward rx, positive upward
    double tx_height = 0;        // m above the tx ground plane
    double rx_height = 0;
};

inline LinkGeometry geometry_from_heights(double ground_distance, double tx_height, double rx_height) {
    LinkGeometry g;
    g.ground_distance = ground_distance;
    g.tx_height = tx_height;
    g.rx_height = rx_height;
    g.distance_3d = std::hypot(ground_distance, rx_height - tx_height);
    g.elevation_deg = rad2deg(std::atan2(rx_height - tx_height, ground_distance));
    return g;
}

inline LinkGeometry link_geometry(const TxAnchor& tx, const GpsFix& rx) {
    const Geodetic origin{tx.latitude, tx.longitude, tx.ground_altitude_m};
    const Enu v = geodetic_to_enu({rx.latitude, rx.longitude, rx.altitude}, origin);
    return geometry_from_heights(std::hypot(v.east, v.north), tx.antenna_height_m,
                                 v.up + tx.rx_antenna_offset_m);
}

// ---------------------------------------------------------------------------
// Fusion

struct FuseOptions {
    double clock_offset_s = 0.0;  // added to SDR capture times before lookup
    double max_extrapolation_s = 1.0;
};

struct FuseResult {
    std::vector<GeoSample> samples;
    std::size_t dropped = 0;
};

inline FuseResult fuse(std::span<const DecodedSegment> records, const GpsTrack& track,
                       const TxAnchor& anchor, const FuseOptions& options = {}) {
    FuseResult out;
    for (const auto& r : records) {
        const double t = r.capture_time + options.clock_offset_s;
        TrackPosition pos;
        try {
            pos = position_at(track, t, options.max_extrapolation_s);
        } catch (const OutOfRangeError&) {
            ++out.dropped;
            continue;
        }
        const auto geom = link_geometry(anchor, pos.fix);
        GeoSample g;
        g.segment_index = r.segment_index;
        g.capture_time = r.capture_time;
        g.latitude = pos.fix.latitude;
        g.longitude = pos.fix.longitude;
        g.altitude_m = pos.fix.altitude;
        g.ground_distance_m = geom.ground_distance;
        g.distance_3d_m = geom.distance_3d;
        g.elevation_deg = geom.elevation_deg;
        g.tx_height_m = geom.tx_height;
        g.rx_height_m = geom.rx_height;
        g.detected = r.detected;
        g.pci = r.pci;
        g.cfo_hz = r.cfo_hz;
        g.rsrp_dbfs = r.rsrp_dbfs;
        g.pss_metric = r.pss_metric;
        out.samples.push_back(g);
    }
    if (out.samples.empty() && !records.empty()) {
        double lo = records.front().capture_time, hi = lo;
        for (const auto& r : records) {
            lo = std::min(lo, r.capture_time);
            hi = std::max(hi, r.capture_time);
        }
        throw FusionError("no segment overlaps the GPS track: segments span [" +
                          detail::format_double(lo + options.clock_offset_s) + ", " +
                          detail::format_double(hi + options.clock_offset_s) + "], GPS spans [" +
                          detail::format_double(track.start_time()) + ", " +
                          detail::format_double(track.end_time()) + "]");
    }
    std::stable_sort(out.samples.begin(), out.samples.end(),
                     [](const GeoSample& a, const GeoSample& b) { return a.capture_time < b.capture_time; });
    return out;
}

}  // namespace aeriq
