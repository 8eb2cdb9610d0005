#pragma once

// Per-segment result rows and their CSV forms. Columns are fixed; optional
// fields are written as empty cells.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aeriq/detail/text.hpp"
#include "aeriq/error.hpp"

namespace aeriq {

struct DecodedSegment {
    std::size_t segment_index = 0;
    double capture_time = 0.0;
    bool detected = false;
    double pss_metric = 0.0;
    std::optional<int> pci;
    std::optional<int> n_id_1;
    std::optional<int> n_id_2;
    std::optional<int> timing_offset;
    std::optional<int> subframe_phase;
    std::optional<double> cfo_hz;
    std::optional<double> sss_metric;
    std::optional<double> rsrp_dbfs;
    std::optional<double> noise_var;

    bool operator==(const DecodedSegment&) const = default;
};

struct GeoSample {
    std::size_t segment_index = 0;
    double capture_time = 0.0;
    double latitude = 0.0;
    double longitude = 0.0;
    double altitude_m = 0.0;
    double ground_distance_m = 0.0;
    double distance_3d_m = 0.0;
    double elevation_deg = 0.0;
    double tx_height_m = 0.0;
    double rx_height_m = 0.0;
    std::optional<int> pci;
    std::optional<double> cfo_hz;
    std::optional<double> rsrp_dbfs;
    double pss_metric = 0.0;
    bool detected = false;

    bool operator==(const GeoSample&) const = default;
};

inline constexpr std::string_view kSegmentsHeader =
    "segment_index,capture_time,detected,pci,n_id_1,n_id_2,timing_offset,subframe_phase,"
    "cfo_hz,pss_metric,sss_metric,rsrp_dbfs,noise_var";

inline constexpr std::string_view kGeoHeader =
    "segment_index,capture_time,latitude,longitude,altitude_m,ground_distance_m,distance_3d_m,"
    "elevation_deg,tx_height_m,rx_height_m,pci,cfo_hz,rsrp_dbfs,pss_metric,detected";

namespace detail {

template <class T>
std::string cell(const std::optional<T>& v) {
    if (!v) return {};
    if constexpr (std::is_floating_point_v<T>) {
        return format_double(*v);
    } else {
        return format_int(*v);
    }
}

inline std::string cell(double v) { return format_double(v); }

class RowReader {
public:
    RowReader(std::vector<std::string_view> cells, std::size_t row) : cells_(std::move(cells)), row_(row) {}

    std::string_view raw(std::size_t i) const {
        if (i >= cells_.size()) {
            throw SchemaError("row " + std::to_string(row_) + " has too few columns");
        }
        return trim(cells_[i]);
    }
    double num(std::size_t i) const {
        const auto v = parse_double(raw(i));
        if (!v) throw SchemaError("row " + std::to_string(row_) + ": bad number in column " + std::to_string(i));
        return *v;
    }
    std::optional<double> opt_num(std::size_t i) const {
        if (raw(i).empty()) return std::nullopt;
        return num(i);
    }
    std::int64_t integer(std::size_t i) const {
        const auto v = parse_int(raw(i));
        if (!v) throw SchemaError("row " + std::to_string(row_) + ": bad integer in column " + std::to_string(i));
        return *v;
    }
    std::optional<int> opt_int(std::size_t i) const {
        if (raw(i).empty()) return std::nullopt;
        return static_cast<int>(integer(i));
    }
    bool flag(std::size_t i) const {
        const auto s = raw(i);
        if (s == "true" || s == "1") return true;
        if (s == "false" || s == "0") return false;
        throw SchemaError("row " + std::to_string(row_) + ": bad flag in column " + std::to_string(i));
    }

private:
    std::vector<std::string_view> cells_;
    std::size_t row_;
};

template <class F>
void for_each_row(std::string_view text, std::string_view header, F&& f) {
    const auto rows = lines(text);
    if (rows.empty() || trim(rows.front()) != header) {
        throw SchemaError("unexpected CSV header; expected: " + std::string(header));
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (trim(rows[r]).empty()) continue;
        f(RowReader(split(rows[r]), r));
    }
}

}  // namespace detail

inline std::string format_segments_csv(const std::vector<DecodedSegment>& rows) {
    using detail::cell;
    std::string out(kSegmentsHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += detail::format_int(static_cast<std::int64_t>(r.segment_index)) + ',' + cell(r.capture_time) + ',' +
               (r.detected ? "true" : "false") + ',' + cell(r.pci) + ',' + cell(r.n_id_1) + ',' +
               cell(r.n_id_2) + ',' + cell(r.timing_offset) + ',' + cell(r.subframe_phase) + ',' +
               cell(r.cfo_hz) + ',' + cell(r.pss_metric) + ',' + cell(r.sss_metric) + ',' +
               cell(r.rsrp_dbfs) + ',' + cell(r.noise_var) + '\n';
    }
    return out;
}

inline std::vector<DecodedSegment> parse_segments_csv(std::string_view text) {
    std::vector<DecodedSegment> out;
    detail::for_each_row(text, kSegmentsHeader, [&](const detail::RowReader& r) {
        DecodedSegment s;
        s.segment_index = static_cast<std::size_t>(r.integer(0));
        s.capture_time = r.num(1);
        s.detected = r.flag(2);
        s.pci = r.opt_int(3);
        s.n_id_1 = r.opt_int(4);
        s.n_id_2 = r.opt_int(5);
        s.timing_offset = r.opt_int(6);
        s.subframe_phase = r.opt_int(7);
        s.cfo_hz = r.opt_num(8);
        s.pss_metric = r.num(9);
        s.sss_metric = r.opt_num(10);
        s.rsrp_dbfs = r.opt_num(11);
        s.noise_var = r.opt_num(12);
        out.push_back(s);
    });
    return out;
}

inline std::string format_geo_csv(const std::vector<GeoSample>& rows) {
    using detail::cell;
    std::string out(kGeoHeader);
    out += '\n';
    for (const auto& g : rows) {
        out += detail::format_int(static_cast<std::int64_t>(g.segment_index)) + ',' + cell(g.capture_time) + ',' +
               cell(g.latitude) + ',' + cell(g.longitude) + ',' + cell(g.altitude_m) + ',' +
               cell(g.ground_distance_m) + ',' + cell(g.distance_3d_m) + ',' + cell(g.elevation_deg) + ',' +
               cell(g.tx_height_m) + ',' + cell(g.rx_height_m) + ',' + cell(g.pci) + ',' + cell(g.cfo_hz) +
               ',' + cell(g.rsrp_dbfs) + ',' + cell(g.pss_metric) + ',' + (g.detected ? "true" : "false") +
               '\n';
    }
    return out;
}

inline std::vector<GeoSample> parse_geo_csv(std::string_view text) {
    std::vector<GeoSample> out;
    detail::for_each_row(text, kGeoHeader, [&](const detail::RowReader& r) {
        GeoSample g;
        g.segment_index = static_cast<std::size_t>(r.integer(0));
        g.capture_time = r.num(1);
        g.latitude = r.num(2);
        g.longitude = r.num(3);
        g.altitude_m = r.num(4);
        g.ground_distance_m = r.num(5);
        g.distance_3d_m = r.num(6);
        g.elevation_deg = r.num(7);
        g.tx_height_m = r.num(8);
        g.rx_height_m = r.num(9);
        g.pci = r.opt_int(10);
        g.cfo_hz = r.opt_num(11);
        g.rsrp_dbfs = r.opt_num(12);
        g.pss_metric = r.num(13);
        g.detected = r.flag(14);
        out.push_back(g);
    });
    return out;
}

}  // namespace aeriq
