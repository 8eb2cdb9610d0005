#pragma once

// SigMF recording pairs (JSON meta + raw little-endian float64 data) for I/Q
// segments and GPS tracks, plus the plain CSV form of GPS logs.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "aeriq/detail/text.hpp"
#include "aeriq/error.hpp"

namespace aeriq {

enum class SampleFormat { complex_f64_le, real_f64_le };

inline std::string_view datatype_token(SampleFormat f) {
    return f == SampleFormat::complex_f64_le ? "cf64_le" : "rf64_le";
}

inline std::optional<SampleFormat> parse_datatype(std::string_view token) {
    if (token == "cf64_le") return SampleFormat::complex_f64_le;
    if (token == "rf64_le") return SampleFormat::real_f64_le;
    return std::nullopt;
}

inline std::size_t sample_width(SampleFormat f) {
    return f == SampleFormat::complex_f64_le ? 16 : 8;
}

struct SigmfGlobal {
    SampleFormat datatype = SampleFormat::complex_f64_le;
    double sample_rate = 2.0e6;
    std::string version = "1.0.0";
    std::string author;
    std::string description;
    double center_frequency = 3.51e9;

    bool operator==(const SigmfGlobal&) const = default;
};

struct SigmfCapture {
    std::uint64_t sample_start = 0;
    double frequency = 0.0;
    double datetime = 0.0;  // UTC seconds

    bool operator==(const SigmfCapture&) const = default;
};

struct IqSegment {
    std::vector<std::complex<double>> samples;
    double sample_rate = 2.0e6;
    double center_frequency = 3.51e9;
    double capture_time = 0.0;  // UTC seconds
    std::size_t segment_index = 0;
};

struct GpsFix {
    double time = 0.0;  // UTC seconds
    double latitude = 0.0;
    double longitude = 0.0;
    double altitude = 0.0;  // metres above mean sea level

    bool operator==(const GpsFix&) const = default;
};

struct RecordingPaths {
    std::filesystem::path meta;
    std::filesystem::path data;
};

inline RecordingPaths recording_paths(const std::filesystem::path& base) {
    return {std::filesystem::path(base.string() + ".sigmf-meta"),
            std::filesystem::path(base.string() + ".sigmf-data")};
}

struct Recording {
    SigmfGlobal global;
    std::vector<SigmfCapture> captures;
    std::vector<IqSegment> segments;
};

// ---------------------------------------------------------------------------
// Timestamps

// ISO-8601 UTC with microsecond precision, e.g. 2022-05-12T14:03:21.250000Z.
inline std::string format_iso8601(double utc_seconds) {
    using namespace std::chrono;
    const auto total_us = static_cast<std::int64_t>(std::llround(utc_seconds * 1e6));
    std::int64_t secs = total_us / 1000000;
    std::int64_t us = total_us % 1000000;
    if (us < 0) {
        us += 1000000;
        secs -= 1;
    }
    std::int64_t days = secs / 86400;
    std::int64_t sod = secs % 86400;
    if (sod < 0) {
        sod += 86400;
        days -= 1;
    }
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lld.%06lldZ",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), static_cast<long long>(sod / 3600),
                  static_cast<long long>((sod / 60) % 60), static_cast<long long>(sod % 60),
                  static_cast<long long>(us));
    return buf;
}

// Accepts YYYY-MM-DDTHH:MM:SS[.f+](Z|+00:00). Fractions beyond microseconds
// are rounded.
inline std::optional<double> parse_iso8601(std::string_view s) {
    using namespace std::chrono;
    auto num = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
        if (pos + len > s.size()) return std::nullopt;
        int v = 0;
        for (std::size_t i = pos; i < pos + len; ++i) {
            if (s[i] < '0' || s[i] > '9') return std::nullopt;
            v = v * 10 + (s[i] - '0');
        }
        return v;
    };
    if (s.size() < 20 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') ||
        s[13] != ':' || s[16] != ':') {
        return std::nullopt;
    }
    const auto y = num(0, 4), mo = num(5, 2), d = num(8, 2);
    const auto h = num(11, 2), mi = num(14, 2), se = num(17, 2);
    if (!y || !mo || !d || !h || !mi || !se) return std::nullopt;
    if (*h > 23 || *mi > 59 || *se > 60) return std::nullopt;
    const year_month_day ymd{year{*y}, month{static_cast<unsigned>(*mo)},
                             day{static_cast<unsigned>(*d)}};
    if (!ymd.ok()) return std::nullopt;

    std::size_t pos = 19;
    std::int64_t frac_us = 0;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        const std::size_t start = pos;
        long double frac = 0.0L, scale = 0.1L;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
            frac += scale * (s[pos] - '0');
            scale /= 10.0L;
            ++pos;
        }
        if (pos == start) return std::nullopt;
        frac_us = static_cast<std::int64_t>(std::llround(frac * 1e6L));
    }
    const auto tz = s.substr(pos);
    if (tz != "Z" && tz != "+00:00") return std::nullopt;

    const std::int64_t days = sys_days{ymd}.time_since_epoch().count();
    const std::int64_t total_us =
        ((days * 86400 + *h * 3600 + *mi * 60 + *se) * 1000000) + frac_us;
    return static_cast<double>(total_us) / 1e6;
}

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot create " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("write failed for " + path.string());
}

inline void append_f64_le(std::string& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

inline double read_f64_le(const char* p) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    }
    return std::bit_cast<double>(bits);
}

inline nlohmann::json parse_meta(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed SigMF metadata: ") + e.what(), e.byte);
    }
}

inline double json_number(const nlohmann::json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_number()) {
        throw SchemaError(std::string("missing or non-numeric field ") + key);
    }
    return it->get<double>();
}

inline std::string json_string_or(const nlohmann::json& obj, const char* key,
                                  std::string fallback = {}) {
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) return fallback;
    return it->get<std::string>();
}

inline SigmfGlobal decode_global(const nlohmann::json& meta) {
    if (!meta.is_object() || !meta.contains("global") || !meta["global"].is_object()) {
        throw SchemaError("SigMF metadata lacks a global object");
    }
    const auto& g = meta["global"];
    SigmfGlobal out;
    const auto token = json_string_or(g, "core:datatype");
    if (token.empty()) throw SchemaError("global object lacks core:datatype");
    const auto fmt = parse_datatype(token);
    if (!fmt) throw UnsupportedFormatError("unsupported SigMF datatype '" + token + "'");
    out.datatype = *fmt;
    out.sample_rate = json_number(g, "core:sample_rate");
    if (!(out.sample_rate > 0.0)) throw SchemaError("core:sample_rate must be positive");
    out.version = json_string_or(g, "core:version");
    out.author = json_string_or(g, "core:author");
    out.description = json_string_or(g, "core:description");
    if (g.contains("aeriq:center_frequency")) {
        out.center_frequency = json_number(g, "aeriq:center_frequency");
    } else {
        out.center_frequency = 0.0;
    }
    return out;
}

inline std::vector<SigmfCapture> decode_captures(const nlohmann::json& meta) {
    if (!meta.contains("captures") || !meta["captures"].is_array()) {
        throw SchemaError("SigMF metadata lacks a captures array");
    }
    if (!meta.contains("annotations") || !meta["annotations"].is_array()) {
        throw SchemaError("SigMF metadata lacks an annotations array");
    }
    std::vector<SigmfCapture> out;
    for (const auto& c : meta["captures"]) {
        SigmfCapture cap;
        const auto it = c.find("core:sample_start");
        if (it == c.end() || !it->is_number_unsigned()) {
            throw SchemaError("capture " + std::to_string(out.size()) +
                              " lacks a non-negative core:sample_start");
        }
        cap.sample_start = it->get<std::uint64_t>();
        cap.frequency = c.contains("core:frequency") ? json_number(c, "core:frequency") : 0.0;
        const auto dt = json_string_or(c, "core:datetime");
        if (!dt.empty()) {
            const auto t = parse_iso8601(dt);
            if (!t) {
                throw SchemaError("capture " + std::to_string(out.size()) +
                                  " has unparseable core:datetime '" + dt + "'");
            }
            cap.datetime = *t;
        }
        if (!out.empty() && cap.sample_start <= out.back().sample_start) {
            throw InconsistencyError("capture " + std::to_string(out.size()) +
                                     " sample_start is not strictly increasing");
        }
        out.push_back(cap);
    }
    return out;
}

inline void write_meta(const std::filesystem::path& path, const SigmfGlobal& g,
                       const std::vector<SigmfCapture>& caps) {
    // ordered_json keeps the key order stable for byte-identical outputs.
    nlohmann::ordered_json meta;
    meta["global"] = {
        {"core:datatype", std::string(datatype_token(g.datatype))},
        {"core:sample_rate", g.sample_rate},
        {"core:version", g.version},
        {"core:author", g.author},
        {"core:description", g.description},
        {"aeriq:center_frequency", g.center_frequency},
        {"core:extensions",
         nlohmann::ordered_json::array(
             {{{"name", "aeriq"}, {"version", "1.0.0"}, {"optional", true}}})},
    };
    auto captures = nlohmann::ordered_json::array();
    for (const auto& c : caps) {
        captures.push_back({{"core:sample_start", c.sample_start},
                            {"core:frequency", c.frequency},
                            {"core:datetime", format_iso8601(c.datetime)}});
    }
    meta["captures"] = std::move(captures);
    meta["annotations"] = nlohmann::ordered_json::array();
    write_file(path, meta.dump(2) + "\n");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// I/Q recordings

inline Recording read_recording(const std::filesystem::path& meta_path,
                                const std::filesystem::path& data_path) {
    const auto meta = detail::parse_meta(detail::read_file(meta_path));
    Recording rec;
    rec.global = detail::decode_global(meta);
    if (rec.global.datatype != SampleFormat::complex_f64_le) {
        throw UnsupportedFormatError("expected a cf64_le I/Q recording, found " +
                                     std::string(datatype_token(rec.global.datatype)));
    }
    rec.captures = detail::decode_captures(meta);
    if (rec.captures.empty()) throw SchemaError("recording has no captures");

    const auto bytes = detail::read_file(data_path);
    const std::size_t width = sample_width(rec.global.datatype);
    if (bytes.size() % width != 0) {
        throw TruncationError("data file length " + std::to_string(bytes.size()) +
                                  " is not a multiple of the sample width",
                              rec.captures.size() - 1);
    }
    const std::uint64_t total = bytes.size() / width;

    for (std::size_t i = 0; i < rec.captures.size(); ++i) {
        const std::uint64_t start = rec.captures[i].sample_start;
        const std::uint64_t end =
            i + 1 < rec.captures.size() ? rec.captures[i + 1].sample_start : total;
        if (start >= total || end > total) {
            throw TruncationError("data file truncated: capture " + std::to_string(i) +
                                      " starts or ends beyond the " + std::to_string(total) +
                                      " available samples",
                                  i);
        }
        IqSegment seg;
        seg.sample_rate = rec.global.sample_rate;
        seg.center_frequency =
            rec.captures[i].frequency != 0.0 ? rec.captures[i].frequency : rec.global.center_frequency;
        seg.capture_time = rec.captures[i].datetime;
        seg.segment_index = i;
        seg.samples.resize(end - start);
        const char* p = bytes.data() + start * width;
        for (std::size_t n = 0; n < seg.samples.size(); ++n, p += 16) {
            const double re = detail::read_f64_le(p);
            const double im = detail::read_f64_le(p + 8);
            if (!std::isfinite(re) || !std::isfinite(im)) {
                throw DataError("non-finite sample in capture " + std::to_string(i));
            }
            seg.samples[n] = {re, im};
        }
        rec.segments.push_back(std::move(seg));
    }
    return rec;
}

inline RecordingPaths write_recording(std::span<const IqSegment> segments, SigmfGlobal global,
                                      const std::filesystem::path& base) {
    if (segments.empty()) throw InconsistencyError("no segments to write");
    for (const auto& s : segments) {
        if (s.sample_rate != segments.front().sample_rate) {
            throw InconsistencyError("segments have mixed sample rates");
        }
        if (s.center_frequency != segments.front().center_frequency) {
            throw InconsistencyError("segments have mixed center frequencies");
        }
        if (s.samples.empty()) throw InconsistencyError("empty segment");
    }
    global.datatype = SampleFormat::complex_f64_le;
    global.sample_rate = segments.front().sample_rate;
    global.center_frequency = segments.front().center_frequency;

    std::vector<SigmfCapture> caps;
    std::string data;
    std::size_t total = 0;
    for (const auto& s : segments) total += s.samples.size();
    data.reserve(total * 16);
    std::uint64_t offset = 0;
    for (const auto& s : segments) {
        caps.push_back({offset, s.center_frequency, s.capture_time});
        for (const auto& x : s.samples) {
            detail::append_f64_le(data, x.real());
            detail::append_f64_le(data, x.imag());
        }
        offset += s.samples.size();
    }

    const auto paths = recording_paths(base);
    detail::write_file(paths.data, data);
    detail::write_meta(paths.meta, global, caps);
    return paths;
}

// ---------------------------------------------------------------------------
// GPS tracks

struct GpsColumnMap {
    std::string time = "time_utc";
    std::string latitude = "latitude_deg";
    std::string longitude = "longitude_deg";
    std::string altitude = "altitude_m";
};

inline void check_fix(const GpsFix& f, std::size_t row) {
    if (!std::isfinite(f.time)) throw DataError("row " + std::to_string(row) + ": non-finite time");
    if (!(std::abs(f.latitude) <= 90.0)) {
        throw DataError("row " + std::to_string(row) + ": latitude out of range");
    }
    if (!(std::abs(f.longitude) <= 180.0)) {
        throw DataError("row " + std::to_string(row) + ": longitude out of range");
    }
    if (!std::isfinite(f.altitude)) {
        throw DataError("row " + std::to_string(row) + ": non-finite altitude");
    }
}

inline void check_time_order(std::span<const GpsFix> fixes) {
    for (std::size_t i = 1; i < fixes.size(); ++i) {
        if (!(fixes[i].time > fixes[i - 1].time)) {
            throw OrderingError("GPS fixes not strictly increasing in time at row " +
                                    std::to_string(i + 1),
                                i + 1);
        }
    }
}

inline std::vector<GpsFix> parse_gps_csv(std::string_view text, const GpsColumnMap& map = {}) {
    const auto rows = detail::lines(text);
    if (rows.empty()) throw SchemaError("GPS CSV is empty (header row required)");
    const auto header = detail::split(rows.front());
    auto column = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (detail::trim(header[i]) == name) return i;
        }
        throw SchemaError("GPS CSV missing column '" + name + "'");
    };
    const std::size_t ct = column(map.time), cla = column(map.latitude),
                      clo = column(map.longitude), cal = column(map.altitude);

    std::vector<GpsFix> fixes;
    std::size_t offset = rows.front().size() + 1;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto line = rows[r];
        const std::size_t line_offset = offset;
        offset += line.size() + 1;
        if (detail::trim(line).empty()) continue;
        const auto cells = detail::split(line);
        auto value = [&](std::size_t col) {
            if (col >= cells.size()) {
                throw SchemaError("GPS CSV row " + std::to_string(r) + " has too few columns");
            }
            const auto v = detail::parse_double(cells[col]);
            if (!v) {
                throw ParseError("GPS CSV row " + std::to_string(r) + ": bad number '" +
                                     std::string(cells[col]) + "'",
                                 line_offset);
            }
            return *v;
        };
        GpsFix f{value(ct), value(cla), value(clo), value(cal)};
        check_fix(f, r);
        fixes.push_back(f);
    }
    check_time_order(fixes);
    return fixes;
}

inline std::vector<GpsFix> read_gps_csv(const std::filesystem::path& path,
                                        const GpsColumnMap& map = {}) {
    return parse_gps_csv(detail::read_file(path), map);
}

inline std::string format_gps_csv(std::span<const GpsFix> fixes) {
    std::string out = "time_utc,latitude_deg,longitude_deg,altitude_m\n";
    for (const auto& f : fixes) {
        out += detail::format_double(f.time) + ',' + detail::format_double(f.latitude) + ',' +
               detail::format_double(f.longitude) + ',' + detail::format_double(f.altitude) + '\n';
    }
    return out;
}

inline void write_gps_csv(const std::filesystem::path& path, std::span<const GpsFix> fixes) {
    check_time_order(fixes);
    detail::write_file(path, format_gps_csv(fixes));
}

// GPS data stream layout: (time, lat, lon, alt) float64 per fix.
inline RecordingPaths write_gps_recording(std::span<const GpsFix> fixes,
                                          const std::filesystem::path& base,
                                          std::string description = "GPS track") {
    if (fixes.empty()) throw InconsistencyError("no GPS fixes to write");
    check_time_order(fixes);
    SigmfGlobal g;
    g.datatype = SampleFormat::real_f64_le;
    // One "sample" is one float64 field, four per fix.
    g.sample_rate = 4.0;
    g.center_frequency = 0.0;
    g.description = std::move(description);
    std::string data;
    data.reserve(fixes.size() * 32);
    for (const auto& f : fixes) {
        detail::append_f64_le(data, f.time);
        detail::append_f64_le(data, f.latitude);
        detail::append_f64_le(data, f.longitude);
        detail::append_f64_le(data, f.altitude);
    }
    const auto paths = recording_paths(base);
    detail::write_file(paths.data, data);
    detail::write_meta(paths.meta, g, {SigmfCapture{0, 0.0, fixes.front().time}});
    return paths;
}

inline std::vector<GpsFix> read_gps_recording(const std::filesystem::path& meta_path,
                                              const std::filesystem::path& data_path) {
    const auto meta = detail::parse_meta(detail::read_file(meta_path));
    const auto g = detail::decode_global(meta);
    if (g.datatype != SampleFormat::real_f64_le) {
        throw UnsupportedFormatError("expected an rf64_le GPS recording, found " +
                                     std::string(datatype_token(g.datatype)));
    }
    const auto caps = detail::decode_captures(meta);
    const auto bytes = detail::read_file(data_path);
    if (bytes.size() % 32 != 0) {
        throw TruncationError("GPS data length is not a multiple of 4 float64 fields",
                              caps.empty() ? 0 : caps.size() - 1);
    }
    std::vector<GpsFix> fixes(bytes.size() / 32);
    for (std::size_t i = 0; i < fixes.size(); ++i) {
        const char* p = bytes.data() + 32 * i;
        fixes[i] = {detail::read_f64_le(p), detail::read_f64_le(p + 8),
                    detail::read_f64_le(p + 16), detail::read_f64_le(p + 24)};
        check_fix(fixes[i], i + 1);
    }
    check_time_order(fixes);
    return fixes;
}

inline RecordingPaths gps_csv_to_sigmf(const std::filesystem::path& csv_path,
                                       const std::filesystem::path& out_base,
                                       const GpsColumnMap& map = {}) {
    const auto fixes = read_gps_csv(csv_path, map);
    return write_gps_recording(fixes, out_base,
                               "GPS track converted from " + csv_path.filename().string());
}

inline std::filesystem::path sigmf_to_gps_csv(const std::filesystem::path& meta_path,
                                              const std::filesystem::path& data_path,
                                              const std::filesystem::path& csv_path) {
    write_gps_csv(csv_path, read_gps_recording(meta_path, data_path));
    return csv_path;
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationEntry {
    std::string rule;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationEntry> entries;

    bool ok() const {
        return std::all_of(entries.begin(), entries.end(),
                           [](const ValidationEntry& e) { return e.passed; });
    }

    const ValidationEntry* find(std::string_view rule) const {
        for (const auto& e : entries) {
            if (e.rule == rule) return &e;
        }
        return nullptr;
    }
};

inline ValidationReport validate_recording(const std::filesystem::path& meta_path,
                                           const std::filesystem::path& data_path) {
    ValidationReport report;
    auto add = [&](std::string rule, bool passed, std::string detail = {}) {
        report.entries.push_back({std::move(rule), passed, std::move(detail)});
    };

    nlohmann::json meta;
    try {
        meta = detail::parse_meta(detail::read_file(meta_path));
        add("json_well_formed", meta.is_object() && meta.contains("global") &&
                                    meta.contains("captures") && meta.contains("annotations"),
            meta.is_object() ? "" : "top level is not an object");
    } catch (const Error& e) {
        add("json_well_formed", false, e.what());
        return report;
    }

    const nlohmann::json empty = nlohmann::json::object();
    const auto& g = meta.contains("global") && meta["global"].is_object() ? meta["global"] : empty;
    std::string missing;
    for (const char* key : {"core:datatype", "core:sample_rate", "core:version"}) {
        if (!g.contains(key)) missing += std::string(missing.empty() ? "" : ", ") + key;
    }
    const bool rate_ok = g.contains("core:sample_rate") && g["core:sample_rate"].is_number() &&
                         g["core:sample_rate"].get<double>() > 0.0;
    if (missing.empty() && !rate_ok) missing = "core:sample_rate must be a positive number";
    add("global_fields_present", missing.empty(), missing);

    const auto token = detail::json_string_or(g, "core:datatype");
    const auto fmt = parse_datatype(token);
    add("datatype_supported", fmt.has_value(),
        fmt ? token : "unsupported datatype '" + token + "'");

    std::vector<std::uint64_t> starts;
    std::string cap_problem;
    if (meta.contains("captures") && meta["captures"].is_array()) {
        for (std::size_t i = 0; i < meta["captures"].size(); ++i) {
            const auto& c = meta["captures"][i];
            if (!c.contains("core:sample_start") || !c["core:sample_start"].is_number_unsigned()) {
                cap_problem = "capture " + std::to_string(i) + " lacks core:sample_start";
                break;
            }
            const auto s = c["core:sample_start"].get<std::uint64_t>();
            if (!starts.empty() && s <= starts.back()) {
                cap_problem = "capture " + std::to_string(i) + " sample_start not increasing";
                break;
            }
            const auto dt = detail::json_string_or(c, "core:datetime");
            if (!dt.empty() && !parse_iso8601(dt)) {
                cap_problem = "capture " + std::to_string(i) + " datetime unparseable";
                break;
            }
            starts.push_back(s);
        }
    } else {
        cap_problem = "captures array missing";
    }
    add("capture_offsets_monotone", cap_problem.empty(), cap_problem);

    std::uintmax_t bytes = 0;
    std::error_code ec;
    bytes = std::filesystem::file_size(data_path, ec);
    if (ec) {
        add("data_length_consistent", false, "cannot stat " + data_path.string());
        return report;
    }
    const std::size_t width = fmt ? sample_width(*fmt) : 16;
    const bool whole = bytes % width == 0;
    add("data_length_consistent", whole,
        whole ? std::to_string(bytes / width) + " samples"
              : std::to_string(bytes % width) + " trailing bytes beyond a whole sample");

    const std::uint64_t total = bytes / width;
    std::string range_problem;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        if (starts[i] >= total) {
            range_problem = "capture " + std::to_string(i) + " sample_start " +
                            std::to_string(starts[i]) + " beyond end of data (" +
                            std::to_string(total) + " samples)";
            break;
        }
    }
    add("capture_offsets_in_range", range_problem.empty(), range_problem);
    return report;
}

}  // namespace aeriq
