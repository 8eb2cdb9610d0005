#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "aeriq/aeriq.hpp"

namespace fs = std::filesystem;
using namespace aeriq;

namespace {

struct Common {
    std::string config;
    std::string out;
    unsigned workers = default_workers();
    std::optional<double> calibration_offset_db;
    std::optional<double> clock_offset_s;
};

PipelineConfig resolve_config(const Common& c) {
    PipelineConfig cfg = c.config.empty() ? PipelineConfig{} : load_config(c.config);
    if (c.calibration_offset_db) cfg.processing.calibration_offset_db = *c.calibration_offset_db;
    if (c.clock_offset_s) cfg.processing.clock_offset_s = *c.clock_offset_s;
    cfg.validate();
    return cfg;
}

GpsColumnMap column_map(const std::string& spec) {
    GpsColumnMap m;
    if (spec.empty()) return m;
    const auto parts = detail::split(spec, ',');
    if (parts.size() != 4) throw ConfigError("--gps-columns expects time,lat,lon,alt column names");
    m.time = std::string(detail::trim(parts[0]));
    m.latitude = std::string(detail::trim(parts[1]));
    m.longitude = std::string(detail::trim(parts[2]));
    m.altitude = std::string(detail::trim(parts[3]));
    return m;
}

std::vector<GpsFix> load_gps(const fs::path& path, const GpsColumnMap& map) {
    if (path.extension() == ".sigmf-meta") {
        return read_gps_recording(path, recording_paths(fs::path(path).replace_extension()).data);
    }
    return read_gps_csv(path, map);
}

fs::path data_for(const fs::path& meta, const std::string& data) {
    return data.empty() ? recording_paths(fs::path(meta).replace_extension()).data : fs::path(data);
}

void add_common(CLI::App* app, Common& c, bool out_required = true) {
    app->add_option("--config", c.config, "TOML-style config file")->check(CLI::ExistingFile);
    auto* o = app->add_option("--out", c.out, "output path");
    if (out_required) o->required();
    app->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
    app->add_option("--calibration-offset-db", c.calibration_offset_db, "constant added to RSRP");
    app->add_option("--clock-offset-s", c.clock_offset_s, "added to SDR capture times before GPS lookup");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"aeriq: LTE I/Q post-processing for UAV flight captures"};
    app.require_subcommand(1);
    Common common;

    std::string in_meta, in_data, segments_csv, gps_path, gps_columns, geo_csv;

    auto* decode = app.add_subcommand("decode", "cell search and channel estimation per segment -> segments CSV");
    decode->add_option("recording", in_meta, "recording .sigmf-meta")->required()->check(CLI::ExistingFile);
    decode->add_option("--data", in_data, ".sigmf-data (default: alongside the meta file)");
    add_common(decode, common);

    auto* fuse_cmd = app.add_subcommand("fuse", "join decoded segments with the GPS log -> GeoSample CSV");
    fuse_cmd->add_option("segments", segments_csv, "segments CSV")->required()->check(CLI::ExistingFile);
    fuse_cmd->add_option("gps", gps_path, "GPS CSV or GPS .sigmf-meta")->required()->check(CLI::ExistingFile);
    fuse_cmd->add_option("--gps-columns", gps_columns, "time,lat,lon,alt header names of a foreign GPS log");
    add_common(fuse_cmd, common);

    auto* fit = app.add_subcommand("fit", "path-loss and shadowing fits -> report JSON");
    fit->add_option("geo", geo_csv, "GeoSample CSV")->required()->check(CLI::ExistingFile);
    add_common(fit, common);

    std::string trajectory;
    int pci = 301;
    std::optional<double> snr_db = 20.0;
    double cfo_hz = 0.0;
    double duration_s = 5.0;
    std::uint64_t seed = 1;
    bool no_reflection = false;
    bool noiseless = false;
    auto* synth = app.add_subcommand("synth", "synthetic survey flight -> SigMF recording + GPS CSV");
    synth->add_option("--trajectory", trajectory, "waypoint CSV (time_utc,latitude_deg,longitude_deg,altitude_m); default: zigzag")
        ->check(CLI::ExistingFile);
    synth->add_option("--pci", pci, "physical cell id")->check(CLI::Range(0, 503));
    synth->add_option("--snr-db", snr_db, "per-segment SNR");
    synth->add_flag("--noiseless", noiseless, "no AWGN");
    synth->add_option("--cfo-hz", cfo_hz, "carrier frequency offset");
    synth->add_option("--duration-s", duration_s, "capture length from the track start (0 = whole track)")
        ->check(CLI::NonNegativeNumber);
    synth->add_option("--seed", seed, "random seed");
    synth->add_flag("--no-reflection", no_reflection, "unit channel instead of two-ray");
    add_common(synth, common);

    std::string convert_in;
    auto* convert = app.add_subcommand("convert", "GPS CSV <-> SigMF (direction from the input extension)");
    convert->add_option("input", convert_in, ".csv or .sigmf-meta")->required()->check(CLI::ExistingFile);
    convert->add_option("--gps-columns", gps_columns, "time,lat,lon,alt header names of a foreign GPS log");
    add_common(convert, common);

    auto* validate = app.add_subcommand("validate", "check a SigMF recording pair");
    validate->add_option("recording", in_meta, "recording .sigmf-meta")->required()->check(CLI::ExistingFile);
    validate->add_option("--data", in_data, ".sigmf-data (default: alongside the meta file)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*decode) {
            const auto cfg = resolve_config(common);
            const auto rec = read_recording(in_meta, data_for(in_meta, in_data));
            const auto rows = decode_recording(rec, cfg, common.workers);
            detail::write_file(common.out, format_segments_csv(rows));
            std::size_t found = 0;
            for (const auto& r : rows) found += r.detected;
            std::cerr << "decoded " << rows.size() << " segments, " << found << " detected\n";
        } else if (*fuse_cmd) {
            const auto cfg = resolve_config(common);
            const auto segs = parse_segments_csv(detail::read_file(segments_csv));
            const GpsTrack track(load_gps(gps_path, column_map(gps_columns)));
            const auto res = fuse(segs, track, cfg.tx_anchor,
                                  {cfg.processing.clock_offset_s, cfg.processing.max_extrapolation_s});
            detail::write_file(common.out, format_geo_csv(res.samples));
            std::cerr << "fused " << res.samples.size() << " rows, dropped " << res.dropped << "\n";
        } else if (*fit) {
            const auto cfg = resolve_config(common);
            const auto geo = parse_geo_csv(detail::read_file(geo_csv));
            const auto rep = fit_geosamples(geo, cfg);
            detail::write_file(common.out, report_to_json(rep).dump(2) + "\n");
            std::cerr << "fspl rmse " << rep.fspl.rmse_db << " dB, two-ray rmse " << rep.two_ray.rmse_db << " dB\n";
        } else if (*synth) {
            const auto cfg = resolve_config(common);
            const auto fixes = trajectory.empty() ? zigzag_track(cfg.tx_anchor, ZigzagParams{}) : read_gps_csv(trajectory);
            FlightSynthParams p;
            p.cell = CellIdentity::from_pci(pci);
            p.snr_db = noiseless ? std::nullopt : snr_db;
            p.cfo_hz = cfo_hz;
            p.two_ray_channel = !no_reflection;
            p.seed = seed;
            if (duration_s > 0) {
                p.max_segments = static_cast<std::size_t>(std::llround(duration_s / cfg.capture.segment_period_s));
            }
            const auto flight = synthesize_flight(fixes, p, cfg, common.workers);
            const fs::path base = common.out;
            const auto paths = write_flight(flight, base, fs::path(base.string() + ".gps.csv"), cfg);
            std::cerr << "wrote " << flight.segments.size() << " segments to " << paths.meta.string() << "\n";
        } else if (*convert) {
            const fs::path in = convert_in;
            if (in.extension() == ".sigmf-meta") {
                write_gps_csv(common.out, load_gps(in, {}));
            } else {
                write_gps_recording(read_gps_csv(in, column_map(gps_columns)), common.out);
            }
        } else if (*validate) {
            const auto report = validate_recording(in_meta, data_for(in_meta, in_data));
            for (const auto& e : report.entries) {
                std::cout << (e.passed ? "ok   " : "FAIL ") << e.rule;
                if (!e.detail.empty()) std::cout << ": " << e.detail;
                std::cout << "\n";
            }
            return report.ok() ? 0 : 2;
        }
    } catch (const ConfigError& e) {
        std::cerr << "aeriq: config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "aeriq: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
