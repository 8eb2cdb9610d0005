// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "aeriq/aeriq.hpp"
#include "oracles.hpp"
#include "tempdir.hpp"

using namespace aeriq;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), f, args...);
    return buf;
}

int circ_diff(int a, int b, int m) {
    const int d = ((a - b) % m + m) % m;
    return std::min(d, m - d);
}

std::vector<cd> impaired(int pci, std::size_t delay, double cfo, std::optional<double> snr, std::uint64_t seed,
                         double out_rate, int frames = 2) {
    const auto x = synthesize_downlink(CellIdentity::from_pci(pci), frames);
    ImpairmentSpec s;
    s.delay_samples = delay;
    s.cfo_hz = cfo;
    s.snr_db = snr;
    s.seed = seed;
    s.output_rate = out_rate;
    return apply_impairments(x, s);
}

// 1. Closed-loop cell search over 24 PCIs.
Outcome criterion1() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2024);
    std::vector<int> pcis{0, 1, 2, 77, 301, 503};
    std::uniform_int_distribution<int> any_pci(0, 503);
    while (pcis.size() < 24) pcis.push_back(any_pci(rng));
    std::uniform_int_distribution<int> delay(0, 19199);
    std::uniform_real_distribution<double> cfo(-7000.0, 7000.0);
    int correct = 0, max_terr = 0;
    double max_ferr = 0;
    for (std::size_t i = 0; i < pcis.size(); ++i) {
        const int d = delay(rng);
        const double f = cfo(rng);
        IqSegment seg;
        seg.samples = impaired(pcis[i], static_cast<std::size_t>(d), f, 10.0, rng(), 2e6);
        const auto r = cell_search(seg);
        if (!r) {
            max_terr = 19200;
            continue;
        }
        const int terr = circ_diff(r->timing_offset, d, 19200);
        const double ferr = std::abs(r->cfo_hz - f);
        max_terr = std::max(max_terr, terr);
        max_ferr = std::max(max_ferr, ferr);
        correct += r->cell.pci() == pcis[i] && terr <= 1 && ferr < 150.0;
    }
    const double secs = seconds_since(t0);
    return {correct == 24 && secs < 60.0,
            fmt("%d/24 correct, max timing error %d samples, max CFO error %.1f Hz, %.1f s", correct, max_terr,
                max_ferr, secs)};
}

// 2. Exhaustive SSS sweep.
Outcome criterion2() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(168);
    std::uniform_int_distribution<int> delay(0, 19199);
    int correct = 0;
    for (int n1 = 0; n1 < 168; ++n1) {
        const int pci = 3 * n1 + n1 % 3;
        IqSegment seg;
        seg.samples = impaired(pci, static_cast<std::size_t>(delay(rng)), 0.0, 10.0, rng(), 1.92e6);
        seg.sample_rate = 1.92e6;
        const auto r = cell_search(seg);
        correct += r && r->cell.n_id_1 == n1 && r->cell.pci() == pci;
    }
    const double secs = seconds_since(t0);
    return {correct == 168 && secs < 120.0, fmt("%d/168 group ids, %.1f s", correct, secs)};
}

// 3. Blind CP CFO estimator accuracy.
Outcome criterion3() {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> delay(0, 19199), pci(0, 503);
    double ss = 0;
    int n = 0;
    for (int f = -7000; f <= 7000; f += 1000) {
        for (int t = 0; t < 20; ++t) {
            const auto x = impaired(pci(rng), static_cast<std::size_t>(delay(rng)), f, 20.0, rng(), 1.92e6);
            const double e = estimate_cfo_cp(x) - f;
            ss += e * e;
            ++n;
        }
    }
    const double rmse = std::sqrt(ss / n);
    double worst_bias = 0;
    for (int p : {0, 301, 503}) {
        worst_bias = std::max(worst_bias, std::abs(estimate_cfo_cp(impaired(p, 0, 0.0, std::nullopt, 0, 1.92e6))));
    }
    return {rmse < 75.0 && worst_bias < 1.0,
            fmt("RMSE %.2f Hz over %d trials (< 75), noiseless zero-CFO bias %.3g Hz (< 1)", rmse, n, worst_bias)};
}

// 4. RSRP equivariance and flat-gain recovery.
Outcome criterion4() {
    const PipelineConfig cfg;
    IqSegment base;
    base.samples = impaired(301, 5555, 2100.0, 15.0, 4, 2e6);
    const auto ref = decode_segment(base, cfg);
    double worst = 0;
    bool ok = ref.rsrp_dbfs.has_value();
    for (double a : {0.1, 1.0, 10.0}) {
        IqSegment s = base;
        for (auto& v : s.samples) v *= a;
        const auto r = decode_segment(s, cfg);
        if (!r.rsrp_dbfs || !ok) {
            ok = false;
            break;
        }
        worst = std::max(worst, std::abs(*r.rsrp_dbfs - *ref.rsrp_dbfs - 20.0 * std::log10(a)));
    }
    const cd g = std::polar(0.25, 0.7);
    const auto x = synthesize_downlink(CellIdentity::from_pci(88), 2);
    ImpairmentSpec s;
    s.channel = FlatChannel{g};
    s.snr_db = 30.0;
    s.seed = 41;
    s.delay_samples = 1500;
    s.output_rate = 2e6;
    IqSegment seg;
    seg.samples = apply_impairments(x, s);
    const auto r = decode_segment(seg, cfg);
    const double gain_err = r.rsrp_dbfs ? std::abs(*r.rsrp_dbfs - 20.0 * std::log10(std::abs(g))) : 1e9;
    return {ok && worst < 1e-6 && gain_err < 0.1,
            fmt("scaling deviation %.3g dB (< 1e-6), flat gain error %.4f dB (< 0.1)", worst, gain_err)};
}

// 5. Round trips.
Outcome criterion5() {
    TempDir dir;
    std::mt19937_64 rng(5);
    double ofdm_err = 0;
    int sigmf_ok = 0, gps_ok = 0;
    for (int c = 0; c < 100; ++c) {
        ResourceGrid g({}, 7 * (1 + c % 4));
        const auto v = oracle::random_complex(g.values.size(), rng());
        std::copy(v.begin(), v.end(), g.values.begin());
        const auto back = ofdm_demodulate(ofdm_modulate(g), 0);
        for (std::size_t i = 0; i < v.size(); ++i) ofdm_err = std::max(ofdm_err, std::abs(back.values[i] - v[i]));

        std::vector<IqSegment> segs(1 + rng() % 3);
        double t = static_cast<double>(rng() % 4'000'000'000'000ull) / 1e6;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            segs[i].samples = oracle::random_complex(1 + rng() % 2000, rng());
            segs[i].capture_time = t;
            t = static_cast<double>(std::llround(t * 1e6) + 100000) / 1e6;
        }
        const auto base = dir / ("r" + std::to_string(c));
        const auto paths = write_recording(segs, {}, base);
        const auto rec = read_recording(paths.meta, paths.data);
        bool same = rec.segments.size() == segs.size();
        for (std::size_t i = 0; same && i < segs.size(); ++i) {
            same = rec.segments[i].samples.size() == segs[i].samples.size() &&
                   std::memcmp(rec.segments[i].samples.data(), segs[i].samples.data(), segs[i].samples.size() * 16) == 0 &&
                   rec.segments[i].capture_time == segs[i].capture_time;
        }
        sigmf_ok += same;

        std::vector<GpsFix> fixes;
        double tg = 1.6e9 + static_cast<double>(rng() % 1000000) / 1e3;
        std::uniform_real_distribution<double> lat(-89, 89), lon(-179, 179), alt(-50, 3000), dt(0.01, 2);
        for (std::size_t i = 0, n = 2 + rng() % 200; i < n; ++i) {
            fixes.push_back({tg, lat(rng), lon(rng), alt(rng)});
            tg += dt(rng);
        }
        const auto csv = dir / ("g" + std::to_string(c) + ".csv");
        write_gps_csv(csv, fixes);
        const auto gp = gps_csv_to_sigmf(csv, dir / ("g" + std::to_string(c)));
        const auto back_csv = sigmf_to_gps_csv(gp.meta, gp.data, dir / ("h" + std::to_string(c) + ".csv"));
        gps_ok += read_gps_csv(back_csv) == fixes && read_gps_recording(gp.meta, gp.data) == fixes;
    }
    return {ofdm_err < 1e-9 && sigmf_ok == 100 && gps_ok == 100,
            fmt("OFDM max error %.3g (< 1e-9), SigMF bit-exact %d/100, GPS value-exact %d/100", ofdm_err, sigmf_ok,
                gps_ok)};
}

// 6. Two-ray degeneration and extrema.
Outcome criterion6() {
    const double lambda = wavelength(3.51e9);
    TwoRayConfig iso;
    iso.reflection.kind = Reflection::Kind::fixed;
    iso.tx_pattern = iso.rx_pattern = AntennaPattern::isotropic;
    iso.reflection.gamma = 0.0;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> dg(1, 3000), h(1, 150);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto g = geometry_from_heights(dg(rng), h(rng), h(rng));
        worst = std::max(worst, std::abs(two_ray_pl_db(g, iso) - fspl_db(g.distance_3d, lambda)));
    }

    iso.reflection.gamma = -1.0;
    // Loss maxima are read off the path loss itself; loss minima are broad, so
    // they are read off the interference term (path loss minus free space).
    const double step = 0.01;
    std::vector<double> d, pl, excess, phase;
    for (double x = 50.0; x <= 400.0; x += step) {
        d.push_back(x);
        const auto g = geometry_from_heights(x, 10, 50);
        pl.push_back(two_ray_pl_db(g, iso));
        excess.push_back(pl.back() - fspl_db(g.distance_3d, lambda));
        phase.push_back((std::hypot(x, 60.0) - std::hypot(x, 40.0)) / lambda);
    }
    std::vector<double> maxima, minima, phase_max, phase_min;
    for (std::size_t i = 1; i + 1 < d.size(); ++i) {
        if (pl[i] > pl[i - 1] && pl[i] >= pl[i + 1]) maxima.push_back(d[i]);
        if (excess[i] < excess[i - 1] && excess[i] <= excess[i + 1]) minima.push_back(d[i]);
    }
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (std::floor(phase[i]) != std::floor(phase[i - 1])) phase_max.push_back(d[i]);
        if (std::floor(phase[i] + 0.5) != std::floor(phase[i - 1] + 0.5)) phase_min.push_back(d[i]);
    }
    double worst_pos = 0;
    const bool counts = maxima.size() == phase_max.size() && minima.size() == phase_min.size();
    if (counts) {
        for (std::size_t i = 0; i < maxima.size(); ++i) worst_pos = std::max(worst_pos, std::abs(maxima[i] - phase_max[i]));
        for (std::size_t i = 0; i < minima.size(); ++i) worst_pos = std::max(worst_pos, std::abs(minima[i] - phase_min[i]));
    }
    return {worst < 1e-9 && counts && worst_pos <= step + 1e-9,
            fmt("gamma=0 max deviation %.3g dB (< 1e-9); %zu maxima + %zu minima, worst offset %.3f m (step %.2f m)",
                worst, maxima.size(), minima.size(), worst_pos, step)};
}

// Shared closed-loop flight: straight radial run at 1 s cadence.
struct ClosedLoop {
    std::string segments_csv, geo_csv, report_json, data_bytes;
    FitReport report;
};

ClosedLoop closed_loop(unsigned workers) {
    PipelineConfig cfg;
    cfg.capture.segment_period_s = 1.0;
    const Geodetic origin{cfg.tx_anchor.latitude, cfg.tx_anchor.longitude, cfg.tx_anchor.ground_altitude_m};
    std::vector<GpsFix> fixes;
    for (int i = 0; i <= 60; ++i) {
        const auto g = enu_to_geodetic({30.0 + 15.0 * i, 5.0 * i, 40.0 + 0.5 * i}, origin);
        fixes.push_back({1652364000.0 + i, g.latitude, g.longitude, g.height});
    }
    FlightSynthParams p;
    p.snr_db = 15.0;
    p.cfo_hz = -2500.0;
    p.seed = 2022;
    const auto flight = synthesize_flight(fixes, p, cfg, workers);
    TempDir dir;
    const auto paths = write_flight(flight, dir / "flight", dir / "gps.csv", cfg);
    const auto rec = read_recording(paths.meta, paths.data);
    const auto rows = decode_recording(rec, cfg, workers);
    const auto fused = fuse(rows, GpsTrack(read_gps_csv(dir / "gps.csv")), cfg.tx_anchor);
    ClosedLoop out;
    out.data_bytes = detail::read_file(paths.data) + detail::read_file(paths.meta);
    out.segments_csv = format_segments_csv(rows);
    out.geo_csv = format_geo_csv(fused.samples);
    out.report = fit_geosamples(fused.samples, cfg);
    out.report_json = report_to_json(out.report).dump(2);
    return out;
}

// 7. Path-loss fitting.
Outcome criterion7() {
    const TwoRayConfig cfg;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dg(30, 1500), hr(30, 110);
    std::normal_distribution<double> w(0.0, 3.0);
    std::vector<PathLossPoint> clean, noisy;
    for (int i = 0; i < 2000; ++i) {
        const auto g = geometry_from_heights(dg(rng), 10.0, hr(rng));
        const double pl = model_path_loss_db(PathLossModel::two_ray, g, cfg);
        if (i < 200) clean.push_back({g, 20.0 - model_path_loss_db(PathLossModel::fspl, g, cfg)});
        noisy.push_back({g, -40.0 - pl + w(rng)});
    }
    const auto f0 = fit_path_loss(clean, PathLossModel::fspl, cfg);
    const auto f1 = fit_path_loss(noisy, PathLossModel::two_ray, cfg);
    const auto loop = closed_loop(default_workers());
    const bool ok = std::abs(f0.p0_db - 20.0) < 1e-9 && f0.rmse_db < 1e-9 && std::abs(f1.p0_db + 40.0) <= 0.2 &&
                    std::abs(f1.rmse_db - 3.0) <= 0.3 && loop.report.two_ray.rmse_db < 1.0 &&
                    loop.report.two_ray.rmse_db < loop.report.fspl.rmse_db;
    return {ok, fmt("noiseless p0 err %.2g, rmse %.2g; shadowed p0 %.3f (-40 +/- 0.2), sigma %.3f (3 +/- 0.3); "
                    "closed loop n=%zu two-ray rmse %.3f dB vs FSPL %.3f dB",
                    std::abs(f0.p0_db - 20.0), f0.rmse_db, f1.p0_db, f1.rmse_db, loop.report.two_ray.n_points,
                    loop.report.two_ray.rmse_db, loop.report.fspl.rmse_db)};
}

// 8. Shadowing fits.
Outcome criterion8() {
    auto draws = [](std::size_t n, double xi, double om, double al, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> g;
        const double delta = al / std::sqrt(1 + al * al);
        std::vector<double> v(n);
        for (auto& x : v) {
            const double u0 = g(rng), u1 = g(rng);
            x = xi + om * (delta * std::abs(u0) + std::sqrt(1 - delta * delta) * u1);
        }
        return v;
    };
    const auto f = fit_shadowing(draws(5000, 2.0, 3.0, -4.0, 8));
    const double e_xi = std::abs(f.skew_normal.xi - 2.0) / 2.0;
    const double e_om = std::abs(f.skew_normal.omega - 3.0) / 3.0;
    const double e_al = std::abs(f.skew_normal.alpha + 4.0) / 4.0;

    std::mt19937_64 rng(88);
    std::uniform_real_distribution<double> a(-6, 6), s(0.5, 8);
    int nested = 0;
    for (int i = 0; i < 100; ++i) {
        const auto fit = fit_shadowing(draws(30 + rng() % 500, a(rng), s(rng), a(rng), rng()));
        nested += fit.skew_normal.loglik >= fit.gaussian.loglik;
    }
    double pdf_err = 0;
    const boost::math::normal_distribution<double> n(0.7, 1.9);
    for (double x = -10; x <= 10; x += 0.01) pdf_err = std::max(pdf_err, std::abs(skew_normal_pdf(x, 0.7, 1.9, 0.0) - boost::math::pdf(n, x)));
    return {e_xi <= 0.15 && e_om <= 0.15 && e_al <= 0.15 && nested == 100 && pdf_err <= 1e-12,
            fmt("fit (%.3f, %.3f, %.3f): relative errors %.1f%% %.1f%% %.1f%% (<= 15%%); nesting %d/100; "
                "alpha=0 pdf error %.2g",
                f.skew_normal.xi, f.skew_normal.omega, f.skew_normal.alpha, 100 * e_xi, 100 * e_om, 100 * e_al, nested,
                pdf_err)};
}

// 9. Determinism across worker counts.
Outcome criterion9() {
    const unsigned n = std::max(4u, default_workers());
    const auto a = closed_loop(1);
    const auto b = closed_loop(n);
    const bool ok = a.data_bytes == b.data_bytes && a.segments_csv == b.segments_csv && a.geo_csv == b.geo_csv &&
                    a.report_json == b.report_json;
    return {ok, fmt("1 vs %u workers: recording %s, segments CSV %s, GeoSample CSV %s, report JSON %s", n,
                    a.data_bytes == b.data_bytes ? "identical" : "DIFFER",
                    a.segments_csv == b.segments_csv ? "identical" : "DIFFER",
                    a.geo_csv == b.geo_csv ? "identical" : "DIFFER",
                    a.report_json == b.report_json ? "identical" : "DIFFER")};
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(AERIQ_CLI) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

// 10. Default synth campaign shape, decoded end to end by the CLI.
Outcome criterion10() {
    TempDir dir;
    const auto base = (dir / "flight").string();
    if (run_cli("synth --out " + base) != 0) return {false, "aeriq synth failed"};
    const auto meta = nlohmann::json::parse(detail::read_file(base + ".sigmf-meta"));
    const auto rec = read_recording(base + ".sigmf-meta", base + ".sigmf-data");
    bool shape = !rec.segments.empty();
    double worst_cadence = 0;
    for (std::size_t i = 0; i < rec.segments.size(); ++i) {
        shape = shape && rec.segments[i].samples.size() == 40000 && rec.segments[i].sample_rate == 2e6 &&
                rec.segments[i].center_frequency == 3.51e9;
        if (i) worst_cadence = std::max(worst_cadence, std::abs(rec.segments[i].capture_time - rec.segments[i - 1].capture_time - 0.1));
    }
    const bool tags = meta["global"]["core:sample_rate"].get<double>() == 2e6 &&
                      meta["captures"][0]["core:frequency"].get<double>() == 3.51e9;
    if (run_cli("decode " + base + ".sigmf-meta --out " + (dir / "seg.csv").string()) != 0) {
        return {false, "aeriq decode failed"};
    }
    const auto rows = parse_segments_csv(detail::read_file(dir / "seg.csv"));
    std::size_t found = 0;
    for (const auto& r : rows) found += r.detected && r.pci == 301;
    return {shape && tags && worst_cadence < 1e-6 && rows.size() == rec.segments.size() && found == rows.size(),
            fmt("%zu segments of 40000 samples at 2 MHz / 3.51 GHz, cadence error %.2g s; decoded %zu/%zu rows PCI 301",
                rec.segments.size(), worst_cadence, found, rows.size())};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"closed-loop cell search", criterion1},  {"exhaustive SSS sweep", criterion2},
        {"CFO estimator", criterion3},            {"RSRP equivariance", criterion4},
        {"OFDM and format round trips", criterion5}, {"two-ray degeneration", criterion6},
        {"propagation fitting", criterion7},      {"shadowing fits", criterion8},
        {"pipeline determinism", criterion9},     {"campaign-shape conformance", criterion10},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
