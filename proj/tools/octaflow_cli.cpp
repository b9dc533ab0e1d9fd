// octaflow command-line front end: deterministic experiments over the
// octagon-prism geodesic library. Every subcommand reads a JSON config,
// derives all randomness from a single 64-bit seed, and writes CSV/JSON
// artifacts that are byte-identical across reruns and thread counts.
//
// Exit codes: 0 ok, 2 usage/config error, 3 pathological trajectory,
// 4 numeric failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "octaflow/fourier.hpp"
#include "octaflow/geodesic.hpp"
#include "octaflow/prism.hpp"
#include "octaflow/transference.hpp"
#include "octaflow/unfolding.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace octaflow;

namespace {

struct CliContext {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_from_flag = false;
    std::string out_dir = ".";
    int threads = 1;
    bool retry_pathological = true;
};

json load_config(const CliContext& ctx) {
    if (ctx.config_path.empty()) return json::object();
    std::ifstream in(ctx.config_path);
    if (!in) throw InvalidParameterError("cannot open config: " + ctx.config_path);
    json j;
    in >> j;
    return j;
}

std::uint64_t effective_seed(const CliContext& ctx, const json& cfg) {
    if (ctx.seed_from_flag) return ctx.seed;
    if (cfg.contains("seed")) return cfg["seed"].get<std::uint64_t>();
    return 0;
}

std::ofstream open_artifact(const CliContext& ctx, const std::string& name) {
    fs::create_directories(ctx.out_dir);
    const fs::path p = fs::path(ctx.out_dir) / name;
    std::ofstream out(p, std::ios::binary);
    if (!out) throw InvalidParameterError("cannot write artifact: " + p.string());
    return out;
}

void write_json(const CliContext& ctx, const std::string& name, const json& j) {
    auto out = open_artifact(ctx, name);
    out << j.dump(2) << "\n";
}

Direction2 sampled_direction(std::uint64_t seed, std::uint64_t index) {
    Rng rng(derive_seed(seed, "direction", index));
    return Direction2::from_angle(rng.uniform(0.0, 2.0 * M_PI));
}

Direction2 config_direction(const json& cfg, std::uint64_t seed, std::uint64_t index) {
    if (cfg.contains("direction")) {
        const auto& d = cfg["direction"];
        return Direction2(d.at(0).get<double>(), d.at(1).get<double>());
    }
    return sampled_direction(seed, index);
}

Vec2 config_start(const json& cfg) {
    if (cfg.contains("start")) {
        const auto& s = cfg["start"];
        return {s.at(0).get<double>(), s.at(1).get<double>()};
    }
    return {0.0, 0.0};
}

// Octagon geometry with the singular-hit tolerance surfaced as a knob.
OctagonGeometry config_geometry(const json& cfg) {
    auto geom = build_octagon(cfg.value("side", 1.0));
    if (cfg.contains("eps_geom")) {
        const double eps = cfg["eps_geom"].get<double>();
        if (!(eps > 0.0)) throw InvalidParameterError("eps_geom must be positive");
        geom.eps_geom = eps;
    }
    return geom;
}

TestPolygon config_polygon(const json& cfg, const OctagonGeometry& geom) {
    if (cfg.contains("polygon_file"))
        return TestPolygon::from_json_file(cfg["polygon_file"].get<std::string>(), geom);
    if (cfg.contains("polygon")) return TestPolygon::from_json(cfg["polygon"].dump(), geom);
    throw InvalidParameterError("config needs 'polygon' or 'polygon_file'");
}

// Trace with pathological retries over seeded directions. Directions given
// explicitly in the config never retry.
TracedGeodesic trace_with_retry(const CliContext& ctx, const json& cfg,
                                const OctagonGeometry& geom, Vec2 start, double horizon,
                                std::uint64_t seed, Direction2* used_dir) {
    const bool explicit_dir = cfg.contains("direction");
    const int attempts = (!explicit_dir && ctx.retry_pathological) ? 64 : 1;
    for (int a = 0;; ++a) {
        const Direction2 dir = config_direction(cfg, seed, static_cast<std::uint64_t>(a));
        try {
            auto tr = trace(geom, start, dir, horizon);
            if (used_dir) *used_dir = dir;
            return tr;
        } catch (const PathologicalTrajectoryError&) {
            if (a + 1 >= attempts) throw;
        }
    }
}

IntervalSet config_set(const CliContext& ctx, const json& cfg, std::uint64_t seed) {
    if (!cfg.contains("set")) throw InvalidParameterError("config needs a 'set' object");
    const json& s = cfg["set"];
    if (s.contains("full")) return IntervalSet::full(s["full"].get<double>());
    if (s.contains("intervals")) {
        json wrapped;
        wrapped["intervals"] = s["intervals"];
        return IntervalSet::from_json(wrapped.dump());
    }
    if (s.contains("intervals_json")) {
        std::ifstream in(s["intervals_json"].get<std::string>());
        if (!in) throw InvalidParameterError("cannot open intervals JSON");
        std::stringstream ss;
        ss << in.rdbuf();
        return IntervalSet::from_json(ss.str());
    }
    if (s.contains("intervals_csv")) {
        std::ifstream in(s["intervals_csv"].get<std::string>());
        if (!in) throw InvalidParameterError("cannot open intervals CSV");
        return IntervalSet::read_csv(in);
    }
    if (s.contains("random")) {
        const auto& r = s["random"];
        Rng rng(derive_seed(seed, "random-set"));
        const int count = r.value("count", 4);
        const double span = r.value("span", 1.0);
        const double min_width = r.value("min_width", 0.01);
        std::vector<Interval> raw;
        for (int i = 0; i < count; ++i) {
            const double u = rng.uniform(0.0, span * 0.95);
            raw.push_back({u, std::min(span, u + rng.uniform(min_width, span * 0.2))});
        }
        return IntervalSet::normalize(std::move(raw));
    }
    if (s.contains("visit")) {
        const json& v = s["visit"];
        const auto geom = config_geometry(v);
        const auto poly = config_polygon(v, geom);
        const double horizon = v.at("horizon").get<double>();
        const auto tr = trace_with_retry(ctx, v, geom, config_start(v), horizon, seed, nullptr);
        return visit_set(tr, poly);
    }
    throw InvalidParameterError("set: expected full / intervals / intervals_csv / intervals_json / random / visit");
}

GeodesicSpec3D config_spec(const json& cfg, const PrismConfig& prism_cfg, std::uint64_t seed,
                           std::uint64_t index) {
    if (cfg.contains("spec")) {
        const auto& sp = cfg["spec"];
        GeodesicSpec3D s;
        s.s1 = sp.at("start").at(0).get<double>();
        s.s2 = sp.at("start").at(1).get<double>();
        s.s3 = sp.at("start").at(2).get<double>();
        s.v1 = sp.at("direction").at(0).get<double>();
        s.v2 = sp.at("direction").at(1).get<double>();
        s.v3 = sp.at("direction").at(2).get<double>();
        const double n = std::sqrt(s.v1 * s.v1 + s.v2 * s.v2 + s.v3 * s.v3);
        s.v1 /= n;
        s.v2 /= n;
        s.v3 /= n;
        s.validate(prism_cfg);
        return s;
    }
    // Sampled: uniform on the v3 > 0 hemisphere, uniform start on P x [0, 2z0).
    Rng rng(derive_seed(seed, "spec3d", index));
    GeodesicSpec3D s;
    while (true) {
        const double z = rng.uniform(0.02, 0.999);
        const double phi = rng.uniform(0.0, 2.0 * M_PI);
        const double rho = std::sqrt(1.0 - z * z);
        s.v1 = rho * std::cos(phi);
        s.v2 = rho * std::sin(phi);
        s.v3 = z;
        if (s.v1 != 0.0 || s.v2 != 0.0) break;
    }
    while (true) {
        const Vec2 p{rng.uniform(-prism_cfg.octagon.apothem, prism_cfg.octagon.apothem),
                     rng.uniform(-prism_cfg.octagon.apothem, prism_cfg.octagon.apothem)};
        if (classify(prism_cfg.octagon, p).region == Region::Interior) {
            s.s1 = p.x;
            s.s2 = p.y;
            break;
        }
    }
    s.s3 = rng.uniform(0.0, 2.0 * prism_cfg.z0);
    return s;
}

QuadratureConfig config_quad(const json& cfg) {
    QuadratureConfig q;
    if (cfg.contains("quad")) {
        const auto& jq = cfg["quad"];
        q.subdivisions_per_piece = jq.value("subdivisions_per_piece", q.subdivisions_per_piece);
        q.abs_tol = jq.value("abs_tol", q.abs_tol);
        q.max_depth = jq.value("max_depth", q.max_depth);
    }
    q.validate();
    return q;
}

// ---------------------------------------------------------------------------
// subcommands

int run_trace(const CliContext& ctx) {
    const json cfg = load_config(ctx);
    const std::uint64_t seed = effective_seed(ctx, cfg);
    const auto geom = config_geometry(cfg);
    const double horizon = cfg.at("horizon").get<double>();
    Direction2 dir;
    const auto tr = trace_with_retry(ctx, cfg, geom, config_start(cfg), horizon, seed, &dir);
    {
        auto out = open_artifact(ctx, "crossings.csv");
        write_crossings_csv(out, tr);
    }
    write_json(ctx, "trace_summary.json",
               json{{"seed", seed},
                    {"side", geom.side},
                    {"direction", {dir.w1, dir.w2}},
                    {"horizon", horizon},
                    {"crossings", tr.crossings.size()},
                    {"segments", tr.segments.size()}});
    return 0;
}

int run_visits(const CliContext& ctx) {
    const json cfg = load_config(ctx);
    const std::uint64_t seed = effective_seed(ctx, cfg);
    const auto geom = config_geometry(cfg);
    const auto poly = config_polygon(cfg, geom);
    const double horizon = cfg.at("horizon").get<double>();
    Direction2 dir;
    const auto tr = trace_with_retry(ctx, cfg, geom, config_start(cfg), horizon, seed, &dir);
    const auto vs = visit_set(tr, poly);
    {
        auto out = open_artifact(ctx, "visits.csv");
        vs.write_csv(out);
    }
    const double d = density(vs, horizon);
    const double ratio = poly.area().to_double() / geom.area;
    write_json(ctx, "visits_summary.json",
               json{{"seed", seed},
                    {"horizon", horizon},
                    {"direction", {dir.w1, dir.w2}},
                    {"measure", vs.total_measure()},
                    {"density", d},
                    {"area_ratio", ratio},
                    {"abs_error", std::fabs(d - ratio)}});
    return 0;
}

int run_sample3d(const CliContext& ctx) {
    const json cfg = load_config(ctx);
    const std::uint64_t seed = effective_seed(ctx, cfg);
    const auto geom = config_geometry(cfg);
    const PrismConfig prism_cfg(geom, cfg.value("z0", 1.0));
    const auto poly = config_polygon(cfg, geom);
    const double n = cfg.at("n").get<double>();

    const bool explicit_spec = cfg.contains("spec");
    const int attempts = (!explicit_spec && ctx.retry_pathological) ? 64 : 1;
    for (int a = 0;; ++a) {
        const auto spec = config_spec(cfg, prism_cfg, seed, static_cast<std::uint64_t>(a));
        try {
            const auto sched = schedule(spec, prism_cfg);
            const auto pr = project(spec);
            const auto tr = trace(geom, pr.start, pr.direction, n + sched.theta);
            const auto pts = sample_at_hits(tr, sched, n);
            {
                auto out = open_artifact(ctx, "samples.csv");
                out << "k,tau_k,x,y,in_poly\n";
                char buf[160];
                for (std::size_t k = 0; k < pts.size(); ++k) {
                    const double tau = static_cast<double>(k) * sched.theta + sched.lambda;
                    std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g,%.9g,%d\n", k, tau, pts[k].x,
                                  pts[k].y, poly.contains(pts[k]) ? 1 : 0);
                    out << buf;
                }
            }
            const double disc = ap_discrepancy(pts, poly, sched, n, geom);
            write_json(ctx, "sample3d_summary.json",
                       json{{"seed", seed},
                            {"n", n},
                            {"z0", prism_cfg.z0},
                            {"spec",
                             {{"start", {spec.s1, spec.s2, spec.s3}},
                              {"direction", {spec.v1, spec.v2, spec.v3}}}},
                            {"theta", sched.theta},
                            {"lambda", sched.lambda},
                            {"level", sched.level},
                            {"samples", pts.size()},
                            {"discrepancy", disc}});
            return 0;
        } catch (const PathologicalTrajectoryError&) {
            if (a + 1 >= attempts) throw;
        }
    }
}

int run_discrepancy(const CliContext& ctx) {
    const json cfg = load_config(ctx);
    const std::uint64_t seed = effective_seed(ctx, cfg);
    const auto geom = config_geometry(cfg);
    const PrismConfig prism_cfg(geom, cfg.value("z0", 1.0));
    const auto poly = config_polygon(cfg, geom);
    std::vector<double> ladder;
    for (const auto& v : cfg.at("n_ladder")) ladder.push_back(v.get<double>());
    if (ladder.empty()) throw InvalidParameterError("n_ladder must be non-empty");
    const double n_max = *std::max_element(ladder.begin(), ladder.end());

    const bool explicit_spec = cfg.contains("spec");
    const int attempts = (!explicit_spec && ctx.retry_pathological) ? 64 : 1;
    for (int a = 0;; ++a) {
        const auto spec = config_spec(cfg, prism_cfg, seed, static_cast<std::uint64_t>(a));
        try {
            const auto sched = schedule(spec, prism_cfg);
            const auto pr = project(spec);
            const auto tr = trace(geom, pr.start, pr.direction, n_max + sched.theta);
            auto out = open_artifact(ctx, "discrepancy.csv");
            out << "n,count,discrepancy\n";
            json rows = json::array();
            char buf[120];
            for (double n : ladder) {
                const auto pts = sample_at_hits(tr, sched, n);
                const double disc = ap_discrepancy(pts, poly, sched, n, geom);
                std::snprintf(buf, sizeof buf, "%.9g,%zu,%.9g\n", n, pts.size(), disc);
                out << buf;
                rows.push_back(json{{"n", n}, {"count", pts.size()}, {"discrepancy", disc}});
            }
            write_json(ctx, "discrepancy_summary.json",
                       json{{"seed", seed},
                            {"theta", sched.theta},
                            {"lambda", sched.lambda},
                            {"ladder", rows}});
            return 0;
        } catch (const PathologicalTrajectoryError&) {
            if (a + 1 >= attempts) throw;
        }
    }
}

int run_transfer(const CliContext& ctx) {
    const json cfg = load_config(ctx);
    const std::uint64_t seed = effective_seed(ctx, cfg);
    const auto s = config_set(ctx, cfg, seed);
    const int ell = cfg.value("ell", 0);
    const auto samples = cfg.value("samples", std::int64_t{1000});
    std::vector<double> ladder;
    if (cfg.contains("n_ladder"))
        for (const auto& v : cfg["n_ladder"]) ladder.push_back(v.get<double>());
    else
        ladder.push_back(cfg.at("n").get<double>());

    // C policy: explicit, or 4x the median normalized error at the first n.
    double C;
    if (cfg.contains("C")) {
        C = cfg["C"].get<double>();
    } else {
        std::vector<double> normalized;
        const double n0 = ladder.front();
        for (std::int64_t i = 0; i < samples; ++i) {
            Rng rng(derive_seed(seed, "exceptional-pair", static_cast<std::uint64_t>(i)));
            const APPair p = sample_pair(ell, rng);
            normalized.push_back(transfer_error(s, p.theta, p.lambda, n0).normalized_error);
        }
        std::sort(normalized.begin(), normalized.end());
        C = 4.0 * normalized[normalized.size() / 2];
    }

    json per_n = json::array();
    for (double n : ladder) {
        char name[64];
        std::snprintf(name, sizeof name, "pairs_n%.0f.csv", n);
        auto out = open_artifact(ctx, name);
        out << "theta,lambda,count,expected,error,normalized_error\n";
        char buf[240];
        for (std::int64_t i = 0; i < samples; ++i) {
            Rng rng(derive_seed(seed, "exceptional-pair", static_cast<std::uint64_t>(i)));
            const APPair p = sample_pair(ell, rng);
            const auto r = transfer_error(s, p.theta, p.lambda, n);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%lld,%.17g,%.17g,%.17g\n", p.theta,
                          p.lambda, static_cast<long long>(r.count), r.expected, r.error,
                          r.normalized_error);
            out << buf;
        }
        const double fraction = exceptional_fraction(s, ell, n, C, samples, seed, ctx.threads);
        per_n.push_back(json{{"n", n}, {"C", C}, {"fraction", fraction}, {"samples", samples},
                             {"seed", seed}});
    }
    write_json(ctx, "transfer_summary.json",
               json{{"seed", seed},
                    {"ell", ell},
                    {"C", C},
                    {"samples", samples},
                    {"set_measure", s.total_measure()},
                    {"ladder", per_n}});
    return 0;
}

int run_fourier_verify(const CliContext& ctx) {
    const json cfg = load_config(ctx);
    const std::uint64_t seed = effective_seed(ctx, cfg);
    auto s = config_set(ctx, cfg, seed);
    const auto N = cfg.at("N").get<std::int64_t>();
    const auto M = cfg.at("M").get<std::int64_t>();
    const int ell = cfg.value("ell", 0);
    const int J_max = cfg.value("J_max", static_cast<int>(2 * N));
    const auto quad = config_quad(cfg);

    // Contract onto the unit interval when the set lives on [0, n].
    double span = 0.0;
    for (const auto& iv : s.intervals()) span = std::max(span, iv.v);
    const auto s01 = span > 1.0 ? contract(s, static_cast<std::int64_t>(std::ceil(span))) : s;
    const auto series = fourier_coeffs(s01, J_max);

    const auto r = Jstar(series, N, M, ell, quad, ctx.threads);
    {
        auto out = open_artifact(ctx, "E.csv");
        out << "j,E,err_est\n";
        char buf[120];
        for (std::int64_t j = 1; j <= 2 * N; ++j) {
            double err = 0.0;
            const double e = E_integral(j, N, ell, quad, &err);
            std::snprintf(buf, sizeof buf, "%lld,%.12g,%.3g\n", static_cast<long long>(j), e, err);
            out << buf;
        }
    }
    const double wsum = weight_sum_bound(M, ell);
    write_json(ctx, "fourier_report.json",
               json{{"seed", seed},
                    {"N", N},
                    {"M", M},
                    {"ell", ell},
                    {"J_max", J_max},
                    {"a0", series.a0},
                    {"Jstar", r.value},
                    {"Jstar_diag", r.diagonal},
                    {"Jstar_offdiag", r.off_diagonal},
                    {"bound", r.bound},
                    {"margin", r.margin},
                    {"tail_budget", r.tail_budget},
                    {"quad_budget", r.quad_budget},
                    {"within_bound", r.within_bound},
                    {"weight_sum_bound", wsum}});
    return r.within_bound ? 0 : 4;
}

int run_unfold_check(const CliContext& ctx) {
    const json cfg = load_config(ctx);
    const std::uint64_t seed = effective_seed(ctx, cfg);
    const std::string mode = cfg.value("mode", "all");
    const int bounces = cfg.value("bounces", 1000);
    const int z_reflections = cfg.value("z_reflections", 10000);
    const double z0 = cfg.value("z0", 1.0);

    const FoldingAtlas atlas;
    const TriangleBilliard& tri = atlas.triangle();

    json report{{"seed", seed}, {"bounces", bounces}, {"pathological", false}};
    double worst = 0.0;
    const int attempts = ctx.retry_pathological ? 64 : 1;

    if (mode == "planar" || mode == "all") {
        for (int a = 0;; ++a) {
            try {
                Vec2 start;
                Direction2 dir;
                if (cfg.contains("start")) {
                    start = config_start(cfg);
                    dir = config_direction(cfg, seed, static_cast<std::uint64_t>(a));
                } else {
                    Rng rng(derive_seed(seed, "unfold", static_cast<std::uint64_t>(a)));
                    const double h = std::tan(M_PI / 8.0);
                    do {
                        start = {rng.uniform(0.05, 0.95), rng.uniform(0.005, h - 0.005)};
                    } while (!tri.inside(start, -1e-6));
                    dir = Direction2::from_angle(rng.uniform(0.0, 2.0 * M_PI));
                }
                const double dev =
                    unfold_equivalence_check(tri, atlas, atlas.octagon(), start, dir, bounces);
                report["planar_deviation"] = dev;
                worst = std::max(worst, dev);
                break;
            } catch (const PathologicalTrajectoryError&) {
                if (a + 1 >= attempts) throw;
            }
        }
    }
    if (mode == "z" || mode == "all") {
        Rng rng(derive_seed(seed, "tent"));
        const double s3 = cfg.value("s3", rng.uniform(0.0, 2.0 * z0));
        const double v3 = cfg.value("v3", rng.uniform(0.3, 0.95));
        const double dev = tent_map_check(z0, s3, v3, z_reflections);
        report["z_reflections"] = z_reflections;
        report["z_deviation"] = dev;
        worst = std::max(worst, dev);
    }
    if (mode == "prism" || mode == "all") {
        const PrismConfig prism_cfg(atlas.octagon(), z0);
        for (int a = 0;; ++a) {
            try {
                const auto spec = config_spec(cfg, prism_cfg, seed, static_cast<std::uint64_t>(a));
                const double dev = prism_equivalence_check(prism_cfg, spec, bounces);
                report["prism_deviation"] = dev;
                worst = std::max(worst, dev);
                break;
            } catch (const PathologicalTrajectoryError&) {
                if (a + 1 >= attempts) throw;
            }
        }
    }
    report["max_deviation"] = worst;
    write_json(ctx, "unfold_report.json", report);
    std::cout << report.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"octagon-prism geodesic flow experiments"};
    app.require_subcommand(1);

    CliContext ctx;
    app.add_option("--config", ctx.config_path, "JSON config path")->check(CLI::ExistingFile);
    auto* seed_opt = app.add_option("--seed", ctx.seed, "64-bit experiment seed");
    app.add_option("--out", ctx.out_dir, "artifact output directory");
    app.add_option("--threads", ctx.threads, "worker threads (results are thread-count invariant)");
    app.add_option("--retry-pathological", ctx.retry_pathological,
                   "resample direction on singular hits (sampling mode only)");

    int (*handler)(const CliContext&) = nullptr;
    const std::vector<std::pair<const char*, std::pair<const char*, int (*)(const CliContext&)>>>
        commands = {
            {"trace", {"trace a planar geodesic, emit crossings CSV", run_trace}},
            {"visits", {"visit-time interval set and density for a polygon", run_visits}},
            {"sample3d", {"AP-sampled points of a prism geodesic", run_sample3d}},
            {"discrepancy", {"AP discrepancy along an n ladder", run_discrepancy}},
            {"transfer", {"transference Monte Carlo: exceptional pair fractions", run_transfer}},
            {"fourier-verify", {"J*, E(j;N) and weight-sum bound verification", run_fourier_verify}},
            {"unfold-check", {"billiard vs folded geodesic equivalence report", run_unfold_check}},
        };
    for (const auto& [name, desc_fn] : commands) {
        auto* sub = app.add_subcommand(name, desc_fn.first);
        sub->fallthrough();  // accept the global flags after the subcommand name
        auto fn = desc_fn.second;
        sub->callback([&handler, fn] { handler = fn; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    ctx.seed_from_flag = seed_opt->count() > 0;

    try {
        return handler(ctx);
    } catch (const PathologicalTrajectoryError& e) {
        json diag{{"error", "pathological_trajectory"},
                  {"what", e.what()},
                  {"tau", e.tau},
                  {"crossing", e.crossing}};
        std::cerr << diag.dump(2) << "\n";
        return 3;
    } catch (const NumericError& e) {
        json diag{{"error", "numeric_failure"}, {"what", e.what()}};
        std::cerr << diag.dump(2) << "\n";
        return 4;
    } catch (const Error& e) {
        json diag{{"error", "invalid_config"}, {"what", e.what()}};
        std::cerr << diag.dump(2) << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
}
