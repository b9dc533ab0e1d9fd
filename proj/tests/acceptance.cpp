// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Criterion 13 exercises the CLI binary (path in argv[1]).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "octaflow/fourier.hpp"
#include "octaflow/geodesic.hpp"
#include "octaflow/prism.hpp"
#include "octaflow/transference.hpp"
#include "octaflow/unfolding.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace octaflow;

namespace {

std::string g_cli_path;
fs::path g_tmp_dir;

struct Criterion {
    int id;
    std::string name;
    double budget_seconds;
    std::function<bool(std::string&)> run;
};

bool approx_le(double value, double bound) { return value <= bound; }

// ---------------------------------------------------------------------------

bool c1_geometry(std::string& detail) {
    const auto g = build_octagon(1.0);
    const double area_err = std::fabs(g.area - 2.0 * (1.0 + std::sqrt(2.0)));
    if (area_err > 1e-12) {
        detail = "area error " + std::to_string(area_err);
        return false;
    }
    Rng rng(7);
    double worst = 0.0;
    int tested = 0;
    while (tested < 100000) {
        const int e = static_cast<int>(rng.next_double() * 8.0);
        const double t = rng.uniform(1e-6, 1.0 - 1e-6);
        const Vec2 p = g.vertex(e) + t * (g.vertex(e + 1) - g.vertex(e));
        if (classify(g, p).region != Region::Boundary) continue;
        worst = std::max(worst, distance(p, wrap(g, wrap(g, p))));
        ++tested;
    }
    const FoldingAtlas atlas;
    const double tiling_err =
        std::fabs(16.0 * 0.5 * std::tan(M_PI / 8.0) - atlas.octagon().area);
    std::ostringstream ss;
    ss << "area_err " << area_err << ", wrap involution worst " << worst << ", tiling_err "
       << tiling_err;
    detail = ss.str();
    return worst <= 1e-12 && tiling_err <= 1e-10;
}

bool c2_ap_count_oracle(std::string& detail) {
    Rng rng(314159);
    for (int it = 0; it < 1000; ++it) {
        const auto s = testing::random_interval_set(rng, 20, 1000.0);
        const double theta = rng.uniform(0.5, 4.0);
        const double lambda = rng.uniform(0.0, theta);
        const double n = rng.uniform(10.0, 1000.0);
        if (ap_count(s, theta, lambda, n) != testing::brute_force_ap_count(s, theta, lambda, n)) {
            detail = "mismatch at instance " + std::to_string(it);
            return false;
        }
    }
    detail = "1000/1000 exact";
    return true;
}

bool c3_parseval(std::string& detail) {
    Rng rng(17);
    for (int it = 0; it < 100; ++it) {
        const auto s = testing::random_interval_set(rng, 8, 1.0, 0.01);
        const auto fs = fourier_coeffs(s.restrict(1.0), 96);
        if (fs.partial_power() > fs.a0 * (1.0 - fs.a0) + 1e-12) {
            detail = "Parseval inequality violated at set " + std::to_string(it);
            return false;
        }
    }
    const auto half = fourier_coeffs(IntervalSet::normalize({{0.0, 0.5}}), 512);
    const double gap = std::fabs(half.partial_power() - 0.25);
    const double apriori = 2.0 / (M_PI * M_PI * 512.0);
    std::ostringstream ss;
    ss << "100 sets ok; [0,1/2): |partial-1/4| = " << gap << " <= tail " << half.tail_bound
       << " <= a-priori " << apriori;
    detail = ss.str();
    return gap <= half.tail_bound && half.tail_bound <= apriori;
}

bool c4_K_bound(std::string& detail) {
    Rng rng(23);
    for (int it = 0; it < 100000; ++it) {
        const double alpha = 1.0 - rng.next_double();
        const auto K = K_of_alpha(alpha);
        if (!(std::fabs(static_cast<double>(K) - 1.0 / alpha) < 1.0) ||
            !(static_cast<double>(K - 1) * alpha < 1.0) ||
            !(static_cast<double>(K) * alpha >= 1.0)) {
            detail = "violated at alpha = " + std::to_string(alpha);
            return false;
        }
    }
    detail = "100000/100000 exact";
    return true;
}

bool c5_E_bounds(std::string& detail) {
    QuadratureConfig quad;
    double worst_margin = 1e300;
    for (int level : {0, 1}) {
        for (std::int64_t N : {64LL, 256LL}) {
            const double dyadic_bound = std::ldexp(1.0, level + 8);
            const double small_bound = std::ldexp(1.0, level) / static_cast<double>(N);
            const std::int64_t small_jmax = N / (1LL << (level + 2));
            for (std::int64_t j = 1; j <= 4 * N; ++j) {
                double err = 0.0;
                const double e = E_integral(j, N, level, quad, &err);
                const double em = E_integral(-j, N, level, quad, &err);
                if (std::fabs(e - em) > 1e-9 * std::max(1.0, e)) {
                    detail = "E not even in j at j=" + std::to_string(j);
                    return false;
                }
                if (!approx_le(e, dyadic_bound + err)) {
                    detail = "dyadic bound failed at (j,N,l)=(" + std::to_string(j) + "," +
                             std::to_string(N) + "," + std::to_string(level) + ")";
                    return false;
                }
                worst_margin = std::min(worst_margin, dyadic_bound + err - e);
                if (j <= small_jmax && !approx_le(e, small_bound + err)) {
                    detail = "small-j bound failed at (j,N,l)=(" + std::to_string(j) + "," +
                             std::to_string(N) + "," + std::to_string(level) + ")";
                    return false;
                }
            }
        }
    }
    std::ostringstream ss;
    ss << "all j in [1,4N], worst dyadic margin " << worst_margin;
    detail = ss.str();
    return true;
}

bool c6_jstar(std::string& detail) {
    Rng rng(47);
    QuadratureConfig quad;
    double worst_margin = 1e300;
    for (int set_i = 0; set_i < 20; ++set_i) {
        const auto s = testing::random_interval_set(rng, 8, 1.0, 0.01).restrict(1.0);
        for (int level : {0, 1}) {
            for (auto [N, M] : {std::pair<std::int64_t, std::int64_t>{64, 8}, {256, 16}}) {
                const auto series = fourier_coeffs(s, static_cast<int>(2 * N));
                const auto r = Jstar(series, N, M, level, quad, 4);
                if (!r.within_bound) {
                    std::ostringstream ss;
                    ss << "J* over bound at set " << set_i << " (N,M,l)=(" << N << "," << M << ","
                       << level << "): value " << r.value << " + budgets " << r.tail_budget << "/"
                       << r.quad_budget << " > " << r.bound;
                    detail = ss.str();
                    return false;
                }
                worst_margin = std::min(worst_margin, r.margin);
            }
        }
    }
    std::ostringstream ss;
    ss << "20 sets x 4 configs, worst margin " << worst_margin;
    detail = ss.str();
    return true;
}

bool c7_weight_sum(std::string& detail) {
    double worst = 0.0;
    for (int level : {0, 1}) {
        for (std::int64_t M : {4LL, 8LL, 16LL, 64LL}) {
            if (std::ldexp(1.0, level) / static_cast<double>(M) > 0.5) continue;
            const double v = weight_sum_bound(M, level);
            worst = std::max(worst, v);
            if (v > 6.0) {
                detail = "bound " + std::to_string(v) + " > 6 at M=" + std::to_string(M);
                return false;
            }
        }
    }
    detail = "max over grid " + std::to_string(worst) + " <= 6";
    return true;
}

bool c8_transference_trend(std::string& detail) {
    const auto g = build_octagon(1.0);
    Rng rng(derive_seed(777, "direction", 0));
    const auto dir = Direction2::from_angle(rng.uniform(0.0, 2.0 * M_PI));
    const auto tr = trace(g, {0.0, 0.0}, dir, 16384.0);
    const auto poly = TestPolygon::rectangle(Rational(-1, 4), Rational(-1, 4), Rational(1, 4),
                                             Rational(1, 4), g);
    const auto s = visit_set(tr, poly);

    std::vector<double> normalized;
    for (int i = 0; i < 2000; ++i) {
        Rng r2(derive_seed(777, "exceptional-pair", static_cast<std::uint64_t>(i)));
        const APPair p = sample_pair(0, r2);
        normalized.push_back(transfer_error(s, p.theta, p.lambda, 1024.0).normalized_error);
    }
    std::sort(normalized.begin(), normalized.end());
    const double C = 4.0 * normalized[normalized.size() / 2];

    std::vector<double> fractions;
    for (double n : {1024.0, 4096.0, 16384.0})
        fractions.push_back(exceptional_fraction(s, 0, n, C, 2000, 777, 4));
    int inversions = 0;
    double worst_inversion = 0.0;
    for (std::size_t i = 1; i < fractions.size(); ++i) {
        if (fractions[i] > fractions[i - 1]) {
            ++inversions;
            worst_inversion = std::max(worst_inversion, fractions[i] - fractions[i - 1]);
        }
    }
    std::ostringstream ss;
    ss << "C=" << C << " fractions " << fractions[0] << " -> " << fractions[1] << " -> "
       << fractions[2] << " (inversions " << inversions << ")";
    detail = ss.str();
    return inversions <= 1 && worst_inversion <= 0.02;
}

bool c9_equidistribution(std::string& detail) {
    const auto g = build_octagon(1.0);
    Rng rng(derive_seed(101, "direction", 0));
    const auto dir = Direction2::from_angle(rng.uniform(0.0, 2.0 * M_PI));
    const auto tr = trace(g, {0.0, 0.0}, dir, 100000.0);
    const std::pair<std::pair<int, int>, std::pair<int, int>> rects[10] = {
        {{-1, -1}, {1, 1}}, {{-2, -1}, {0, 1}}, {{0, -2}, {2, 0}}, {{-3, 0}, {-1, 2}},
        {{1, 0}, {3, 2}},   {{-1, -3}, {1, -1}}, {{-1, 1}, {1, 3}}, {{-2, -2}, {2, 2}},
        {{-4, -1}, {4, 1}}, {{0, 0}, {2, 2}}};
    double worst = 0.0;
    for (const auto& r : rects) {
        const auto poly = TestPolygon::rectangle(
            Rational(r.first.first, 4), Rational(r.first.second, 4), Rational(r.second.first, 4),
            Rational(r.second.second, 4), g);
        const double d = density(visit_set(tr, poly), tr.horizon);
        worst = std::max(worst, std::fabs(d - poly.area().to_double() / g.area));
    }
    detail = "worst |density - area ratio| = " + std::to_string(worst);
    return worst < 0.02;
}

bool c10_unfolding(std::string& detail) {
    const FoldingAtlas atlas;
    const TriangleBilliard& tri = atlas.triangle();
    Rng rng(derive_seed(55, "unfold", 0));
    double planar = -1.0;
    for (int a = 0; a < 64; ++a) {
        try {
            const double h = std::tan(M_PI / 8.0);
            Vec2 start;
            do {
                start = {rng.uniform(0.05, 0.95), rng.uniform(0.005, h - 0.005)};
            } while (!tri.inside(start, -1e-6));
            const auto dir = Direction2::from_angle(rng.uniform(0.0, 2.0 * M_PI));
            planar = unfold_equivalence_check(tri, atlas, atlas.octagon(), start, dir, 1000);
            break;
        } catch (const PathologicalTrajectoryError&) {
        }
    }
    const double tent = tent_map_check(1.0, 0.3, 0.8, 10000);
    const PrismConfig cfg(atlas.octagon(), 0.7);
    GeodesicSpec3D spec;
    const double v1 = 0.31, v2 = 0.44;
    const double v3 = std::sqrt(1.0 - v1 * v1 - v2 * v2);
    spec = {0.05, -0.3, 0.4, v1, v2, v3};
    const double prism = prism_equivalence_check(cfg, spec, 1000);
    std::ostringstream ss;
    ss << "planar " << planar << " (<=1e-8), tent " << tent << " (<=1e-12), prism " << prism
       << " (<=1e-8)";
    detail = ss.str();
    return planar >= 0.0 && planar <= 1e-8 && tent <= 1e-12 && prism <= 1e-8;
}

bool c11_discrepancy_ladder(std::string& detail) {
    const auto g = build_octagon(1.0);
    const PrismConfig cfg(g, 1.0);
    Rng rng(derive_seed(999, "spec3d", 0));
    GeodesicSpec3D spec;
    const double z = rng.uniform(0.02, 0.999);
    const double phi = rng.uniform(0.0, 2.0 * M_PI);
    const double rho = std::sqrt(1.0 - z * z);
    spec.v1 = rho * std::cos(phi);
    spec.v2 = rho * std::sin(phi);
    spec.v3 = z;
    spec.s1 = 0.0;
    spec.s2 = 0.0;
    spec.s3 = rng.uniform(0.0, 2.0);
    const auto sched = schedule(spec, cfg);
    const auto pr = project(spec);
    const auto tr = trace(g, pr.start, pr.direction, 65536.0 + sched.theta);
    const auto poly = TestPolygon::rectangle(Rational(-1, 4), Rational(-1, 4), Rational(1, 4),
                                             Rational(1, 4), g);
    std::vector<double> discs;
    for (double n : {1024.0, 4096.0, 16384.0, 65536.0}) {
        const auto pts = sample_at_hits(tr, sched, n);
        discs.push_back(ap_discrepancy(pts, poly, sched, n, g));
    }
    int inversions = 0;
    for (std::size_t i = 1; i < discs.size(); ++i)
        if (discs[i] > discs[i - 1]) ++inversions;
    std::ostringstream ss;
    ss << "discrepancies";
    for (double d : discs) ss << " " << d;
    ss << " (inversions " << inversions << ")";
    detail = ss.str();
    return inversions <= 1;
}

bool c12_shift_bound(std::string& detail) {
    Rng rng(53);
    double worst_slack = 1e300;
    for (int it = 0; it < 100; ++it) {
        std::vector<Interval> raw;
        const int m = 1 + static_cast<int>(rng.next_double() * 4.0);
        for (int i = 0; i < m; ++i) {
            const double u = rng.uniform(0.0, 0.9);
            raw.push_back({u, std::min(1.0, u + rng.uniform(0.02, 0.2))});
        }
        const auto s = IntervalSet::normalize(std::move(raw));
        const auto fs = fourier_coeffs(s, 256);
        const double alpha = rng.uniform(0.004, 0.05);
        const auto q = static_cast<std::int64_t>(1 + rng.next_double() * 5.0);
        const double beta = rng.uniform(0.0, alpha);
        const double gamma = static_cast<double>(q) * alpha + beta;
        const auto r = shift_difference_check(fs, alpha, beta, gamma, q, 0.0);

        // Tail budget: partial-sum defects at the 2q symmetric-difference
        // points (the k = 0..q-1 and k = K..K+q-1 progression points).
        const std::int64_t K = K_of_alpha(alpha);
        auto defect = [&](double x) {
            x -= std::floor(x);
            double chi = 0.0;
            for (const auto& iv : s.intervals())
                if (x >= iv.u && x < iv.v) chi = 1.0;
            return std::fabs(fs.evaluate(x) - chi);
        };
        double tail = 0.0;
        for (std::int64_t k = 0; k < q; ++k) {
            tail += defect(static_cast<double>(k) * alpha + beta);
            tail += defect(static_cast<double>(K + k) * alpha + beta);
        }
        const double bound = 4.0 * static_cast<double>(q) + tail;
        if (r.value > bound) {
            std::ostringstream ss;
            ss << "violated at it " << it << ": value " << r.value << " > 4q+tail " << bound;
            detail = ss.str();
            return false;
        }
        worst_slack = std::min(worst_slack, bound - r.value);
    }
    detail = "100/100 within 4q + tail budget, min slack " + std::to_string(worst_slack);
    return true;
}

int run_cli(const std::string& args) {
    const std::string cmd = g_cli_path + " " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str());
}

bool files_identical(const fs::path& a, const fs::path& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    if (!fa || !fb) return false;
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    return sa.str() == sb.str();
}

bool c13_cli_determinism(std::string& detail) {
    if (g_cli_path.empty()) {
        detail = "CLI path not supplied (argv[1])";
        return false;
    }
    fs::create_directories(g_tmp_dir);
    const fs::path poly = g_tmp_dir / "poly.json";
    {
        std::ofstream out(poly);
        out << R"({"vertices": [["-1/4","-1/4"],["1/4","-1/4"],["1/4","1/4"],["-1/4","1/4"]]})";
    }
    auto cfg_file = [&](const std::string& name, const std::string& text) {
        const fs::path p = g_tmp_dir / name;
        std::ofstream out(p);
        out << text;
        return p.string();
    };
    const std::string poly_ref = "\"polygon_file\": \"" + poly.string() + "\"";
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"trace", cfg_file("trace.json", R"({"horizon": 200.0, "start": [0.02, 0.03]})")},
        {"visits", cfg_file("visits.json",
                            R"({"horizon": 500.0, "start": [0.02, 0.03], )" + poly_ref + "}")},
        {"sample3d", cfg_file("s3d.json", R"({"z0": 1.0, "n": 1024.0, )" + poly_ref + "}")},
        {"discrepancy",
         cfg_file("disc.json", R"({"z0": 1.0, "n_ladder": [256, 1024], )" + poly_ref + "}")},
        {"transfer", cfg_file("transfer.json",
                              R"({"set": {"random": {"count": 5}}, "ell": 0, "n_ladder": [512, 2048], "samples": 200})")},
        {"fourier-verify",
         cfg_file("fv.json", R"({"set": {"random": {"count": 4}}, "N": 64, "M": 8, "ell": 0})")},
        {"unfold-check",
         cfg_file("unfold.json", R"({"mode": "all", "bounces": 200, "z_reflections": 1000})")},
    };
    for (const auto& [sub, cfg] : cases) {
        const fs::path out1 = g_tmp_dir / (sub + "_t1");
        const fs::path out8 = g_tmp_dir / (sub + "_t8");
        fs::remove_all(out1);
        fs::remove_all(out8);
        const std::string common = " --config " + cfg + " --seed 42 ";
        if (run_cli(sub + common + "--threads 1 --out " + out1.string()) != 0 ||
            run_cli(sub + common + "--threads 8 --out " + out8.string()) != 0) {
            detail = sub + ": CLI run failed";
            return false;
        }
        for (const auto& entry : fs::directory_iterator(out1)) {
            const fs::path other = out8 / entry.path().filename();
            if (!files_identical(entry.path(), other)) {
                detail = sub + ": artifact differs: " + entry.path().filename().string();
                return false;
            }
        }
    }
    detail = "7 subcommands byte-identical at threads 1 and 8";
    return true;
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli_path = argv[1];
    g_tmp_dir = fs::temp_directory_path() / "octaflow_acceptance";

    const std::vector<Criterion> criteria = {
        {1, "geometry exactness (area, wrap involution, 16-copy tiling)", 5.0, c1_geometry},
        {2, "AP counting matches brute force on 1000 instances", 5.0, c2_ap_count_oracle},
        {3, "Parseval inequality and [0,1/2) partial sum vs tail", 10.0, c3_parseval},
        {4, "K(alpha) brackets 1/alpha on 1e5 samples", 1.0, c4_K_bound},
        {5, "E(j;N) dyadic and small-j bounds over the grid", 120.0, c5_E_bounds},
        {6, "J* <= 2^(l+11) over 20 sets x 4 configs", 600.0, c6_jstar},
        {7, "roof weight sum <= 6 on the (M, l) grid", 1.0, c7_weight_sum},
        {8, "exceptional fraction non-increasing along the n ladder", 180.0,
         c8_transference_trend},
        {9, "equidistribution of a seeded geodesic on 10 rectangles", 60.0, c9_equidistribution},
        {10, "unfolding equivalences (planar, tent map, prism)", 30.0, c10_unfolding},
        {11, "AP discrepancy non-increasing along the n ladder", 120.0, c11_discrepancy_ladder},
        {12, "shift difference <= 4q + tail on 100 instances", 30.0, c12_shift_bound},
        {13, "CLI determinism across reruns and thread counts", 600.0, c13_cli_determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_budget = elapsed < c.budget_seconds;
        if (!in_budget) detail += " [OVER BUDGET]";
        const bool pass = ok && in_budget;
        std::printf("[%s] criterion %2d: %s (%.2f s < %.0f s) -- %s\n", pass ? "PASS" : "FAIL",
                    c.id, c.name.c_str(), elapsed, c.budget_seconds, detail.c_str());
        std::fflush(stdout);
        if (!pass) ++failures;
    }
    if (failures > 0) {
        std::printf("%d criterion(s) FAILED\n", failures);
        return 1;
    }
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
}
