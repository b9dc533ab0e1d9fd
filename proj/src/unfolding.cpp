#include "octaflow/unfolding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "octaflow/geodesic.hpp"

namespace octaflow {

namespace {
constexpr double kPi = std::numbers::pi;
} // namespace

TriangleBilliard::TriangleBilliard() {
    const double h = std::tan(kPi / 8.0);  // = sqrt(2) - 1
    vertices_ = {Vec2{0.0, 0.0}, Vec2{1.0, 0.0}, Vec2{0.0, h}};
    for (int e = 0; e < 3; ++e) {
        const Vec2 p0 = vertices_[e];
        const Vec2 p1 = vertices_[(e + 1) % 3];
        const Vec2 d = p1 - p0;
        const double len = d.norm();
        Vec2 n{d.y / len, -d.x / len};  // right-hand normal of a ccw polygon = outward
        edges_[e] = {p0, p1, n, n.dot(p0)};
    }
}

Vec2 TriangleBilliard::reflect_point(int e, Vec2 p) const {
    const Edge& ed = edges_[e];
    const double s = ed.normal.dot(p) - ed.offset;
    return p - 2.0 * s * ed.normal;
}

Vec2 TriangleBilliard::reflect_direction(int e, Vec2 d) const {
    const Edge& ed = edges_[e];
    return d - 2.0 * ed.normal.dot(d) * ed.normal;
}

bool TriangleBilliard::inside(Vec2 p, double tol) const {
    for (const Edge& e : edges_)
        if (e.normal.dot(p) - e.offset > tol) return false;
    return true;
}

std::vector<Bounce> billiard_trace(const TriangleBilliard& tri, Vec2 start, Direction2 dir,
                                   int bounce_count) {
    if (!tri.inside(start, -tri.eps_geom()))
        throw InvalidParameterError("billiard start must be interior");
    std::vector<Bounce> out;
    out.reserve(static_cast<std::size_t>(std::max(0, bounce_count)));

    Vec2 p = start;
    Vec2 d = dir.vec();
    double t = 0.0;
    for (int i = 0; i < bounce_count; ++i) {
        double best = 1e300;
        int edge = -1;
        for (int e = 0; e < 3; ++e) {
            const auto& ed = tri.edges()[e];
            const double dn = ed.normal.dot(d);
            if (dn <= 0.0) continue;
            const double step = (ed.offset - ed.normal.dot(p)) / dn;
            if (step > 1e-14 && step < best) {
                best = step;
                edge = e;
            }
        }
        if (edge < 0) throw GeometryError("billiard ray found no exit edge");
        Vec2 q = p + best * d;
        // Snap onto the edge line before the corner test and the reflection.
        const auto& ed = tri.edges()[edge];
        q = q - (ed.normal.dot(q) - ed.offset) * ed.normal;
        t += best;
        for (const Vec2& v : tri.vertices())
            if (distance(q, v) <= tri.eps_geom())
                throw PathologicalTrajectoryError("billiard orbit hits a corner", t, i);
        d = tri.reflect_direction(edge, d);
        out.push_back({t, edge, q, d});
        p = q;
    }
    return out;
}

Vec2 billiard_position(const std::vector<Bounce>& bounces, Vec2 start, Direction2 dir, double t) {
    Vec2 p = start;
    Vec2 d = dir.vec();
    double t0 = 0.0;
    for (const Bounce& b : bounces) {
        if (t <= b.t) return p + (t - t0) * d;
        p = b.point;
        d = b.direction;
        t0 = b.t;
    }
    return p + (t - t0) * d;
}

// ---------------------------------------------------------------------------
// FoldingAtlas

FoldingAtlas::FoldingAtlas() {
    const double h = std::tan(kPi / 8.0);

    // Work in the centered chart: the pi/8 apex of the base copy sits at the
    // origin, so all 16 motions are linear. Base copy vertices:
    const Vec2 A0{0.0, 0.0}, B0{-1.0, 0.0}, C0{-1.0, h};

    // BFS orbit: reflect each copy across the two of its edge lines that pass
    // through the apex (the images of the legs meeting at angle pi/8). The
    // orbit is the dihedral group of order 16.
    auto reflection_across = [](double angle) {
        Motion m;
        m.m00 = std::cos(2.0 * angle);
        m.m01 = std::sin(2.0 * angle);
        m.m10 = std::sin(2.0 * angle);
        m.m11 = -std::cos(2.0 * angle);
        return m;
    };
    auto compose = [](const Motion& f, const Motion& g) {  // f after g
        Motion m;
        m.m00 = f.m00 * g.m00 + f.m01 * g.m10;
        m.m01 = f.m00 * g.m01 + f.m01 * g.m11;
        m.m10 = f.m10 * g.m00 + f.m11 * g.m10;
        m.m11 = f.m10 * g.m01 + f.m11 * g.m11;
        return m;
    };

    // Generators: reflections across the base leg line (y = 0) and the base
    // hypotenuse line (angle pi - pi/8 through the origin).
    const Motion Fx = reflection_across(0.0);
    const Motion Fh = reflection_across(kPi - kPi / 8.0);

    const Motion identity{1.0, 0.0, 0.0, 1.0};
    motions_.push_back(identity);
    auto key_of = [](const Motion& m) {
        auto q = [](double x) { return std::llround(x * 1e9); };
        return std::array<long long, 4>{q(m.m00), q(m.m01), q(m.m10), q(m.m11)};
    };
    std::vector<std::array<long long, 4>> seen{key_of(identity)};
    for (std::size_t head = 0; head < motions_.size(); ++head) {
        const Motion g = motions_[head];
        for (const Motion& gen : {Fx, Fh}) {
            // Reflecting copy g(T0) across its own leg image is g * gen.
            const Motion next = compose(g, gen);
            const auto key = key_of(next);
            if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
                seen.push_back(key);
                motions_.push_back(next);
            }
        }
    }
    if (motions_.size() != 16)
        throw GeometryError("atlas BFS did not close at 16 copies");

    copies_.reserve(16);
    for (const Motion& m : motions_)
        copies_.push_back({m.apply(A0), m.apply(B0), m.apply(C0)});

    // Derive the octagon side from the copies: the C-images are the octagon
    // vertices; the side is the minimum distance between distinct ones.
    double side = 1e300;
    for (const auto& ci : copies_)
        for (const auto& cj : copies_) {
            const double d = distance(ci[2], cj[2]);
            if (d > 1e-9) side = std::min(side, d);
        }
    octagon_ = build_octagon(side);

    // Self-check: every copy's C-image must be an octagon vertex.
    for (const auto& c : copies_) {
        double best = 1e300;
        for (const Vec2& v : octagon_.vertices) best = std::min(best, distance(c[2], v));
        if (best > 1e-9) throw GeometryError("atlas copies do not line up with the octagon");
    }
}

Vec2 FoldingAtlas::to_octagon(int copy, Vec2 triangle_point) const {
    // User triangle -> centered chart: translate the apex (1, 0) to the origin.
    return motions_[static_cast<std::size_t>(copy)].apply(triangle_point - Vec2{1.0, 0.0});
}

Vec2 FoldingAtlas::direction_to_octagon(int copy, Vec2 d) const {
    return motions_[static_cast<std::size_t>(copy)].apply(d);
}

Vec2 FoldingAtlas::fold_direction(int copy, Vec2 d) const {
    return motions_[static_cast<std::size_t>(copy)].apply_inverse(d);
}

FoldingAtlas::Folded FoldingAtlas::fold_point(Vec2 p) const {
    auto locate = [&](double tol) -> int {
        for (std::size_t i = 0; i < copies_.size(); ++i) {
            const auto& c = copies_[i];
            // Reflected copies wind clockwise; test against their own
            // orientation sign.
            const double orient = (c[1] - c[0]).cross(c[2] - c[0]) > 0.0 ? 1.0 : -1.0;
            bool in = true;
            for (int e = 0; e < 3 && in; ++e) {
                const Vec2 a = c[static_cast<std::size_t>(e)];
                const Vec2 b = c[static_cast<std::size_t>((e + 1) % 3)];
                if (orient * (b - a).cross(p - a) < -tol) in = false;
            }
            if (in) return static_cast<int>(i);
        }
        return -1;
    };
    int idx = locate(1e-12);
    if (idx < 0) idx = locate(1e-9);
    if (idx < 0) throw GeometryError("point not inside any atlas copy");
    const Vec2 q = motions_[static_cast<std::size_t>(idx)].apply_inverse(p);
    return {q + Vec2{1.0, 0.0}, idx};
}

// ---------------------------------------------------------------------------
// Equivalence checks

double unfold_equivalence_check(const TriangleBilliard& tri, const FoldingAtlas& atlas,
                                const OctagonGeometry& geom, Vec2 start, Direction2 dir,
                                int bounce_count) {
    if (std::fabs(geom.side - atlas.octagon().side) > 1e-12)
        throw InvalidParameterError("geometry must be the atlas octagon (side 2*tan(pi/8))");
    if (bounce_count == 0) return 0.0;

    const std::vector<Bounce> bounces = billiard_trace(tri, start, dir, bounce_count);
    const double horizon = bounces.back().t * (1.0 + 1e-12) + 1e-9;

    const Vec2 q0 = atlas.to_octagon(0, start);
    const TracedGeodesic traced = trace(geom, q0, dir, horizon);

    double worst = 0.0;
    for (const Bounce& b : bounces) {
        const Vec2 g = traced.position_at(b.t);
        const Vec2 folded = atlas.fold_point(g).point;
        worst = std::max(worst, distance(folded, b.point));
    }
    return worst;
}

namespace {

// 1D billiard in [0, z0], stepped wall-to-wall in long double. Time is
// accumulated with Neumaier compensation: the steps are near-constant, so
// plain summation would drift with a systematic bias over 1e4 reflections.
struct IntervalBilliard {
    long double z0;
    long double pos;
    long double vel;  // signed speed
    long double t = 0.0L;
    long double tcomp = 0.0L;

    long double time() const { return t + tcomp; }

    void add_time(long double dt) {
        const long double s = t + dt;
        if (std::fabs(t) >= std::fabs(dt)) tcomp += (t - s) + dt;
        else tcomp += (dt - s) + t;
        t = s;
    }

    // Advance to absolute time target (target >= time()), reflecting as needed.
    void advance_to(long double target) {
        while (true) {
            const long double wall = vel > 0.0L ? z0 : 0.0L;
            const long double dt = (wall - pos) / vel;
            if (time() + dt >= target) {
                pos += vel * (target - time());
                tcomp = 0.0L;
                t = target;
                return;
            }
            add_time(dt);
            pos = wall;
            vel = -vel;
        }
    }

    long double next_wall_time() const {
        const long double wall = vel > 0.0L ? z0 : 0.0L;
        return time() + (wall - pos) / vel;
    }
};

long double tent_fold(long double u, long double z0) {
    long double m = std::fmod(u, 2.0L * z0);
    if (m < 0.0L) m += 2.0L * z0;
    return m <= z0 ? m : 2.0L * z0 - m;
}

} // namespace

double tent_map_check(double z0, double s3, double v3, int reflection_count) {
    if (!(z0 > 0.0) || !(v3 > 0.0))
        throw InvalidParameterError("tent_map_check requires z0 > 0 and v3 > 0");
    if (s3 < 0.0 || s3 >= 2.0 * z0)
        throw InvalidParameterError("s3 must lie in [0, 2*z0)");

    const long double lz0 = z0, ls3 = s3, lv3 = v3;
    IntervalBilliard sim{lz0, tent_fold(ls3, lz0), ls3 <= lz0 ? lv3 : -lv3};

    double worst = 0.0;
    long double prev_t = 0.0L;
    for (int i = 0; i < reflection_count; ++i) {
        const long double tw = sim.next_wall_time();
        // Mid-flight sample, then the wall hit itself.
        for (const long double tc : {0.5L * (prev_t + tw), tw}) {
            IntervalBilliard probe = sim;
            probe.advance_to(tc);
            const long double formula = tent_fold(ls3 + lv3 * tc, lz0);
            worst = std::max(worst, static_cast<double>(std::fabs(probe.pos - formula)));
        }
        sim.advance_to(tw * (1.0L + 1e-18L) + 1e-30L);  // step just past the wall
        prev_t = tw;
    }
    return worst;
}

double prism_equivalence_check(const PrismConfig& config, const GeodesicSpec3D& spec,
                               int bounce_count) {
    const FoldingAtlas atlas;
    const TriangleBilliard& tri = atlas.triangle();
    if (std::fabs(config.octagon.side - atlas.octagon().side) > 1e-12)
        throw InvalidParameterError("prism octagon must be the atlas octagon");
    spec.validate(config);

    const double sigma = spec.planar_speed();
    const Vec2 start2{spec.s1, spec.s2};
    const Vec2 w = Vec2{spec.v1, spec.v2} * (1.0 / sigma);

    // Fold the planar start into the triangle to get the 3D billiard start.
    const auto folded_start = atlas.fold_point(start2);
    const Vec2 tri_start = folded_start.point;
    const Vec2 tri_dir = atlas.fold_direction(folded_start.copy, w);

    // Planar billiard (arc-length parametrized) and planar geodesic.
    const std::vector<Bounce> bounces = billiard_trace(tri, tri_start, Direction2(tri_dir.x, tri_dir.y),
                                                       bounce_count);
    const double tau_last = bounces.back().t;
    const double t_last = tau_last / sigma;
    const TracedGeodesic traced = trace(config.octagon, start2, Direction2(w.x, w.y),
                                        tau_last * (1.0 + 1e-12) + 1e-9);

    // z billiard in [0, z0].
    const long double lz0 = config.z0;
    IntervalBilliard zsim{lz0, tent_fold(spec.s3, lz0), spec.s3 <= config.z0 ? spec.v3 : -spec.v3};

    // Checkpoints: planar bounce times and z wall times merged, bounce_count
    // of them in all.
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(bounce_count) * 2);
    for (const Bounce& b : bounces) times.push_back(b.t / sigma);
    {
        IntervalBilliard scan = zsim;
        while (true) {
            const double tw = static_cast<double>(scan.next_wall_time());
            if (tw > t_last) break;
            times.push_back(tw);
            scan.advance_to(scan.next_wall_time() * (1.0L + 1e-18L) + 1e-30L);
        }
    }
    std::sort(times.begin(), times.end());
    if (times.size() > static_cast<std::size_t>(bounce_count))
        times.resize(static_cast<std::size_t>(bounce_count));

    double worst = 0.0;
    for (double t : times) {
        const double tau = sigma * t;
        // Route 1: direct product billiard.
        const Vec2 bp = billiard_position(bounces, tri_start, Direction2(tri_dir.x, tri_dir.y), tau);
        IntervalBilliard probe = zsim;
        probe.advance_to(static_cast<long double>(t));
        const double bz = static_cast<double>(probe.pos);
        // Route 2: folded manifold geodesic.
        const Vec2 gp = atlas.fold_point(traced.position_at(tau)).point;
        const double gz = static_cast<double>(
            tent_fold(static_cast<long double>(spec.s3) + static_cast<long double>(spec.v3) * t, lz0));
        const double dxy = distance(bp, gp);
        const double dz = std::fabs(bz - gz);
        worst = std::max(worst, std::sqrt(dxy * dxy + dz * dz));
    }
    return worst;
}

} // namespace octaflow
