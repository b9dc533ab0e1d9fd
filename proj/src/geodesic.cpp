#include "octaflow/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace octaflow {

Direction2::Direction2(double x, double y) {
    const double n = std::hypot(x, y);
    if (!(n > 0.0) || !std::isfinite(n))
        throw InvalidParameterError("direction must be a nonzero finite vector");
    w1 = x / n;
    w2 = y / n;
}

Direction2 Direction2::from_angle(double radians) {
    Direction2 d;
    d.w1 = std::cos(radians);
    d.w2 = std::sin(radians);
    return d;
}

namespace {

// Ray/edge intersection across the 8 edge lines of the convex octagon.
// Returns (tau, edge) of the first exit, tau > 0.
struct Exit {
    double tau;
    int edge;
};

Exit first_exit(const OctagonGeometry& geom, Vec2 p, Vec2 w) {
    double best_tau = 1e300;
    int best_edge = -1;
    for (int k = 0; k < 8; ++k) {
        const double dn = geom.edge_normals[k].dot(w);
        if (dn <= 0.0) continue;  // moving away from or parallel to this edge
        const double t = (geom.apothem - geom.edge_normals[k].dot(p)) / dn;
        if (t > 0.0 && t < best_tau) {
            best_tau = t;
            best_edge = k;
        }
    }
    if (best_edge < 0)
        throw GeometryError("no boundary exit found (point outside the octagon?)");
    return {best_tau, best_edge};
}

} // namespace

CrossingEvent advance_to_boundary(const OctagonGeometry& geom, Vec2 point, Direction2 dir) {
    const Vec2 w = dir.vec();
    const Exit ex = first_exit(geom, point, w);
    Vec2 exit_point = point + ex.tau * w;
    // Snap onto the exit edge line before the vertex test and the wrap.
    const double off = geom.edge_normals[ex.edge].dot(exit_point) - geom.apothem;
    exit_point = exit_point - off * geom.edge_normals[ex.edge];

    const Vec2 va = geom.vertex(ex.edge), vb = geom.vertex(ex.edge + 1);
    if (distance(exit_point, va) <= geom.eps_geom || distance(exit_point, vb) <= geom.eps_geom)
        throw PathologicalTrajectoryError("orbit hits a cone point", ex.tau, -1);

    CrossingEvent ev;
    ev.tau = ex.tau;
    ev.exit_edge = ex.edge;
    ev.exit_point = exit_point;
    ev.entry_point = wrap_on_edge(geom, exit_point, ex.edge);
    return ev;
}

GeodesicStepper::GeodesicStepper(const OctagonGeometry& geom, Vec2 start, Direction2 dir)
    : geom_(geom), point_(start), dir_(dir.vec()) {
    if (classify(geom, start).region == Region::Exterior)
        throw InvalidParameterError("trace start must lie in the closed octagon");
}

CrossingEvent GeodesicStepper::step() {
    CrossingEvent ev;
    try {
        ev = advance_to_boundary(geom_, point_, Direction2(dir_.x, dir_.y));
    } catch (PathologicalTrajectoryError& e) {
        throw PathologicalTrajectoryError(e.what(), current_tau() + e.tau, count_);
    }
    const double dt = ev.tau;
    const double s = tau_ + dt;
    if (std::fabs(tau_) >= std::fabs(dt)) tau_comp_ += (tau_ - s) + dt;
    else tau_comp_ += (dt - s) + tau_;
    tau_ = s;
    ev.tau = current_tau();
    point_ = ev.entry_point;
    ++count_;
    return ev;
}

TracedGeodesic trace(const OctagonGeometry& geom, Vec2 start, Direction2 dir, double horizon) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw InvalidParameterError("horizon must be positive and finite");

    TracedGeodesic out;
    out.start = start;
    out.direction = dir;
    out.horizon = horizon;

    GeodesicStepper stepper(geom, start, dir);
    const Vec2 w = dir.vec();
    double tau_prev = 0.0;
    Vec2 seg_begin = start;

    while (true) {
        // Peek the next crossing; if it overshoots the horizon, close the
        // last partial segment and stop.
        CrossingEvent ev;
        bool hit_end = false;
        try {
            ev = stepper.step();
        } catch (const PathologicalTrajectoryError& e) {
            if (e.tau > horizon) {
                hit_end = true;  // the singular hit lies beyond the horizon
            } else {
                throw;
            }
        }
        if (!hit_end && ev.tau > horizon) hit_end = true;

        if (hit_end) {
            TracedGeodesic::Segment seg;
            seg.tau_begin = tau_prev;
            seg.tau_end = horizon;
            seg.begin_point = seg_begin;
            seg.end_point = seg_begin + (horizon - tau_prev) * w;
            out.segments.push_back(seg);
            break;
        }

        TracedGeodesic::Segment seg;
        seg.tau_begin = tau_prev;
        seg.tau_end = ev.tau;
        seg.begin_point = seg_begin;
        seg.end_point = ev.exit_point;
        out.segments.push_back(seg);
        out.crossings.push_back(ev);

        tau_prev = ev.tau;
        seg_begin = ev.entry_point;
    }
    return out;
}

Vec2 TracedGeodesic::position_at(double tau) const {
    if (!(tau >= 0.0) || tau > horizon)
        throw RangeError("tau outside [0, horizon]");
    // Binary search for the segment containing tau. A tau sitting exactly on
    // a crossing resolves to the earlier segment (its exit side).
    auto it = std::lower_bound(segments.begin(), segments.end(), tau,
                               [](const Segment& s, double t) { return s.tau_end < t; });
    if (it == segments.end()) it = segments.end() - 1;
    const Segment& s = *it;
    const Vec2 w = direction.vec();
    return s.begin_point + (tau - s.tau_begin) * w;
}

IntervalSet visit_set(const TracedGeodesic& traced, const TestPolygon& poly) {
    const auto& pv = poly.vertices_double();
    const std::size_t n = pv.size();
    const Vec2 w = traced.direction.vec();

    // Fan triangles from vertex 0, skipping degenerate/reflex ones.
    struct Tri {
        Vec2 a, b, c;
    };
    std::vector<Tri> tris;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if ((pv[i] - pv[0]).cross(pv[i + 1] - pv[0]) > 0.0)
            tris.push_back({pv[0], pv[i], pv[i + 1]});
    }

    std::vector<Interval> raw;
    for (const auto& seg : traced.segments) {
        const double len = seg.tau_end - seg.tau_begin;
        if (!(len > 0.0)) continue;
        for (const auto& tri : tris) {
            // Clip the segment parametrically against the triangle's three
            // half-planes: each constraint is affine in t in [0, len].
            double lo = 0.0, hi = len;
            const Vec2 edges[3][2] = {{tri.a, tri.b}, {tri.b, tri.c}, {tri.c, tri.a}};
            for (const auto& e : edges) {
                const Vec2 d = e[1] - e[0];
                const double m = d.cross(w);
                const double c = d.cross(seg.begin_point - e[0]);
                if (m == 0.0) {
                    if (c < 0.0) { lo = 1.0; hi = 0.0; break; }
                } else {
                    const double t = -c / m;
                    if (m > 0.0) lo = std::max(lo, t);
                    else hi = std::min(hi, t);
                }
                if (lo >= hi) break;
            }
            if (lo < hi)
                raw.push_back({seg.tau_begin + lo, seg.tau_begin + hi});
        }
    }
    if (raw.empty()) return {};
    return IntervalSet::normalize(std::move(raw), 1e-12 * traced.horizon);
}

void write_crossings_csv(std::ostream& os, const TracedGeodesic& traced) {
    os << "tau,exit_edge,exit_x,exit_y,entry_x,entry_y\n";
    char buf[160];
    for (const auto& ev : traced.crossings) {
        std::snprintf(buf, sizeof buf, "%.9g,%d,%.9g,%.9g,%.9g,%.9g\n", ev.tau, ev.exit_edge,
                      ev.exit_point.x, ev.exit_point.y, ev.entry_point.x, ev.entry_point.y);
        os << buf;
    }
}

} // namespace octaflow
