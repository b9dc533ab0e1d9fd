#ifndef OCTAFLOW_GEODESIC_HPP
#define OCTAFLOW_GEODESIC_HPP

#include <vector>

#include "octaflow/geometry.hpp"
#include "octaflow/interval_set.hpp"

namespace octaflow {

/// Unit direction in the plane.
struct Direction2 {
    double w1 = 1.0;
    double w2 = 0.0;

    Direction2() = default;
    /// Normalizes; throws InvalidParameterError on the zero vector.
    Direction2(double x, double y);

    Vec2 vec() const { return {w1, w2}; }
    static Direction2 from_angle(double radians);
};

/// One edge crossing of the flow: the straight segment exits through
/// `exit_edge` at arc-length time `tau` and re-enters at the identified
/// opposite edge.
struct CrossingEvent {
    double tau = 0.0;
    int exit_edge = -1;
    Vec2 exit_point;
    Vec2 entry_point;  // wrap(exit_point)
};

/// A planar geodesic on the octagon surface traced up to `horizon`,
/// stored as maximal straight segments inside the fundamental domain.
///
/// Positions inside a segment are kept relative to the segment's entry point
/// (not accumulated from the global start), so floating error grows
/// additively with the crossing count.
struct TracedGeodesic {
    Vec2 start;
    Direction2 direction;
    double horizon = 0.0;

    struct Segment {
        double tau_begin = 0.0;
        double tau_end = 0.0;
        Vec2 begin_point;
        Vec2 end_point;
    };

    std::vector<Segment> segments;     // partition of [0, horizon]
    std::vector<CrossingEvent> crossings;

    Vec2 position_at(double tau) const;
};

/// Stateful single-step tracer; `trace` is built on it. Useful when a long
/// orbit is consumed crossing-by-crossing without storing the whole path.
class GeodesicStepper {
public:
    GeodesicStepper(const OctagonGeometry& geom, Vec2 start, Direction2 dir);

    /// Advance to the next boundary crossing and wrap. Throws
    /// PathologicalTrajectoryError when the exit lands within eps_geom of a
    /// vertex.
    CrossingEvent step();

    Vec2 current_point() const { return point_; }
    double current_tau() const { return tau_ + tau_comp_; }
    long crossings_done() const { return count_; }

private:
    const OctagonGeometry& geom_;
    Vec2 point_;    // entry point of the current segment (on an edge, or the start)
    double tau_ = 0.0;       // compensated arc-length accumulator (Neumaier):
    double tau_comp_ = 0.0;  // chord lengths are near-constant, so a plain sum drifts
    Vec2 dir_;
    long count_ = 0;
};

/// One step of the flow from an interior (or inward-pointing boundary)
/// point: smallest tau > 0 with point + tau*direction on the boundary,
/// entry point produced by wrap.
CrossingEvent advance_to_boundary(const OctagonGeometry& geom, Vec2 point, Direction2 dir);

/// Trace the geodesic from an interior start up to arc-length `horizon`.
TracedGeodesic trace(const OctagonGeometry& geom, Vec2 start, Direction2 dir, double horizon);

/// Time set {tau in [0, horizon] : geodesic(tau) in poly}: each segment is
/// clipped parametrically against the fan triangulation of the polygon from
/// vertex 0 and the resulting intervals are merged (gap tolerance
/// 1e-12*horizon). Exact for polygons star-shaped from vertex 0.
IntervalSet visit_set(const TracedGeodesic& traced, const TestPolygon& poly);

/// Crossings CSV: tau, exit_edge, exit_x, exit_y, entry_x, entry_y
/// (9 significant digits).
void write_crossings_csv(std::ostream& os, const TracedGeodesic& traced);

} // namespace octaflow

#endif
