#ifndef OCTAFLOW_PRISM_HPP
#define OCTAFLOW_PRISM_HPP

#include <cstdint>
#include <vector>

#include "octaflow/geodesic.hpp"

namespace octaflow {

/// The product 3-manifold: octagon surface x circle [0, 2*z0] (a torus in z).
struct PrismConfig {
    OctagonGeometry octagon;
    double z0 = 1.0;

    PrismConfig(OctagonGeometry geom, double z0_) : octagon(std::move(geom)), z0(z0_) {
        if (!(z0 > 0.0)) throw InvalidParameterError("z0 must be positive");
    }
};

/// Start point and unit direction of a 3-manifold geodesic. v3 > 0 is
/// required (flows upward in z); a purely vertical direction is rejected
/// because its planar projection degenerates.
struct GeodesicSpec3D {
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    double v1 = 0.0, v2 = 0.0, v3 = 1.0;

    void validate(const PrismConfig& config) const;
    double planar_speed() const;  // sqrt(v1^2 + v2^2)
};

/// The arithmetic progression tau_k = k*theta + lambda of octagon-face
/// hitting times in the arc-length parametrization of the projected planar
/// geodesic:
///     theta  = 2*z0*sqrt(v1^2+v2^2)/v3
///     lambda = (2*z0-s3)*sqrt(v1^2+v2^2)/v3, reduced into [0, theta)
struct HittingSchedule {
    double theta = 0.0;
    double lambda = 0.0;      // reduced into [0, theta)
    double lambda_raw = 0.0;  // value before reduction
    int level = 0;            // 2^level <= theta < 2^(level+1)
    int reduction_count = 0;  // number of whole periods removed from lambda_raw
};

HittingSchedule schedule(const GeodesicSpec3D& spec, const PrismConfig& config);

/// Octagon-face hitting time in the t (3D arc-length) parametrization:
/// t_k = (2*k*z0 + (2*z0 - s3))/v3.
double hit_time_t(const GeodesicSpec3D& spec, const PrismConfig& config, std::int64_t k);

/// Planar projection (x,y,z) -> (x,y): start (s1,s2) and unit direction
/// (v1,v2)/sqrt(v1^2+v2^2).
struct ProjectedStart {
    Vec2 start;
    Direction2 direction;
};
ProjectedStart project(const GeodesicSpec3D& spec);

/// Points of the projected geodesic at the AP times tau_k = k*theta + lambda
/// with tau_k <= n, in order of k.
std::vector<Vec2> sample_at_hits(const TracedGeodesic& traced, const HittingSchedule& sched,
                                 double n);

/// |theta/n * #{samples in poly} - area(poly)/area(P)|.
double ap_discrepancy(const std::vector<Vec2>& samples, const TestPolygon& poly,
                      const HittingSchedule& sched, double n, const OctagonGeometry& geom);

} // namespace octaflow

#endif
