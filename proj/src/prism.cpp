#include "octaflow/prism.hpp"

#include <cmath>

namespace octaflow {

void GeodesicSpec3D::validate(const PrismConfig& config) const {
    const double n2 = v1 * v1 + v2 * v2 + v3 * v3;
    if (std::fabs(n2 - 1.0) > 1e-12)
        throw InvalidParameterError("direction must be a unit vector");
    if (!(v3 > 0.0))
        throw InvalidParameterError("v3 must be positive");
    if (v1 == 0.0 && v2 == 0.0)
        throw InvalidParameterError("purely vertical direction has no planar projection");
    if (s3 < 0.0 || s3 >= 2.0 * config.z0)
        throw InvalidParameterError("s3 must lie in [0, 2*z0)");
    if (classify(config.octagon, {s1, s2}).region == Region::Exterior)
        throw InvalidParameterError("(s1, s2) must lie in the octagon");
}

double GeodesicSpec3D::planar_speed() const {
    return std::sqrt(v1 * v1 + v2 * v2);
}

HittingSchedule schedule(const GeodesicSpec3D& spec, const PrismConfig& config) {
    if (!(spec.v3 > 0.0)) throw InvalidParameterError("v3 must be positive");
    if (spec.v1 == 0.0 && spec.v2 == 0.0)
        throw InvalidParameterError("purely vertical direction has no planar schedule");

    const double sigma = spec.planar_speed();
    HittingSchedule s;
    s.theta = 2.0 * config.z0 * sigma / spec.v3;
    s.lambda_raw = (2.0 * config.z0 - spec.s3) * sigma / spec.v3;

    // Eq-level guarantee is lambda_raw in (0, theta] for s3 in (0, 2*z0];
    // reduce mod theta so downstream counting sees [0, theta).
    double lam = s.lambda_raw;
    int shifts = 0;
    while (lam >= s.theta) { lam -= s.theta; ++shifts; }
    while (lam < 0.0) { lam += s.theta; ++shifts; }
    s.lambda = lam;
    s.reduction_count = shifts;
    s.level = static_cast<int>(std::floor(std::log2(s.theta)));
    // Guard the dyadic bracket against log2 rounding at powers of two.
    while (std::ldexp(1.0, s.level) > s.theta) --s.level;
    while (std::ldexp(1.0, s.level + 1) <= s.theta) ++s.level;
    return s;
}

double hit_time_t(const GeodesicSpec3D& spec, const PrismConfig& config, std::int64_t k) {
    return (2.0 * static_cast<double>(k) * config.z0 + (2.0 * config.z0 - spec.s3)) / spec.v3;
}

ProjectedStart project(const GeodesicSpec3D& spec) {
    if (spec.v1 == 0.0 && spec.v2 == 0.0)
        throw InvalidParameterError("purely vertical direction has no planar projection");
    return {{spec.s1, spec.s2}, Direction2(spec.v1, spec.v2)};
}

std::vector<Vec2> sample_at_hits(const TracedGeodesic& traced, const HittingSchedule& sched,
                                 double n) {
    if (traced.horizon < n)
        throw RangeError("trace horizon shorter than the sampling window");
    std::vector<Vec2> pts;
    pts.reserve(static_cast<std::size_t>(std::max(0.0, n / sched.theta)) + 2);
    for (std::int64_t k = 0;; ++k) {
        const double tau = static_cast<double>(k) * sched.theta + sched.lambda;
        if (tau > n) break;
        pts.push_back(traced.position_at(tau));
    }
    return pts;
}

double ap_discrepancy(const std::vector<Vec2>& samples, const TestPolygon& poly,
                      const HittingSchedule& sched, double n, const OctagonGeometry& geom) {
    std::size_t inside = 0;
    for (const Vec2& p : samples)
        if (poly.contains(p)) ++inside;
    const double ratio = poly.area().to_double() / geom.area;
    return std::fabs(sched.theta / n * static_cast<double>(inside) - ratio);
}

} // namespace octaflow
