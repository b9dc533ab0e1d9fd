#ifndef OCTAFLOW_UNFOLDING_HPP
#define OCTAFLOW_UNFOLDING_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "octaflow/prism.hpp"

namespace octaflow {

/// The right triangle billiard with angle pi/8: right angle at the origin,
/// legs of length 1 (along +x) and tan(pi/8) (along +y).
class TriangleBilliard {
public:
    TriangleBilliard();

    const std::array<Vec2, 3>& vertices() const { return vertices_; }  // B, A, C (ccw)
    double eps_geom() const { return eps_geom_; }

    struct Edge {
        Vec2 p0, p1;
        Vec2 normal;   // outward unit normal
        double offset; // line is normal . x = offset
    };
    const std::array<Edge, 3>& edges() const { return edges_; }

    /// Affine reflection across edge e (an involution).
    Vec2 reflect_point(int e, Vec2 p) const;
    Vec2 reflect_direction(int e, Vec2 d) const;

    bool inside(Vec2 p, double tol = 0.0) const;

private:
    std::array<Vec2, 3> vertices_;
    std::array<Edge, 3> edges_;
    double eps_geom_ = 1e-9;
};

struct Bounce {
    double t = 0.0;    // arc-length time of the bounce
    int edge = -1;
    Vec2 point;
    Vec2 direction;    // direction after the bounce
};

/// Specular billiard flow: `bounce_count` reflections from an interior start.
/// Throws PathologicalTrajectoryError (with the bounce index) when a bounce
/// lands within eps_geom of a corner.
std::vector<Bounce> billiard_trace(const TriangleBilliard& tri, Vec2 start, Direction2 dir,
                                   int bounce_count);

/// Billiard position at arc length t, interpolating inside the segment list.
Vec2 billiard_position(const std::vector<Bounce>& bounces, Vec2 start, Direction2 dir, double t);

/// The 16 rigid motions tiling the regular octagon by copies of the pi/8
/// triangle. Copies share the apex (the pi/8 vertex) at the octagon center;
/// the octagon side length (2*tan(pi/8)) is derived from the generated
/// copies, not hard-coded.
class FoldingAtlas {
public:
    FoldingAtlas();

    const OctagonGeometry& octagon() const { return octagon_; }
    const TriangleBilliard& triangle() const { return triangle_; }
    int copy_count() const { return 16; }

    struct Motion {
        // Orthogonal linear part (copies share the apex at the origin):
        // columns (m00, m10), (m01, m11).
        double m00, m01, m10, m11;
        Vec2 apply(Vec2 p) const { return {m00 * p.x + m01 * p.y, m10 * p.x + m11 * p.y}; }
        Vec2 apply_inverse(Vec2 p) const {  // orthogonal: inverse = transpose
            return {m00 * p.x + m10 * p.y, m01 * p.x + m11 * p.y};
        }
    };

    /// Motion taking the user triangle (right angle at the origin) to copy i
    /// in the octagon chart: p -> M_i (p - apex_offset).
    Vec2 to_octagon(int copy, Vec2 triangle_point) const;
    Vec2 direction_to_octagon(int copy, Vec2 d) const;

    struct Folded {
        Vec2 point;  // user triangle coordinates
        int copy = -1;
    };

    /// Locate the copy containing p (lowest index wins on shared edges) and
    /// apply the inverse motion. Throws GeometryError for points outside all
    /// copies beyond tolerance.
    Folded fold_point(Vec2 p) const;
    Vec2 fold_direction(int copy, Vec2 d) const;

    const std::vector<Motion>& motions() const { return motions_; }
    const std::vector<std::array<Vec2, 3>>& copies() const { return copies_; }

private:
    TriangleBilliard triangle_;
    OctagonGeometry octagon_;
    std::vector<Motion> motions_;
    std::vector<std::array<Vec2, 3>> copies_;  // copy vertices in the octagon chart
};

/// Dual simulation: billiard in the triangle vs straight-line flow on the
/// octagon folded back through the atlas, compared at every bounce time.
/// Returns the maximum distance between corresponding bounce points.
double unfold_equivalence_check(const TriangleBilliard& tri, const FoldingAtlas& atlas,
                                const OctagonGeometry& geom, Vec2 start, Direction2 dir,
                                int bounce_count);

/// 1D variant (the 2-fold covering of the interval): explicit reflections in
/// [0, z0] against the tent-map folding of the line mod 2*z0, compared at
/// wall hits and mid-flight points. Returns the max |difference|.
double tent_map_check(double z0, double s3, double v3, int reflection_count);

/// Full 32-fold covering: 3D billiard in triangle x [0, z0] against the
/// folded manifold geodesic, compared at the first `bounce_count` wall events
/// (planar and z merged). Requires config.octagon to be the atlas octagon.
double prism_equivalence_check(const PrismConfig& config, const GeodesicSpec3D& spec,
                               int bounce_count);

} // namespace octaflow

#endif
