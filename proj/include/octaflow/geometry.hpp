#ifndef OCTAFLOW_GEOMETRY_HPP
#define OCTAFLOW_GEOMETRY_HPP

#include <array>
#include <string>
#include <vector>

#include "octaflow/rational.hpp"
#include "octaflow/vec2.hpp"

namespace octaflow {

/// The regular octagon translation surface: a regular octagon with opposite
/// (parallel) edges identified by translation.
///
/// Chart convention: octagon centered at the origin with two horizontal
/// edges. Vertex k sits at angle -3*pi/8 + k*pi/4 on the circumcircle, so
/// edge 7 -> 0 is the bottom horizontal edge and edge i faces edge i+4 mod 8.
/// All sqrt(2)-dependent constants are computed in long double once and
/// rounded to nearest double.
struct OctagonGeometry {
    double side = 1.0;
    double apothem = 0.0;        // distance center -> edge; width across flats = 2*apothem
    double circumradius = 0.0;
    double area = 0.0;           // 2*(1+sqrt 2)*side^2
    double eps_geom = 0.0;       // boundary/vertex classification tolerance, 1e-9*side

    std::array<Vec2, 8> vertices{};      // counterclockwise
    std::array<Vec2, 8> edge_normals{};  // outward unit normal of edge i (= vertices[i] -> vertices[i+1])

    /// Translation identifying edge i with edge i+4 (stored once per pair,
    /// negated on access): maps points of edge i onto edge i+4.
    Vec2 edge_translation(int edge) const {
        Vec2 t = half_translations_[edge & 3];
        return (edge & 4) ? -t : t;
    }

    Vec2 vertex(int i) const { return vertices[((i % 8) + 8) % 8]; }

    std::array<Vec2, 4> half_translations_{};  // for edges 0..3; edges 4..7 are the negatives
};

enum class Region { Interior, Boundary, Vertex, Exterior };

struct PointClass {
    Region region = Region::Exterior;
    int index = -1;  // edge index for Boundary, vertex index for Vertex
};

OctagonGeometry build_octagon(double side = 1.0);

/// Classify a point against the closed octagon within eps_geom.
PointClass classify(const OctagonGeometry& geom, Vec2 p);

inline bool contains(const OctagonGeometry& geom, Vec2 p) {
    Region r = classify(geom, p).region;
    return r != Region::Exterior;
}

/// Edge identification: p on edge e maps to p + edge_translation(e) on edge
/// e+4 mod 8, re-snapped onto the exact target edge line. Involution on the
/// boundary minus vertices.
/// Throws SingularityError if p is not on an edge or lies within eps_geom of
/// a vertex (the cone point).
Vec2 wrap(const OctagonGeometry& geom, Vec2 p);

/// Same, for a point already classified as boundary(edge).
Vec2 wrap_on_edge(const OctagonGeometry& geom, Vec2 p, int edge);

/// Polygon with exact rational vertex coordinates in the surface chart,
/// contained in the closed octagon. Orientation is normalized to
/// counterclockwise on construction; a clockwise vertex list is accepted and
/// reversed. Rejects self-intersecting or zero-area input.
class TestPolygon {
public:
    /// `geom` is required for the containment check.
    TestPolygon(std::vector<std::array<Rational, 2>> vertices, const OctagonGeometry& geom);

    const std::vector<std::array<Rational, 2>>& vertices() const { return vertices_; }
    const std::vector<Vec2>& vertices_double() const { return dvertices_; }
    const Rational& area() const { return area_; }

    /// Boundary-inclusive membership via the same fan triangulation used for
    /// geodesic clipping. Exact for polygons star-shaped from vertex 0.
    bool contains(Vec2 p) const;

    /// Parse {"vertices": [["num/den","num/den"], ...]}; decimal strings are
    /// accepted and converted exactly.
    static TestPolygon from_json(const std::string& json_text, const OctagonGeometry& geom);
    static TestPolygon from_json_file(const std::string& path, const OctagonGeometry& geom);

    /// Axis-aligned rational rectangle helper.
    static TestPolygon rectangle(const Rational& x0, const Rational& y0,
                                 const Rational& x1, const Rational& y1,
                                 const OctagonGeometry& geom);

private:
    std::vector<std::array<Rational, 2>> vertices_;
    std::vector<Vec2> dvertices_;
    Rational area_;
};

/// Exact shoelace area (always positive; orientation already normalized).
/// Throws DegenerateInputError for zero area.
Rational polygon_area(const TestPolygon& poly);

} // namespace octaflow

#endif
