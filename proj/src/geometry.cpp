#include "octaflow/geometry.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace octaflow {

OctagonGeometry build_octagon(double side) {
    if (!(side > 0.0) || !std::isfinite(side))
        throw InvalidParameterError("octagon side must be positive and finite");

    OctagonGeometry g;
    g.side = side;

    const long double s = side;
    const long double pi = 3.14159265358979323846264338327950288L;
    const long double apothem = s * (1.0L + std::sqrt(2.0L)) / 2.0L;
    const long double circum = s / (2.0L * std::sin(pi / 8.0L));
    g.apothem = static_cast<double>(apothem);
    g.circumradius = static_cast<double>(circum);
    g.area = static_cast<double>(2.0L * (1.0L + std::sqrt(2.0L)) * s * s);
    g.eps_geom = 1e-9 * side;

    for (int k = 0; k < 8; ++k) {
        const long double phi = -3.0L * pi / 8.0L + k * pi / 4.0L;
        g.vertices[k] = {static_cast<double>(circum * std::cos(phi)),
                         static_cast<double>(circum * std::sin(phi))};
        // Outward normal of edge k (vertex k -> vertex k+1) points at (k-1)*pi/4.
        const long double psi = (k - 1) * pi / 4.0L;
        g.edge_normals[k] = {static_cast<double>(std::cos(psi)),
                             static_cast<double>(std::sin(psi))};
    }
    for (int k = 0; k < 4; ++k)
        g.half_translations_[k] = -2.0 * g.apothem * g.edge_normals[k];
    return g;
}

PointClass classify(const OctagonGeometry& geom, Vec2 p) {
    const double eps = geom.eps_geom;
    for (int k = 0; k < 8; ++k)
        if (distance(p, geom.vertices[k]) <= eps) return {Region::Vertex, k};

    double max_s = -1e300;
    int max_e = -1;
    for (int k = 0; k < 8; ++k) {
        const double sk = geom.edge_normals[k].dot(p) - geom.apothem;
        if (sk > max_s) { max_s = sk; max_e = k; }
    }
    if (max_s > eps) return {Region::Exterior, -1};
    if (max_s >= -eps) return {Region::Boundary, max_e};
    return {Region::Interior, -1};
}

Vec2 wrap_on_edge(const OctagonGeometry& geom, Vec2 p, int edge) {
    const int target = (edge + 4) % 8;
    Vec2 q = p + geom.edge_translation(edge);
    // Re-snap onto the target edge line to kill normal drift.
    const double off = geom.edge_normals[target].dot(q) - geom.apothem;
    return q - off * geom.edge_normals[target];
}

Vec2 wrap(const OctagonGeometry& geom, Vec2 p) {
    const PointClass c = classify(geom, p);
    if (c.region == Region::Vertex)
        throw SingularityError("wrap at a cone point (vertex " + std::to_string(c.index) + ")");
    if (c.region != Region::Boundary)
        throw SingularityError("wrap requires a boundary point");
    return wrap_on_edge(geom, p, c.index);
}

// ---------------------------------------------------------------------------
// TestPolygon

namespace {

Rational cross_r(const std::array<Rational, 2>& o, const std::array<Rational, 2>& a,
                 const std::array<Rational, 2>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

Rational shoelace_twice(const std::vector<std::array<Rational, 2>>& v) {
    Rational sum(0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        sum = sum + (a[0] * b[1] - b[0] * a[1]);
    }
    return sum;
}

// Exact segment intersection test for the simplicity check. Adjacent edges
// share an endpoint; proper crossings and collinear overlaps are rejected.
bool segments_cross(const std::array<Rational, 2>& p1, const std::array<Rational, 2>& p2,
                    const std::array<Rational, 2>& q1, const std::array<Rational, 2>& q2) {
    const Rational d1 = cross_r(q1, q2, p1);
    const Rational d2 = cross_r(q1, q2, p2);
    const Rational d3 = cross_r(p1, p2, q1);
    const Rational d4 = cross_r(p1, p2, q2);
    const Rational zero(0);
    auto opposite = [&](const Rational& a, const Rational& b) {
        return (a > zero && b < zero) || (a < zero && b > zero);
    };
    if (opposite(d1, d2) && opposite(d3, d4)) return true;
    auto on_segment = [&](const std::array<Rational, 2>& a, const std::array<Rational, 2>& b,
                          const std::array<Rational, 2>& c) {
        // c collinear with a-b; is it within the box?
        Rational lox = a[0] < b[0] ? a[0] : b[0], hix = a[0] < b[0] ? b[0] : a[0];
        Rational loy = a[1] < b[1] ? a[1] : b[1], hiy = a[1] < b[1] ? b[1] : a[1];
        return lox <= c[0] && c[0] <= hix && loy <= c[1] && c[1] <= hiy;
    };
    if (d1 == zero && on_segment(q1, q2, p1)) return true;
    if (d2 == zero && on_segment(q1, q2, p2)) return true;
    if (d3 == zero && on_segment(p1, p2, q1)) return true;
    if (d4 == zero && on_segment(p1, p2, q2)) return true;
    return false;
}

} // namespace

TestPolygon::TestPolygon(std::vector<std::array<Rational, 2>> vertices, const OctagonGeometry& geom)
    : vertices_(std::move(vertices)), area_(0) {
    if (vertices_.size() < 3)
        throw InvalidParameterError("polygon needs at least 3 vertices");

    Rational twice = shoelace_twice(vertices_);
    const Rational zero(0);
    if (twice == zero) throw DegenerateInputError("polygon with zero area");
    if (twice < zero) {
        std::reverse(vertices_.begin(), vertices_.end());
        twice = -twice;
    }
    area_ = twice / Rational(2);

    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // Skip edge pairs sharing a vertex.
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_cross(vertices_[i], vertices_[(i + 1) % n],
                               vertices_[j], vertices_[(j + 1) % n]))
                throw InvalidParameterError("polygon is self-intersecting");
        }
    }

    dvertices_.reserve(n);
    for (const auto& v : vertices_)
        dvertices_.push_back({v[0].to_double(), v[1].to_double()});

    // Containment in the closed octagon: the octagon is convex, so vertex
    // containment suffices.
    for (const auto& dv : dvertices_) {
        if (classify(geom, dv).region == Region::Exterior)
            throw InvalidParameterError("polygon vertex outside the octagon fundamental domain");
    }
}

bool TestPolygon::contains(Vec2 p) const {
    const std::size_t n = dvertices_.size();
    const Vec2 v0 = dvertices_[0];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const Vec2 a = dvertices_[i], b = dvertices_[i + 1];
        if ((a - v0).cross(b - v0) <= 0.0) continue;  // degenerate or reflex fan triangle
        if ((a - v0).cross(p - v0) >= 0.0 && (b - a).cross(p - a) >= 0.0 &&
            (v0 - b).cross(p - b) >= 0.0)
            return true;
    }
    return false;
}

TestPolygon TestPolygon::rectangle(const Rational& x0, const Rational& y0,
                                   const Rational& x1, const Rational& y1,
                                   const OctagonGeometry& geom) {
    return TestPolygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}, geom);
}

TestPolygon TestPolygon::from_json(const std::string& json_text, const OctagonGeometry& geom) {
    const auto j = nlohmann::json::parse(json_text);
    if (!j.contains("vertices") || !j["vertices"].is_array())
        throw InvalidParameterError("polygon JSON must contain a 'vertices' array");
    std::vector<std::array<Rational, 2>> verts;
    for (const auto& v : j["vertices"]) {
        if (!v.is_array() || v.size() != 2)
            throw InvalidParameterError("each polygon vertex must be a [x, y] pair");
        auto coord = [](const nlohmann::json& c) {
            if (c.is_string()) return Rational::parse(c.get<std::string>());
            if (c.is_number_integer()) return Rational(c.get<std::int64_t>());
            throw InvalidParameterError(
                "polygon coordinates must be integers or strings (\"num/den\" or decimal) "
                "so the conversion is exact");
        };
        verts.push_back({coord(v[0]), coord(v[1])});
    }
    return TestPolygon(std::move(verts), geom);
}

TestPolygon TestPolygon::from_json_file(const std::string& path, const OctagonGeometry& geom) {
    std::ifstream in(path);
    if (!in) throw InvalidParameterError("cannot open polygon file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str(), geom);
}

Rational polygon_area(const TestPolygon& poly) {
    return poly.area();
}

} // namespace octaflow
