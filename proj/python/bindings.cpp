// pybind11 bindings for the octaflow core: geometry, tracing, prism
// sampling, transference counting, the Fourier engine, and the unfolding
// equivalence checks.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "octaflow/fourier.hpp"
#include "octaflow/geodesic.hpp"
#include "octaflow/prism.hpp"
#include "octaflow/transference.hpp"
#include "octaflow/unfolding.hpp"

namespace py = pybind11;
using namespace octaflow;

namespace {

TestPolygon polygon_from_vertices(const std::vector<std::pair<std::string, std::string>>& verts,
                                  const OctagonGeometry& geom) {
    std::vector<std::array<Rational, 2>> rv;
    rv.reserve(verts.size());
    for (const auto& [x, y] : verts) rv.push_back({Rational::parse(x), Rational::parse(y)});
    return TestPolygon(std::move(rv), geom);
}

IntervalSet set_from_pairs(const std::vector<std::pair<double, double>>& raw) {
    std::vector<Interval> ivs;
    ivs.reserve(raw.size());
    for (const auto& [u, v] : raw) ivs.push_back({u, v});
    if (ivs.empty()) return {};
    return IntervalSet::normalize(std::move(ivs));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "geodesic flow on the regular octagon surface and its product 3-manifold";

    py::register_exception<InvalidParameterError>(m, "InvalidParameterError", PyExc_ValueError);
    py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);
    py::register_exception<DegenerateInputError>(m, "DegenerateInputError", PyExc_ValueError);
    py::register_exception<SingularityError>(m, "SingularityError", PyExc_ArithmeticError);
    py::register_exception<PathologicalTrajectoryError>(m, "PathologicalTrajectoryError",
                                                        PyExc_ArithmeticError);
    py::register_exception<GeometryError>(m, "GeometryError", PyExc_ArithmeticError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    py::class_<Vec2>(m, "Vec2")
        .def(py::init<double, double>())
        .def_readonly("x", &Vec2::x)
        .def_readonly("y", &Vec2::y)
        .def("__repr__", [](const Vec2& v) {
            return "Vec2(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ")";
        });

    py::enum_<Region>(m, "Region")
        .value("interior", Region::Interior)
        .value("boundary", Region::Boundary)
        .value("vertex", Region::Vertex)
        .value("exterior", Region::Exterior);

    py::class_<PointClass>(m, "PointClass")
        .def_readonly("region", &PointClass::region)
        .def_readonly("index", &PointClass::index);

    py::class_<OctagonGeometry>(m, "OctagonGeometry")
        .def_readonly("side", &OctagonGeometry::side)
        .def_readonly("apothem", &OctagonGeometry::apothem)
        .def_readonly("circumradius", &OctagonGeometry::circumradius)
        .def_readonly("area", &OctagonGeometry::area)
        .def_readonly("eps_geom", &OctagonGeometry::eps_geom)
        .def("vertex", &OctagonGeometry::vertex)
        .def("edge_translation", &OctagonGeometry::edge_translation);

    m.def("build_octagon", &build_octagon, py::arg("side") = 1.0);
    m.def("classify", &classify);
    m.def("wrap", &wrap);

    py::class_<TestPolygon>(m, "TestPolygon")
        .def(py::init(&polygon_from_vertices), py::arg("vertices"), py::arg("geometry"),
             "vertices: list of (x, y) coordinate strings ('num/den' or decimal)")
        .def_static("from_json", &TestPolygon::from_json)
        .def("area", [](const TestPolygon& p) { return p.area().to_double(); })
        .def("area_str", [](const TestPolygon& p) { return p.area().str(); })
        .def("contains", &TestPolygon::contains);
    m.def("polygon_area", [](const TestPolygon& p) { return polygon_area(p).to_double(); });

    py::class_<Direction2>(m, "Direction2")
        .def(py::init<double, double>())
        .def_static("from_angle", &Direction2::from_angle)
        .def_readonly("w1", &Direction2::w1)
        .def_readonly("w2", &Direction2::w2);

    py::class_<CrossingEvent>(m, "CrossingEvent")
        .def_readonly("tau", &CrossingEvent::tau)
        .def_readonly("exit_edge", &CrossingEvent::exit_edge)
        .def_readonly("exit_point", &CrossingEvent::exit_point)
        .def_readonly("entry_point", &CrossingEvent::entry_point);

    py::class_<TracedGeodesic>(m, "TracedGeodesic")
        .def_readonly("start", &TracedGeodesic::start)
        .def_readonly("horizon", &TracedGeodesic::horizon)
        .def_property_readonly("crossings",
                               [](const TracedGeodesic& t) { return t.crossings; })
        .def_property_readonly("segment_count",
                               [](const TracedGeodesic& t) { return t.segments.size(); })
        .def("position_at", &TracedGeodesic::position_at);

    m.def("trace", &trace, py::arg("geometry"), py::arg("start"), py::arg("direction"),
          py::arg("horizon"));
    m.def("advance_to_boundary", &advance_to_boundary);
    m.def("visit_set", &visit_set);

    py::class_<IntervalSet>(m, "IntervalSet")
        .def(py::init(&set_from_pairs), py::arg("intervals"))
        .def_static("full", &IntervalSet::full)
        .def_property_readonly("intervals",
                               [](const IntervalSet& s) {
                                   std::vector<std::pair<double, double>> out;
                                   for (const auto& iv : s.intervals())
                                       out.emplace_back(iv.u, iv.v);
                                   return out;
                               })
        .def_property_readonly("total_measure", &IntervalSet::total_measure)
        .def("restrict", &IntervalSet::restrict)
        .def("measure_upto", &IntervalSet::measure_upto);
    m.def("density", &density);

    py::class_<PrismConfig>(m, "PrismConfig")
        .def(py::init<OctagonGeometry, double>(), py::arg("octagon"), py::arg("z0"))
        .def_readonly("z0", &PrismConfig::z0)
        .def_readonly("octagon", &PrismConfig::octagon);

    py::class_<GeodesicSpec3D>(m, "GeodesicSpec3D")
        .def(py::init([](double s1, double s2, double s3, double v1, double v2, double v3) {
                 return GeodesicSpec3D{s1, s2, s3, v1, v2, v3};
             }),
             py::arg("s1"), py::arg("s2"), py::arg("s3"), py::arg("v1"), py::arg("v2"),
             py::arg("v3"))
        .def("validate", &GeodesicSpec3D::validate)
        .def_readonly("s1", &GeodesicSpec3D::s1)
        .def_readonly("s2", &GeodesicSpec3D::s2)
        .def_readonly("s3", &GeodesicSpec3D::s3)
        .def_readonly("v1", &GeodesicSpec3D::v1)
        .def_readonly("v2", &GeodesicSpec3D::v2)
        .def_readonly("v3", &GeodesicSpec3D::v3);

    py::class_<HittingSchedule>(m, "HittingSchedule")
        .def_readonly("theta", &HittingSchedule::theta)
        .def_readonly("lambda_", &HittingSchedule::lambda)
        .def_readonly("lambda_raw", &HittingSchedule::lambda_raw)
        .def_readonly("level", &HittingSchedule::level)
        .def_readonly("reduction_count", &HittingSchedule::reduction_count);

    m.def("schedule", &schedule);
    m.def("hit_time_t", &hit_time_t);
    m.def("project", [](const GeodesicSpec3D& s) {
        const auto p = project(s);
        return std::make_pair(p.start, p.direction);
    });
    m.def("sample_at_hits", &sample_at_hits);
    m.def("ap_discrepancy", &ap_discrepancy);

    py::class_<CountResult>(m, "CountResult")
        .def_readonly("count", &CountResult::count)
        .def_readonly("expected", &CountResult::expected)
        .def_readonly("error", &CountResult::error)
        .def_readonly("normalized_error", &CountResult::normalized_error);

    py::class_<DensityCheck>(m, "DensityCheck")
        .def_readonly("ok", &DensityCheck::ok)
        .def_readonly("slack", &DensityCheck::slack)
        .def_readonly("lhs", &DensityCheck::lhs)
        .def_readonly("bound", &DensityCheck::bound);

    py::class_<HSchedule>(m, "HSchedule")
        .def_readonly("h", &HSchedule::h)
        .def_readonly("N", &HSchedule::N)
        .def_readonly("M", &HSchedule::M);

    m.def("ap_count", &ap_count);
    m.def("transfer_error", &transfer_error);
    m.def("density_check", &density_check);
    m.def("schedule_NM", &schedule_NM);
    m.def("exceptional_fraction", &exceptional_fraction, py::arg("set"), py::arg("level"),
          py::arg("n"), py::arg("C"), py::arg("samples"), py::arg("seed"),
          py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());

    py::class_<QuadratureConfig>(m, "QuadratureConfig")
        .def(py::init<>())
        .def_readwrite("subdivisions_per_piece", &QuadratureConfig::subdivisions_per_piece)
        .def_readwrite("abs_tol", &QuadratureConfig::abs_tol)
        .def_readwrite("max_depth", &QuadratureConfig::max_depth);

    py::class_<FourierSeries>(m, "FourierSeries")
        .def_readonly("J_max", &FourierSeries::J_max)
        .def_readonly("a0", &FourierSeries::a0)
        .def_readonly("tail_bound", &FourierSeries::tail_bound)
        .def("coeff", &FourierSeries::coeff)
        .def("partial_power", &FourierSeries::partial_power)
        .def("evaluate", &FourierSeries::evaluate);

    py::class_<JstarResult>(m, "JstarResult")
        .def_readonly("value", &JstarResult::value)
        .def_readonly("diagonal", &JstarResult::diagonal)
        .def_readonly("off_diagonal", &JstarResult::off_diagonal)
        .def_readonly("bound", &JstarResult::bound)
        .def_readonly("tail_budget", &JstarResult::tail_budget)
        .def_readonly("quad_budget", &JstarResult::quad_budget)
        .def_readonly("margin", &JstarResult::margin)
        .def_readonly("within_bound", &JstarResult::within_bound);

    py::class_<ShiftCheck>(m, "ShiftCheck")
        .def_readonly("value", &ShiftCheck::value)
        .def_readonly("bound", &ShiftCheck::bound)
        .def_readonly("ok", &ShiftCheck::ok);

    m.def("contract", &contract);
    m.def("fourier_coeffs", &fourier_coeffs);
    m.def("K_of_alpha", &K_of_alpha);
    m.def("roof_weight", &roof_weight);
    m.def("dirichlet_ratio_sq", &dirichlet_ratio_sq);
    m.def("E_integral",
          [](std::int64_t j, std::int64_t N, int level, const QuadratureConfig& quad) {
              double err = 0.0;
              const double e = E_integral(j, N, level, quad, &err);
              return std::make_pair(e, err);
          },
          py::arg("j"), py::arg("N"), py::arg("level"),
          py::arg("quad") = QuadratureConfig{});
    m.def("B_integral",
          [](std::int64_t j1, std::int64_t j2, std::int64_t N, int level,
             const FourierSeries& series, const QuadratureConfig& quad) {
              double err = 0.0;
              const auto b = B_integral(j1, j2, N, level, series, quad, &err);
              return std::make_pair(b, err);
          },
          py::arg("j1"), py::arg("j2"), py::arg("N"), py::arg("level"), py::arg("series"),
          py::arg("quad") = QuadratureConfig{});
    m.def("Jstar", &Jstar, py::arg("series"), py::arg("N"), py::arg("M"), py::arg("level"),
          py::arg("quad") = QuadratureConfig{}, py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("weight_sum_bound", &weight_sum_bound);
    m.def("shift_difference_check", &shift_difference_check);

    py::class_<TriangleBilliard>(m, "TriangleBilliard")
        .def(py::init<>())
        .def("inside", &TriangleBilliard::inside, py::arg("p"), py::arg("tol") = 0.0)
        .def_property_readonly("vertices", [](const TriangleBilliard& t) {
            return std::vector<Vec2>(t.vertices().begin(), t.vertices().end());
        });

    py::class_<Bounce>(m, "Bounce")
        .def_readonly("t", &Bounce::t)
        .def_readonly("edge", &Bounce::edge)
        .def_readonly("point", &Bounce::point)
        .def_readonly("direction", &Bounce::direction);

    py::class_<FoldingAtlas>(m, "FoldingAtlas")
        .def(py::init<>())
        .def_property_readonly("octagon", &FoldingAtlas::octagon)
        .def_property_readonly("copy_count", &FoldingAtlas::copy_count)
        .def("fold_point",
             [](const FoldingAtlas& a, Vec2 p) {
                 const auto f = a.fold_point(p);
                 return std::make_pair(f.point, f.copy);
             })
        .def("to_octagon", &FoldingAtlas::to_octagon);

    m.def("billiard_trace", &billiard_trace);
    m.def("unfold_equivalence_check", &unfold_equivalence_check);
    m.def("tent_map_check", &tent_map_check);
    m.def("prism_equivalence_check", &prism_equivalence_check);
}
