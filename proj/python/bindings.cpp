// Python module _sardkit: the main operations of the C++ core. Indices of
// coordinates and chart centers are 0-based, as in C++.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sardkit/blowup.hpp"
#include "sardkit/examples.hpp"
#include "sardkit/io.hpp"
#include "sardkit/selftest.hpp"

namespace py = pybind11;
using namespace sardkit;

namespace {

py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::dict trace_dict(const OrbitTrace& tr) {
    py::list t, p, speed, hres, len, dv;
    for (const auto& s : tr.samples) {
        t.append(s.t);
        p.append(py::make_tuple(s.p[0], s.p[1], s.p[2]));
        speed.append(s.speed);
        hres.append(s.h_residual);
        len.append(s.cum_length);
        dv.append(s.cum_div);
    }
    py::dict d;
    d["t"] = t;
    d["points"] = p;
    d["speed"] = speed;
    d["h_residual"] = hres;
    d["cum_length"] = len;
    d["cum_div"] = dv;
    d["arc_length"] = tr.arc_length;
    d["div_integral"] = tr.div_integral;
    d["termination"] = to_string(tr.termination);
    return d;
}

Box make_box(const Point& lo, const Point& hi) { return Box{lo, hi}; }

}  // namespace

PYBIND11_MODULE(_sardkit, m) {
    m.doc() = "Martinet surfaces, characteristic flows and blow-up checks";

    static py::exception<Error> error(m, "Error");
    py::register_exception<InvariantError>(m, "InvariantError", error.ptr());
    py::register_exception<OffSurfaceError>(m, "OffSurfaceError", error.ptr());
    py::register_exception<GradientDegenerateError>(m, "GradientDegenerateError", error.ptr());
    py::register_exception<DegenerateChartError>(m, "DegenerateChartError", error.ptr());
    py::register_exception<NoSamplesError>(m, "NoSamplesError", error.ptr());
    py::register_exception<IntegrationError>(m, "IntegrationError", error.ptr());
    py::register_exception<ShootingError>(m, "ShootingError", error.ptr());
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::class_<Poly>(m, "Poly")
        .def(py::init([](const std::string& s) { return parse(s); }), py::arg("text"))
        .def(py::init<long>())
        .def("__str__", &Poly::to_string)
        .def("__repr__", [](const Poly& p) { return "Poly('" + p.to_string() + "')"; })
        .def("__eq__", [](const Poly& a, const Poly& b) { return a == b; })
        .def("__add__", [](const Poly& a, const Poly& b) { return a + b; })
        .def("__sub__", [](const Poly& a, const Poly& b) { return a - b; })
        .def("__mul__", [](const Poly& a, const Poly& b) { return a * b; })
        .def("__neg__", [](const Poly& a) { return -a; })
        .def("__pow__", [](const Poly& a, unsigned n) { return a.pow(n); })
        .def("__call__", [](const Poly& p, double x, double y, double z) { return p.eval({x, y, z}); })
        .def("is_zero", &Poly::is_zero)
        .def("is_constant", &Poly::is_constant)
        .def("total_degree", &Poly::total_degree);
    py::implicitly_convertible<long, Poly>();

    m.def("parse", [](const std::string& s) { return parse(s); }, py::arg("text"));
    m.def("diff", &diff, py::arg("p"), py::arg("var"));
    m.def("substitute", &substitute, py::arg("p"), py::arg("images"));
    m.def("divide_exact", &divide_exact, py::arg("p"), py::arg("q"), "Quotient, or None when q does not divide p.");
    m.def("gcd", [](const Poly& p, const Poly& q) { return sardkit::gcd(p, q); });
    m.def("squarefree_part", &squarefree_part);

    py::class_<VecField>(m, "VecField")
        .def(py::init([](const std::string& a, const std::string& b, const std::string& c) {
                 return VecField::parse({a, b, c});
             }),
             py::arg("c1"), py::arg("c2"), py::arg("c3"))
        .def(py::init<Poly, Poly, Poly>())
        .def("__getitem__", [](const VecField& v, std::size_t i) { return v.c.at(i); })
        .def("__str__", &VecField::to_string)
        .def("__eq__", [](const VecField& a, const VecField& b) { return a == b; })
        .def("__add__", [](const VecField& a, const VecField& b) { return a + b; })
        .def("__sub__", [](const VecField& a, const VecField& b) { return a - b; })
        .def("__neg__", [](const VecField& a) { return -a; })
        .def("__rmul__", [](const VecField& v, const Poly& f) { return f * v; })
        .def("__call__", [](const VecField& v, double x, double y, double z) { return eval(v, {x, y, z}); })
        .def("components", [](const VecField& v) { return v.to_strings(); })
        .def("is_zero", &VecField::is_zero)
        .def("pole_order", &VecField::pole_order);

    m.def("lie_derivative", &lie_derivative, py::arg("v"), py::arg("f"));
    m.def("lie_bracket", &lie_bracket, py::arg("v"), py::arg("w"));
    m.def("divergence", &divergence_euclidean, py::arg("v"));

    py::class_<Distribution>(m, "Distribution")
        .def(py::init([](const VecField& x, const VecField& y, const std::string& name) {
                 return Distribution{x, y, name};
             }),
             py::arg("X"), py::arg("Y"), py::arg("name") = "")
        .def_readonly("X", &Distribution::X)
        .def_readonly("Y", &Distribution::Y)
        .def_readonly("name", &Distribution::name);

    m.def("builtin", &builtin, py::arg("name"));
    m.def("builtin_names", &builtin_names);
    m.def("distribution_from_json", &distribution_from_json, py::arg("text"));

    py::class_<MartinetData>(m, "MartinetData")
        .def_readonly("h_raw", &MartinetData::h_raw)
        .def_readonly("h", &MartinetData::h)
        .def_readonly("Z", &MartinetData::Z)
        .def_property_readonly("sigma_empty", &MartinetData::sigma_empty);

    m.def("martinet_function", &martinet_function);
    m.def("reduced_martinet", &reduced_martinet);
    m.def("characteristic_field", &characteristic_field, py::arg("d"), py::arg("h"));
    m.def("analyze", &analyze, py::arg("d"));
    m.def(
        "classify_point", [](const MartinetData& md, const Point& p, double tol) { return to_string(classify_point(md, p, tol)); },
        py::arg("md"), py::arg("p"), py::arg("tol") = 1e-9);
    m.def("check_bracket_generating", &check_bracket_generating, py::arg("d"), py::arg("p"), py::arg("max_depth") = 3);
    m.def(
        "divergence_ratio_scan",
        [](const MartinetData& md, const Point& lo, const Point& hi, std::size_t n, std::uint64_t seed) {
            return to_py(to_json(divergence_ratio_scan(md, make_box(lo, hi), n, seed)));
        },
        py::arg("md"), py::arg("lo"), py::arg("hi"), py::arg("n") = 500, py::arg("seed") = 0);
    m.def(
        "surface_divergence", [](const MartinetData& md, const Point& p) { return surface_divergence(md, p); },
        py::arg("md"), py::arg("p"));

    m.def(
        "integrate_orbit",
        [](const MartinetData& md, const Point& p0, int direction, double max_time, long max_steps, double rel_tol,
           double abs_tol, double stop_speed) {
            IntegratorOpts o;
            o.max_time = max_time;
            o.max_steps = max_steps;
            o.rel_tol = rel_tol;
            o.abs_tol = abs_tol;
            o.stop_speed = stop_speed;
            return trace_dict(integrate_orbit(md, p0, o, direction));
        },
        py::arg("md"), py::arg("p0"), py::arg("direction") = 1, py::arg("max_time") = 1e7,
        py::arg("max_steps") = 500000, py::arg("rel_tol") = 1e-10, py::arg("abs_tol") = 1e-12,
        py::arg("stop_speed") = 1e-8);
    m.def(
        "liouville_check",
        [](const VecField& v, const std::vector<std::pair<double, double>>& s0, const std::vector<double>& t_grid) {
            std::vector<Point2> pts;
            for (const auto& [x, y] : s0) pts.push_back({x, y});
            return to_py(to_json(liouville_check(v, pts, t_grid)));
        },
        py::arg("v"), py::arg("s0"), py::arg("t_grid"));
    m.def(
        "reparametrize",
        [](const Poly& f, const VecField& z, const Point& p0, const std::vector<double>& t_out) {
            const ReparamReport r = reparametrize(f, z, p0, t_out);
            py::dict d;
            d["t"] = r.t;
            d["r"] = r.r;
            d["spot_error"] = r.spot_error;
            d["max_spot_error"] = r.max_spot_error;
            return d;
        },
        py::arg("f"), py::arg("Z"), py::arg("p0"), py::arg("t_out"));

    py::class_<ChartMap>(m, "ChartMap")
        .def_readonly("j", &ChartMap::j)
        .def_readonly("sign", &ChartMap::sign)
        .def_readonly("beta", &ChartMap::beta)
        .def_readonly("center", &ChartMap::center)
        .def_readonly("images", &ChartMap::images)
        .def("describe", &ChartMap::describe);
    m.def("chart_map", &chart_map, py::arg("center"), py::arg("j"), py::arg("sign") = 1);
    m.def("identity_chart", &identity_chart);
    m.def("total_transform", &total_transform, py::arg("f"), py::arg("chart"));
    m.def(
        "strict_transform",
        [](const Poly& f, const ChartMap& c) {
            const TransformResult r = strict_transform(f, c);
            py::dict d;
            d["total"] = r.total;
            d["alpha"] = r.alpha;
            d["strict"] = r.strict;
            d["weighted"] = r.weighted ? py::cast(*r.weighted) : py::none();
            return d;
        },
        py::arg("f"), py::arg("chart"));
    m.def("pullback_vecfield", &pullback_vecfield, py::arg("v"), py::arg("chart"));
    m.def(
        "volume_factor",
        [](const ChartMap& c) {
            const VolumeFactor v = volume_factor(c);
            return py::make_tuple(v.beta, v.jacobian_monomial);
        },
        py::arg("chart"));
    m.def(
        "transformed_characteristic",
        [](const Distribution& d, const Poly& h, const ChartMap& c) {
            const TransformedCharacteristic t = transformed_characteristic(d, h, c);
            py::dict r;
            r["Zstar"] = t.Zstar;
            r["Ztilde"] = t.Ztilde;
            r["Wtilde"] = t.Wtilde;
            r["h_tilde"] = t.h_tilde;
            r["alpha"] = t.alpha;
            r["beta"] = t.beta;
            r["weighted_pole_order"] = t.weighted_pole_order;
            return r;
        },
        py::arg("d"), py::arg("h"), py::arg("chart"));
    m.def(
        "verify_div_compat",
        [](const Distribution& d, const Poly& h, const ChartMap& c, std::size_t n, std::uint64_t seed) {
            return to_py(to_json(verify_div_compat(d, h, c, n, seed)));
        },
        py::arg("d"), py::arg("h"), py::arg("chart"), py::arg("n") = 200, py::arg("seed") = 0);

    m.def(
        "homoclinic_orbit",
        [](double xbar, const std::string& field) {
            ChainOpts o;
            o.field = chain_field_from_string(field);
            return to_py(to_json(homoclinic_orbit(xbar, o)));
        },
        py::arg("xbar"), py::arg("field") = "printed");
    m.def(
        "shoot_for_zminus",
        [](double z0, double tol) {
            const ShootResult s = shoot_for_zminus(z0, tol);
            py::dict d;
            d["xbar"] = s.xbar;
            d["z_minus"] = s.z_minus;
            d["iterations"] = s.iterations;
            d["monotone"] = s.monotone;
            return d;
        },
        py::arg("z0"), py::arg("tol") = 1e-10);
    m.def(
        "run_chain",
        [](double z0, int n_links, const std::string& field, double slack) {
            ChainOpts o;
            o.field = chain_field_from_string(field);
            o.slack = slack;
            return to_py(to_json(run_chain(z0, n_links, o)));
        },
        py::arg("z0"), py::arg("n_links"), py::arg("field") = "printed", py::arg("slack") = 0.05);

    m.def(
        "selftest",
        [](std::uint64_t seed, std::size_t cases, const std::string& corrupt) {
            py::list rows;
            for (const auto& r : run_selftest({seed, cases, corrupt})) {
                py::dict d;
                d["name"] = r.name;
                d["ok"] = r.ok;
                d["detail"] = r.detail;
                rows.append(d);
            }
            return rows;
        },
        py::arg("seed") = 0, py::arg("cases") = 100, py::arg("corrupt") = "");
}
