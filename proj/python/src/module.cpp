#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "billiards/commands.hpp"

namespace py = pybind11;
using namespace billiards;

namespace {

py::array_t<double> array(const std::vector<double>& v) {
    const std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(v.size())};
    const std::vector<py::ssize_t> strides{static_cast<py::ssize_t>(sizeof(double))};
    return py::array_t<double>(shape, strides, v.data());
}

py::dict spectrum_dict(const Spectrum& s) {
    py::dict d;
    d["shape"] = s.shape.describe();
    d["symmetry"] = s.symmetry_name();
    d["eigenvalues"] = array(s.eigenvalues);
    d["converged_count"] = s.converged_count;
    d["solver"] = s.meta.solver;
    d["removed"] = s.meta.removed;
    return d;
}

py::dict family_dict(const PeriodicOrbitFamily& f) {
    py::dict d;
    d["label"] = f.label();
    d["kind"] = to_string(f.kind);
    d["n"] = f.n;
    d["m"] = f.m;
    d["repetition"] = f.repetition;
    d["length"] = f.length;
    d["area"] = f.area;
    d["c"] = f.c;
    if (f.caustic) {
        d["caustic_lambda"] = f.caustic->lambda;
        d["caustic_semi_axes"] = py::make_tuple(f.caustic->semi_x, f.caustic->semi_y);
    }
    if (f.stability_trace) d["stability_trace"] = *f.stability_trace;
    return d;
}

std::vector<LevelSet> level_sets(const std::vector<std::vector<double>>& ensemble, double upper) {
    std::vector<LevelSet> out;
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
        LevelSet s{std::to_string(i), ensemble[i], upper};
        std::sort(s.levels.begin(), s.levels.end());
        if (!(upper > 0.0)) s.upper = s.levels.empty() ? 0.0 : s.levels.back();
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Quantum billiard spectra, periodic orbits, spectral statistics and length spectra";
    m.attr("__version__") = tool_version;

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericFailure>(m, "NumericFailure", PyExc_RuntimeError);

    py::class_<BilliardShape>(m, "BilliardShape")
        .def_static("ellipse", &BilliardShape::ellipse, py::arg("a"), py::arg("b"))
        .def_static("rectangle", &BilliardShape::rectangle, py::arg("a"), py::arg("b"))
        .def_property_readonly("a", &BilliardShape::a)
        .def_property_readonly("b", &BilliardShape::b)
        .def_property_readonly("sigma", &BilliardShape::sigma)
        .def_property_readonly("is_circle", &BilliardShape::is_circle)
        .def_property_readonly("perimeter", [](const BilliardShape& s) { return perimeter(s); })
        .def_property_readonly("area", [](const BilliardShape& s) { return area(s); })
        .def("__repr__", &BilliardShape::describe);

    m.def("ellipse_from_sigma", &ellipse_from_sigma, py::arg("sigma"));
    m.def("rectangle_from_sigma", &rectangle_from_sigma, py::arg("sigma"));
    m.def(
        "confocal_conic",
        [](const BilliardShape& s, double lambda) {
            const auto c = confocal_conic(s, lambda);
            return py::make_tuple(c.kind == ConicKind::ellipse ? "ellipse" : "hyperbola", c.semi_x, c.semi_y);
        },
        py::arg("shape"), py::arg("lam"), "(kind, semi_x, semi_y) of the confocal conic with parameter lam");

    m.def(
        "eb_spectrum",
        [](double sigma, const std::string& cls, std::size_t count) {
            return spectrum_dict(eb_spectrum(sigma, SymmetryClass::parse(cls), count));
        },
        py::arg("sigma"), py::arg("symmetry") = "odd-odd", py::arg("count") = 100);
    m.def(
        "eb_spectrum_below",
        [](double sigma, const std::string& cls, double eps_max) {
            return spectrum_dict(eb_spectrum_below(sigma, SymmetryClass::parse(cls), eps_max));
        },
        py::arg("sigma"), py::arg("symmetry"), py::arg("eps_max"));
    m.def(
        "cb_spectrum_below",
        [](const std::string& cls, double eps_max) {
            return spectrum_dict(cb_spectrum_below(SymmetryClass::parse(cls), eps_max));
        },
        py::arg("symmetry"), py::arg("eps_max"));
    m.def(
        "rb_spectrum_below", [](double a, double b, double eps_max) { return spectrum_dict(rb_spectrum_below(a, b, eps_max)); },
        py::arg("a"), py::arg("b"), py::arg("eps_max"));

    m.def(
        "eb_catalog",
        [](double sigma, double l_max) {
            CatalogOptions o;
            o.l_max = l_max;
            py::list out;
            for (const auto& f : eb_catalog(ellipse_from_sigma(sigma), o).families) out.append(family_dict(f));
            return out;
        },
        py::arg("sigma"), py::arg("l_max") = 10.0);
    m.def(
        "axis_orbits",
        [](double sigma) {
            py::list out;
            for (const auto& f : axis_orbits(ellipse_from_sigma(sigma))) out.append(family_dict(f));
            return out;
        },
        py::arg("sigma"));

    m.def("poisson_levels", [](double density, double eps_max, std::uint64_t seed) {
        return array(poisson_levels(density, eps_max, seed));
    }, py::arg("density"), py::arg("eps_max"), py::arg("seed"));
    m.def(
        "number_variance",
        [](const std::vector<std::vector<double>>& ensemble, double eps, double width) {
            const auto e = number_variance(level_sets(ensemble, 0.0), eps, width);
            return py::make_tuple(e.value, e.error);
        },
        py::arg("ensemble"), py::arg("eps"), py::arg("width"), "(value, standard error) of the count variance");
    m.def(
        "rigidity",
        [](const std::vector<std::vector<double>>& ensemble, double eps, double width) {
            const auto e = rigidity(level_sets(ensemble, 0.0), eps, width);
            return py::make_tuple(e.value, e.error);
        },
        py::arg("ensemble"), py::arg("eps"), py::arg("width"));

    m.def(
        "length_spectrum",
        [](const std::vector<double>& momenta, double k_min, double k_max, double l_max) {
            LengthGrid g;
            g.l_max = l_max;
            const auto ls = length_spectrum(momenta, k_min, k_max, g);
            py::list peaks;
            for (const auto& p : detect_peaks(ls)) peaks.append(py::make_tuple(p.position, p.height, p.half_width));
            return py::make_tuple(array(ls.l), array(ls.magnitude()), peaks);
        },
        py::arg("momenta"), py::arg("k_min"), py::arg("k_max"), py::arg("l_max") = 12.0,
        "(lengths, |A(l)|, [(position, height, half_width)])");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = run_cli(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "(exit code, stdout, stderr) of the command-line tool");
}
