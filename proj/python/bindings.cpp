#include <algorithm>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mirrorvac/continuum.hpp"
#include "mirrorvac/errors.hpp"
#include "mirrorvac/model.hpp"
#include "mirrorvac/oracle.hpp"
#include "mirrorvac/perturb.hpp"
#include "mirrorvac/single_cavity.hpp"
#include "mirrorvac/two_cavity.hpp"

namespace py = pybind11;
using namespace mirrorvac;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

py::dict profile_dict(const ObservableProfile& p) {
    py::dict d;
    d["kind"] = to_string(p.kind);
    d["x"] = to_array(p.positions);
    d["distance"] = to_array(p.distances);
    d["values"] = to_array(p.values);
    d["mode_count"] = p.mode_count;
    return d;
}

CutoffSpec make_cutoff(const std::string& kind, double omega_m, const std::string& rule) {
    if (kind == "exp" || kind == "exponential") return CutoffSpec::exponential(omega_m);
    if (kind == "sharp") {
        return CutoffSpec::sharp(omega_m, rule == "sum" ? SharpRule::FrequencySum : SharpRule::PerMode);
    }
    throw UsageError("cutoff kind must be 'exp' or 'sharp'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Vacuum observables of cavities bounded by a quantum movable mirror";
    m.attr("__version__") = MIRRORVAC_VERSION;

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
    py::register_exception<UsageError>(m, "UsageError", base.ptr());
    py::register_exception<DegenerateInputError>(m, "DegenerateInputError", base.ptr());
    py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
    py::register_exception<SolverError>(m, "SolverError", base.ptr());

    py::class_<PhysicalParams>(m, "PhysicalParams")
        .def(py::init([](double mass, double omega0, double length, double hbar, double c) {
                 PhysicalParams p{mass, omega0, length, hbar, c};
                 p.validate();
                 return p;
             }),
             py::arg("mass") = 1.0, py::arg("omega0") = 1.0, py::arg("length") = 1.0, py::arg("hbar") = 1.0,
             py::arg("c") = 1.0)
        .def_static("from_lambda", &PhysicalParams::from_lambda, py::arg("coupling"), py::arg("omega0"),
                    py::arg("length"), py::arg("hbar") = 1.0, py::arg("c") = 1.0)
        .def_readwrite("mass", &PhysicalParams::mass)
        .def_readwrite("omega0", &PhysicalParams::omega0)
        .def_readwrite("length", &PhysicalParams::length)
        .def_readwrite("hbar", &PhysicalParams::hbar)
        .def_readwrite("c", &PhysicalParams::c)
        .def_property_readonly("coupling_lambda", &PhysicalParams::coupling_lambda)
        .def("__repr__", [](const PhysicalParams& p) {
            return "PhysicalParams(mass=" + std::to_string(p.mass) + ", omega0=" + std::to_string(p.omega0) +
                   ", length=" + std::to_string(p.length) + ")";
        });

    py::class_<CutoffSpec>(m, "CutoffSpec")
        .def(py::init(&make_cutoff), py::arg("kind") = "exp", py::arg("omega_m") = 50.0, py::arg("rule") = "per-mode")
        .def_property_readonly("kind", [](const CutoffSpec& c) { return to_string(c.kind); })
        .def_readonly("omega_m", &CutoffSpec::omega_m);

    m.def("coupling_matrix_element", &coupling_matrix_element, py::arg("params"), py::arg("k"), py::arg("j"));
    m.def("cutoff_weight",
          [](const CutoffSpec& s, const std::vector<double>& f) { return cutoff_weight(s, f); },
          py::arg("cutoff"), py::arg("freqs"));

    m.def("energy_shift", &energy_shift, py::arg("params"), py::arg("cutoff"), py::arg("mode_count") = py::none());
    m.def(
        "dressed_amplitudes",
        [](const PhysicalParams& p, const CutoffSpec& c, std::optional<int> n) {
            const auto a = dressed_amplitudes(p, c, n);
            py::list pairs;
            for (const auto& pa : a.pairs) {
                pairs.append(py::make_tuple(pa.k, pa.j, pa.coefficient, pa.state_amplitude, pa.pair_frequency));
            }
            py::dict d;
            d["pairs"] = pairs;
            d["lambda_sq"] = a.lambda_sq;
            d["mode_count"] = a.mode_count;
            return d;
        },
        py::arg("params"), py::arg("cutoff"), py::arg("mode_count") = py::none());
    m.def(
        "photon_spectrum",
        [](const PhysicalParams& p, const CutoffSpec& c, double width, std::optional<int> n) {
            const auto s = photon_spectrum(dressed_amplitudes(p, c, n), width);
            py::dict d;
            d["bin_edges"] = s.bin_edges;
            d["weights"] = s.weights;
            d["peak_frequency"] = s.peak_frequency;
            d["total_weight"] = s.total_weight;
            return d;
        },
        py::arg("params"), py::arg("cutoff"), py::arg("bin_width"), py::arg("mode_count") = py::none());

    m.def(
        "delta_energy_density",
        [](const PhysicalParams& p, const CutoffSpec& c, const std::vector<double>& grid, std::optional<int> n,
           bool complete) {
            ProfileOptions o;
            o.mode_count = n;
            o.terms = complete ? SecondOrderTerms::Complete : SecondOrderTerms::PairPopulationOnly;
            return profile_dict(delta_energy_density(p, c, grid, o));
        },
        py::arg("params"), py::arg("cutoff"), py::arg("grid"), py::arg("mode_count") = py::none(),
        py::arg("complete") = true);
    m.def(
        "em_field_fluctuations",
        [](const PhysicalParams& p, const CutoffSpec& c, const std::vector<double>& grid, const std::string& comp,
           std::optional<int> n) {
            ProfileOptions o;
            o.mode_count = n;
            if (comp != "E" && comp != "B") throw UsageError("component must be 'E' or 'B'");
            return profile_dict(
                em_field_fluctuations(p, c, grid, comp == "E" ? FieldComponent::E : FieldComponent::B, o));
        },
        py::arg("params"), py::arg("cutoff"), py::arg("grid"), py::arg("component"), py::arg("mode_count") = py::none());
    m.def(
        "delta_phi_squared",
        [](const PhysicalParams& p, const CutoffSpec& c, const std::vector<double>& grid, std::optional<int> n) {
            ProfileOptions o;
            o.mode_count = n;
            return profile_dict(delta_phi_squared(p, c, grid, o));
        },
        py::arg("params"), py::arg("cutoff"), py::arg("grid"), py::arg("mode_count") = py::none());

    m.def(
        "squared_field_correlation",
        [](const PhysicalParams& p, const CutoffSpec& c, const std::vector<double>& x1, const std::vector<double>& x2,
           std::optional<int> n) {
            CorrelationOptions o;
            o.mode_count = n;
            const auto g = squared_field_correlation_discrete(p, c, x1, x2, o);
            py::array_t<double> out({static_cast<py::ssize_t>(x1.size()), static_cast<py::ssize_t>(x2.size())});
            std::copy(g.values.begin(), g.values.end(), out.mutable_data());
            return out;
        },
        py::arg("params"), py::arg("cutoff"), py::arg("x1"), py::arg("x2"), py::arg("mode_count") = py::none());
    m.def("phi_phi_cross_correlation", &phi_phi_cross_correlation, py::arg("params"), py::arg("cutoff"),
          py::arg("x1"), py::arg("x2"));

    m.def(
        "continuum_correlation",
        [](const PhysicalParams& p, double omega_m, double xt1, double xt2, double rel_tol, const std::string& method) {
            ContinuumOptions o;
            o.rel_tol = rel_tol;
            if (method == "full") {
                o.method = ContinuumMethod::FullQuadrature;
            } else if (method != "partial") {
                throw UsageError("method must be 'partial' or 'full'");
            }
            const auto pt = continuum_correlation(p, omega_m, xt1, xt2, o);
            py::dict d;
            d["value"] = pt.value;
            d["separable_part"] = pt.separable_part;
            d["rel_tol"] = pt.rel_tol;
            d["evaluations"] = pt.evaluations;
            d["method"] = to_string(pt.method);
            return d;
        },
        py::arg("params"), py::arg("omega_m"), py::arg("xt1"), py::arg("xt2"), py::arg("rel_tol") = 1e-6,
        py::arg("method") = "partial");
    m.def("asymptotic_correlation", &asymptotic_correlation, py::arg("params"), py::arg("xt1"), py::arg("xt2"));

    m.def(
        "oracle_ground_state",
        [](const PhysicalParams& p, int modes, const std::string& cavities, int photons, int mirror) {
            TruncationSpec t;
            t.modes_per_cavity = modes;
            t.max_photons_per_mode = photons;
            t.max_mirror_quanta = mirror;
            if (cavities != "one" && cavities != "two") throw UsageError("cavities must be 'one' or 'two'");
            const auto st = ground_state(build_hamiltonian(p, t, cavities == "one" ? Cavities::One : Cavities::Two));
            py::dict d;
            d["ground_energy"] = st.result.ground_energy;
            d["energy_shift"] = st.result.energy_shift;
            d["residual_norm"] = st.result.residual_norm;
            d["dimension"] = st.hamiltonian->dimension();
            d["odd_parity_weight"] = odd_parity_weight(st);
            return d;
        },
        py::arg("params"), py::arg("modes") = 2, py::arg("cavities") = "one", py::arg("photons") = 6,
        py::arg("mirror") = 6);
}
