// Copyright 2026 The bchaos Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <cmath>
#include <limits>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bchaos/circuit.hpp"
#include "bchaos/ensembles.hpp"
#include "bchaos/errors.hpp"
#include "bchaos/linalg.hpp"
#include "bchaos/run.hpp"
#include "bchaos/semiclassics.hpp"
#include "bchaos/spectral_stats.hpp"

namespace py = pybind11;
using namespace bchaos;

namespace {

EnsembleSpec ensemble_from(int q, const std::string &name, double coupling,
                           const std::string &phase_dist) {
    run::EnsembleParams p;
    p.q = q;
    p.ensemble = name;
    p.coupling = coupling;
    p.phase_dist = phase_dist;
    return run::make_ensemble(p);
}

std::vector<double> phases_of(const EigenphaseSpectrum &s) {
    return {s.phases().begin(), s.phases().end()};
}

} // namespace

PYBIND11_MODULE(_bchaos, m) {
    m.doc() = "Spectral form factor and level statistics of the boundary-chaos circuit.";
    m.attr("__version__") = BCHAOS_VERSION;

    py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
    py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);

    // linear algebra
    m.def("unitarity_defect", &unitarity_defect, py::arg("matrix"));
    m.def("partial_transpose", &partial_transpose, py::arg("gate"), py::arg("q"));
    m.def(
        "eigenphases",
        [](const Matrix &u, std::size_t cap) { return phases_of(eigenphases(u, cap)); },
        py::arg("matrix"), py::arg("dense_cap") = kDefaultDenseCap,
        "Sorted eigenvalue arguments in [-pi, pi).");
    m.def(
        "trace_power",
        [](std::vector<double> phases, long t) {
            return trace_power(EigenphaseSpectrum::from_phases(std::move(phases)), t);
        },
        py::arg("phases"), py::arg("t"));

    // ensembles
    m.def("chi", [](double coupling, const std::string &dist) {
        return chi(parse_phase_distribution(dist), coupling);
    }, py::arg("J"), py::arg("phase_dist") = "uniform:-1:1");
    m.def(
        "sample_haar_unitary",
        [](int dim, std::uint64_t seed, std::uint64_t index, std::uint64_t slot) {
            return sample_haar_unitary(dim, {seed, index}, slot);
        },
        py::arg("dim"), py::arg("seed") = 0, py::arg("index") = 0, py::arg("slot") = 0);
    m.def(
        "sample_impurity",
        [](int q, const std::string &ensemble, double coupling, const std::string &dist,
           std::uint64_t seed, std::uint64_t index) {
            return sample_impurity(ensemble_from(q, ensemble, coupling, dist), {seed, index});
        },
        py::arg("q"), py::arg("ensemble") = "haar", py::arg("J") = 3.1,
        py::arg("phase_dist") = "uniform:-1:1", py::arg("seed") = 0, py::arg("index") = 0);

    // circuit
    m.def(
        "build_step_operator",
        [](int q, int L, const Matrix &gate, std::size_t cap) {
            return build_step_operator(CircuitSpec(q, L), gate, cap);
        },
        py::arg("q"), py::arg("L"), py::arg("gate"), py::arg("dense_cap") = kDefaultDenseCap);
    m.def(
        "apply_step",
        [](int q, int L, const Matrix &gate, const Vector &state) {
            return apply_step(CircuitSpec(q, L), gate, state);
        },
        py::arg("q"), py::arg("L"), py::arg("gate"), py::arg("state"));
    m.def(
        "circuit_trace_powers",
        [](int q, int L, const Matrix &gate, long t_max) {
            return circuit_trace_powers(CircuitSpec(q, L), gate, t_max);
        },
        py::arg("q"), py::arg("L"), py::arg("gate"), py::arg("t_max"));
    m.def("two_body_trace_oracle", &two_body_trace_oracle, py::arg("gate"), py::arg("q"),
          py::arg("L"), py::arg("t"), py::arg("budget") = kDefaultOracleBudget);

    // spectral statistics
    m.def(
        "estimate_sff",
        [](int q, int L, std::vector<long> times, std::vector<int> moments,
           std::size_t realizations, std::uint64_t seed, const std::string &ensemble,
           double coupling, const std::string &dist, unsigned workers) {
            const CircuitSpec spec(q, L, ensemble_from(q, ensemble, coupling, dist));
            SffConfig cfg;
            cfg.times = std::move(times);
            cfg.moments = std::move(moments);
            cfg.realizations = realizations;
            cfg.master_seed = seed;
            cfg.workers = workers;
            SffSeries series;
            {
                py::gil_scoped_release release;
                series = estimate_sff(spec, cfg);
            }
            const double nan = std::numeric_limits<double>::quiet_NaN();
            py::dict out;
            std::vector<long> t;
            std::vector<int> mm;
            std::vector<double> K, se, kappa, tau, dk;
            for (const auto &c : series.cells) {
                t.push_back(c.t);
                mm.push_back(c.m);
                K.push_back(c.K);
                se.push_back(c.stderr_K.value_or(nan));
                kappa.push_back(c.kappa);
                tau.push_back(c.tau);
                dk.push_back(c.delta_kappa);
            }
            out["t"] = py::array(py::cast(t));
            out["m"] = py::array(py::cast(mm));
            out["K"] = py::array(py::cast(K));
            out["stderr"] = py::array(py::cast(se));
            out["kappa"] = py::array(py::cast(kappa));
            out["tau"] = py::array(py::cast(tau));
            out["delta_kappa"] = py::array(py::cast(dk));
            out["N"] = series.dim;
            return out;
        },
        py::arg("q"), py::arg("L"), py::arg("times"), py::arg("moments") = std::vector<int>{1},
        py::arg("realizations") = 100, py::arg("seed") = 0, py::arg("ensemble") = "haar",
        py::arg("J") = 3.1, py::arg("phase_dist") = "uniform:-1:1", py::arg("workers") = 0);
    m.def(
        "level_spacings",
        [](std::vector<double> phases) {
            return level_spacings(EigenphaseSpectrum::from_phases(std::move(phases)));
        },
        py::arg("phases"));
    m.def("cue_sff", &cue_sff, py::arg("t"), py::arg("N"));
    m.def("cue_moment", &cue_moment, py::arg("m"), py::arg("t"), py::arg("N"));
    m.def("poisson_spacing", &poisson_spacing, py::arg("s"));
    m.def("wigner_cue_spacing", &wigner_cue_spacing, py::arg("s"));
    m.def("coe_sff", &coe_sff, py::arg("t"), py::arg("heisenberg_time"), py::arg("scale") = 1.0);
    m.def(
        "power_law_fit",
        [](std::vector<double> xs, std::vector<double> ys) {
            const auto fit = power_law_fit(xs, ys);
            return py::make_tuple(fit.amplitude, fit.exponent);
        },
        py::arg("xs"), py::arg("ys"), "Returns (amplitude, exponent) of y = A x^(-exponent).");

    // semiclassics
    m.def("resonance", [](long t, long L) {
        const auto r = resonance(t, L);
        return py::make_tuple(r.n, r.p);
    }, py::arg("t"), py::arg("L"));
    m.def("subfactorial", &subfactorial, py::arg("y"));
    m.def("a_poly", &a_poly, py::arg("mn"), py::arg("k"), py::arg("x"));
    m.def(
        "count_fixed_point_classes",
        [](int r, int p) { return count_fixed_point_classes({r, p}); }, py::arg("replicas"),
        py::arg("period"));
    m.def("toy_sff", &toy_sff, py::arg("t"), py::arg("L"));
    m.def("haar_semiclassical_moment", &haar_semiclassical_moment, py::arg("m"), py::arg("t"));
    m.def("tdual_semiclassical_moment", &tdual_semiclassical_moment, py::arg("m"), py::arg("t"),
          py::arg("L"), py::arg("abs_chi"));
    m.def("permutation_oracle_moment", &permutation_oracle_moment, py::arg("m"), py::arg("t"),
          py::arg("L"), py::arg("abs_chi"), py::arg("budget") = kDefaultPairBudget);
    m.def("thouless_bound", &thouless_bound, py::arg("t"), py::arg("L"), py::arg("abs_chi"));
    m.def("thouless_estimate", &thouless_estimate, py::arg("L"), py::arg("abs_chi"));
}
