#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "symchain/bdjump.hpp"
#include "symchain/mc.hpp"
#include "symchain/passage.hpp"
#include "symchain/similarity.hpp"
#include "symchain/symmetry.hpp"
#include "symchain/transient.hpp"

namespace py = pybind11;
using namespace symchain;

namespace {

std::vector<double> grid_times(const TimeGrid& grid) {
    std::vector<double> out(static_cast<std::size_t>(grid.size()));
    for (int j = 0; j < grid.size(); ++j) out[static_cast<std::size_t>(j)] = grid.t(j);
    return out;
}

SymmetryCertificate certificate_from_weights(const StateSpace& space, const std::vector<double>& weights) {
    SymmetryCertificate cert{space, space.center_label(), weights};
    cert.require_valid();
    return cert;
}

// Builds the passage problem with a freshly detected certificate; the
// symmetric shortcuts need it, the Volterra path merely benefits.
PassageProblem make_problem(const GeneratorMatrix& q, bool need_certificate) {
    const SymmetryDetection det = detect_symmetry(q);
    if (need_certificate && !det.symmetric()) {
        throw ValidationError("NoCertificate", "chain has no central symmetry");
    }
    return build_passage_problem(q, det.symmetric() ? det.certificate : std::nullopt);
}

}  // namespace

PYBIND11_MODULE(_symchain, m) {
    m.doc() = "central-symmetry analysis of continuous-time Markov chains";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<StateSpace>(m, "StateSpace")
        .def_static("finite", &StateSpace::finite, py::arg("n_max"))
        .def_static("window", &StateSpace::lattice_window, py::arg("lo"), py::arg("hi"))
        .def_property_readonly("size", &StateSpace::size)
        .def_property_readonly("lo", [](const StateSpace& s) { return s.lo; })
        .def_property_readonly("hi", [](const StateSpace& s) { return s.hi; })
        .def("labels",
             [](const StateSpace& s) {
                 std::vector<int> out(static_cast<std::size_t>(s.size()));
                 for (int i = 0; i < s.size(); ++i) out[static_cast<std::size_t>(i)] = s.label_of(i);
                 return out;
             })
        .def("reflect", &StateSpace::reflect_label, py::arg("label"))
        .def("__repr__", [](const StateSpace& s) {
            return "StateSpace([" + std::to_string(s.lo) + ".." + std::to_string(s.hi) + "])";
        });

    py::class_<GeneratorMatrix>(m, "Generator")
        .def_property_readonly("space", [](const GeneratorMatrix& g) { return g.space; })
        .def_property_readonly("matrix", [](const GeneratorMatrix& g) { return g.rates; })
        .def("rate", &GeneratorMatrix::rate, py::arg("from_label"), py::arg("to_label"))
        .def("__repr__",
             [](const GeneratorMatrix& g) { return "Generator(" + std::to_string(g.size()) + " states)"; });

    m.def("validate_generator", &validate_generator, py::arg("entries"), py::arg("space"));
    m.def(
        "truncate_bdjump",
        [](double birth, double death, double jump, int lo, int hi) {
            return truncate_bdjump(BDJumpModel{birth, death, jump}, StateSpace::lattice_window(lo, hi));
        },
        py::arg("birth"), py::arg("death"), py::arg("jump"), py::arg("lo"), py::arg("hi"));

    py::class_<TimeGrid>(m, "TimeGrid")
        .def(py::init<double, int>(), py::arg("t_max"), py::arg("steps"))
        .def_readonly("t_max", &TimeGrid::t_max)
        .def_readonly("steps", &TimeGrid::steps)
        .def_property_readonly("times", &grid_times);

    py::class_<TransitionMatrixSequence>(m, "TransitionSequence")
        .def_property_readonly("times", [](const TransitionMatrixSequence& p) { return grid_times(p.grid); })
        .def("matrix", &TransitionMatrixSequence::at, py::arg("step"))
        .def("prob", &TransitionMatrixSequence::prob, py::arg("step"), py::arg("from_label"), py::arg("to_label"))
        .def("trace",
             [](const TransitionMatrixSequence& p, int from_label, int to_label) {
                 return p.trace(from_label, to_label).values;
             },
             py::arg("from_label"), py::arg("to_label"));

    m.def(
        "transition_matrices",
        [](const GeneratorMatrix& q, double t_max, int steps, double tol) {
            return transition_matrices(q, TimeGrid(t_max, steps), tol);
        },
        py::arg("generator"), py::arg("t_max"), py::arg("steps"), py::arg("tol") = 1e-10);

    m.def("stationary", [](const GeneratorMatrix& q) { return stationary(q).probs; }, py::arg("generator"));
    m.def("deviation_matrix",
          [](const GeneratorMatrix& q) { return deviation_matrix(q, stationary(q)); }, py::arg("generator"));
    m.def("reversed_chain", [](const GeneratorMatrix& q) { return reversed_chain(q, stationary(q)); },
          py::arg("generator"));
    m.def("is_irreducible", &is_irreducible, py::arg("generator"));

    py::class_<SymmetryDetection>(m, "SymmetryDetection")
        .def_property_readonly("symmetric", &SymmetryDetection::symmetric)
        .def_property_readonly("weights",
                               [](const SymmetryDetection& d) {
                                   return d.certificate ? d.certificate->weights : std::vector<double>{};
                               })
        .def_property_readonly("center",
                               [](const SymmetryDetection& d) { return d.certificate ? d.certificate->center : 0.0; })
        .def_property_readonly("status",
                               [](const SymmetryDetection& d) {
                                   switch (d.status) {
                                       case SymmetryDetection::Status::Symmetric: return "symmetric";
                                       case SymmetryDetection::Status::StructuralZeroMismatch:
                                           return "structural_zero_mismatch";
                                       default: return "inconsistent_ratios";
                                   }
                               })
        .def_readonly("witness_from", &SymmetryDetection::witness_from)
        .def_readonly("witness_to", &SymmetryDetection::witness_to)
        .def_readonly("witness_residual", &SymmetryDetection::witness_residual)
        .def_readonly("unconstrained", &SymmetryDetection::unconstrained);

    m.def("detect_symmetry", &detect_symmetry, py::arg("generator"), py::arg("tol") = 1e-9);
    m.def(
        "verify_generator_symmetry",
        [](const GeneratorMatrix& q, const std::vector<double>& weights, double tol) {
            const SymmetryCheck check = verify_generator_symmetry(q, certificate_from_weights(q.space, weights), tol);
            return py::make_tuple(check.pass, check.max_residual, check.worst_from, check.worst_to);
        },
        py::arg("generator"), py::arg("weights"), py::arg("tol") = 1e-9);
    m.def(
        "verify_probability_symmetry",
        [](const TransitionMatrixSequence& p, const std::vector<double>& weights, double tol) {
            const auto check = verify_probability_symmetry(p, certificate_from_weights(p.space, weights), tol);
            return py::make_tuple(check.pass, check.max_residual);
        },
        py::arg("sequence"), py::arg("weights"), py::arg("tol") = 1e-8);

    m.def(
        "currents",
        [](const GeneratorMatrix& q, const TransitionMatrixSequence& p, int from_label) {
            const CurrentPair pair = currents(make_problem(q, false), p, from_label);
            return py::make_tuple(pair.upward.values, pair.downward.values);
        },
        py::arg("generator"), py::arg("sequence"), py::arg("from_label"));
    m.def(
        "fpt_density_volterra",
        [](const GeneratorMatrix& q, const TransitionMatrixSequence& p, int start) {
            return fpt_density_volterra(make_problem(q, false), p, start).values;
        },
        py::arg("generator"), py::arg("sequence"), py::arg("start"));
    m.def(
        "fpt_density_symmetric",
        [](const GeneratorMatrix& q, const TransitionMatrixSequence& p, int start) {
            return fpt_density_symmetric(make_problem(q, true), p, start).values;
        },
        py::arg("generator"), py::arg("sequence"), py::arg("start"));
    m.def(
        "avoiding_probabilities",
        [](const GeneratorMatrix& q, const TransitionMatrixSequence& p, int from_label, int to_label) {
            return avoiding_probabilities_symmetric(make_problem(q, true), p, from_label, to_label).values;
        },
        py::arg("generator"), py::arg("sequence"), py::arg("from_label"), py::arg("to_label"));

    auto bd = m.def_submodule("bdjump", "closed forms for the bilateral birth-death chain with jumps to 0");
    bd.def("bessel_i_scaled", &bdjump::bessel_i_scaled, py::arg("n"), py::arg("x"));
    bd.def(
        "transition_probability",
        [](double birth, double death, double jump, int k, int n, double t, double quad_tol) {
            return bdjump::transition_probability(BDJumpModel{birth, death, jump}, k, n, t, quad_tol);
        },
        py::arg("birth"), py::arg("death"), py::arg("jump"), py::arg("k"), py::arg("n"), py::arg("t"),
        py::arg("quad_tol") = 1e-10);
    bd.def(
        "hat_transition_probability",
        [](double birth, double death, int k, int n, double t) {
            return bdjump::hat_transition_probability(BDJumpModel{birth, death, 0.0}, k, n, t);
        },
        py::arg("birth"), py::arg("death"), py::arg("k"), py::arg("n"), py::arg("t"));
    bd.def(
        "stationary_law",
        [](double birth, double death, double jump, int n) {
            return bdjump::stationary_law(BDJumpModel{birth, death, jump}, n);
        },
        py::arg("birth"), py::arg("death"), py::arg("jump"), py::arg("n"));
    bd.def(
        "fpt_density",
        [](double rate, double jump, int k, double t) {
            return bdjump::fpt_density_closed_form(BDJumpModel{rate, rate, jump}, k, t);
        },
        py::arg("rate"), py::arg("jump"), py::arg("k"), py::arg("t"));
    bd.def(
        "avoiding_probability",
        [](double rate, double jump, int k, int n, double t) {
            return bdjump::avoiding_closed_form(BDJumpModel{rate, rate, jump}, k, n, t);
        },
        py::arg("rate"), py::arg("jump"), py::arg("k"), py::arg("n"), py::arg("t"));

    m.def(
        "apply_similarity",
        [](const GeneratorMatrix& q, const std::vector<double>& beta, bool exempt_window_edges) {
            const SimilarityResult result =
                apply_similarity(q, SimilarityWeights{q.space, beta},
                                 exempt_window_edges ? BoundaryPolicy::ExemptWindowEdges : BoundaryPolicy::Strict);
            return py::make_tuple(result.transformed, result.adjusted_rows);
        },
        py::arg("generator"), py::arg("beta"), py::arg("exempt_window_edges") = false);
    m.def(
        "theorem5_closure",
        [](const GeneratorMatrix& q, const std::vector<double>& beta) {
            const SymmetryDetection det = detect_symmetry(q);
            if (!det.symmetric()) {
                throw ValidationError("NoCertificate", "chain has no central symmetry");
            }
            const Theorem5Result result =
                verify_theorem5(q, *det.certificate, SimilarityWeights{q.space, beta});
            return py::make_tuple(result.transformed, result.certificate.weights, result.check.max_residual);
        },
        py::arg("generator"), py::arg("beta"));
    m.def(
        "example2_beta",
        [](double birth, double death, double eta, int n) { return example2_family(birth, death, eta).beta(n); },
        py::arg("birth"), py::arg("death"), py::arg("eta"), py::arg("n"));

    py::class_<mc::Estimate>(m, "Estimate")
        .def_readonly("value", &mc::Estimate::value)
        .def_readonly("std_error", &mc::Estimate::std_error)
        .def("__repr__", [](const mc::Estimate& e) {
            return "Estimate(" + std::to_string(e.value) + " +/- " + std::to_string(e.std_error) + ")";
        });

    py::class_<mc::PathCollection>(m, "Simulation")
        .def_property_readonly("n_paths", [](const mc::PathCollection& p) { return p.config.n_paths; })
        .def("estimate_transition", &mc::estimate_transition, py::arg("n_label"), py::arg("t"))
        .def("estimate_avoiding", &mc::estimate_avoiding, py::arg("s_label"), py::arg("n_label"), py::arg("t"))
        .def(
            "fpt_histogram",
            [](const mc::PathCollection& paths, int target, double t_max, int bins) {
                const auto hist = mc::estimate_fpt_histogram(paths, target, TimeGrid(t_max, bins));
                return py::make_tuple(hist.density.values, hist.hit_fraction);
            },
            py::arg("target"), py::arg("t_max"), py::arg("bins"));

    m.def(
        "simulate",
        [](const GeneratorMatrix& q, long long n_paths, double t_max, std::uint64_t seed, int start) {
            return mc::simulate_paths(q, mc::SimulationConfig{n_paths, t_max, seed, start});
        },
        py::arg("generator"), py::arg("n_paths"), py::arg("t_max"), py::arg("seed"), py::arg("start"),
        py::call_guard<py::gil_scoped_release>());

    m.attr("__version__") = "0.1.0";
}
