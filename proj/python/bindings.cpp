#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "curverec/acceptance.hpp"
#include "curverec/densify.hpp"
#include "curverec/io.hpp"
#include "curverec/observe.hpp"
#include "curverec/perspective.hpp"
#include "curverec/solver.hpp"

namespace py = pybind11;
using namespace curverec;

namespace {

// Owned for the lifetime of the process; never released.
PyObject* error_type = nullptr;
PyObject* no_convergence_type = nullptr;

void raise(PyObject* type, const Error& e) {
    py::object exc = py::reinterpret_borrow<py::object>(type)(e.what());
    exc.attr("kind") = e.kind();
    PyErr_SetObject(type, exc.ptr());
}

std::vector<FrameObservation> observe_scene(std::uint64_t seed, int frames, bool nuisance, double noise) {
    return observe_frames(render_scene(make_scene(seed, frames, nuisance), noise));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Rigid curve reconstruction from orthographic multiframe images";

    error_type = PyErr_NewException("curverec._core.Error", PyExc_RuntimeError, nullptr);
    no_convergence_type = PyErr_NewException("curverec._core.NoConvergenceError", error_type, nullptr);
    m.add_object("Error", py::handle(error_type));
    m.add_object("NoConvergenceError", py::handle(no_convergence_type));
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const NoConvergenceError& e) {
            raise(no_convergence_type, e);
        } catch (const Error& e) {
            raise(error_type, e);
        }
    });

    py::class_<CurveParams>(m, "CurveParams")
        .def(py::init<>())
        .def(py::init([](double c, double alpha, double beta, double phi) { return CurveParams{c, alpha, beta, phi}; }),
             py::arg("c"), py::arg("alpha"), py::arg("beta"), py::arg("phi"))
        .def_readwrite("c", &CurveParams::c)
        .def_readwrite("alpha", &CurveParams::alpha)
        .def_readwrite("beta", &CurveParams::beta)
        .def_readwrite("phi", &CurveParams::phi)
        .def("__repr__", [](const CurveParams& p) {
            return "CurveParams(c=" + std::to_string(p.c) + ", alpha=" + std::to_string(p.alpha) +
                   ", beta=" + std::to_string(p.beta) + ", phi=" + std::to_string(p.phi) + ")";
        });

    py::class_<FrameObservation>(m, "FrameObservation")
        .def(py::init<>())
        .def(py::init([](double c_prime, double d_prime, double e_prime, int frame_index) {
                 FrameObservation o;
                 o.c_prime = c_prime;
                 o.d_prime = d_prime;
                 o.e_prime = e_prime;
                 o.frame_index = frame_index;
                 return o;
             }),
             py::arg("c_prime"), py::arg("d_prime"), py::arg("e_prime"), py::arg("frame_index") = 0)
        .def_readwrite("c_prime", &FrameObservation::c_prime)
        .def_readwrite("d_prime", &FrameObservation::d_prime)
        .def_readwrite("e_prime", &FrameObservation::e_prime)
        .def_readwrite("frame_index", &FrameObservation::frame_index);

    py::class_<FramePose>(m, "FramePose")
        .def_readonly("delta", &FramePose::delta)
        .def_readonly("tau", &FramePose::tau)
        .def_property_readonly("branch", [](const FramePose& p) { return std::string(to_string(p.delta_branch)); })
        .def_readonly("frame_index", &FramePose::frame_index);

    py::class_<SolveReport>(m, "SolveReport")
        .def_readonly("params", &SolveReport::params)
        .def_readonly("per_frame", &SolveReport::per_frame)
        .def_readonly("residual_rms", &SolveReport::residual_rms)
        .def_readonly("iterations", &SolveReport::iterations)
        .def_readonly("converged", &SolveReport::converged)
        .def_property_readonly("method", [](const SolveReport& r) { return std::string(to_string(r.method)); })
        .def("to_json", [](const SolveReport& r) { return dump_json(solution_to_json(r)); });

    m.def("observe_scene", &observe_scene, py::arg("seed"), py::arg("frames"), py::arg("nuisance") = true,
          py::arg("noise") = 0.0, "Observables of a synthetic scene");
    m.def("scene_params", [](std::uint64_t seed) { return make_scene(seed, 1, false).params; }, py::arg("seed"),
          "Ground-truth parameters of the synthetic scene with this seed");
    m.def(
        "solve",
        [](const std::vector<FrameObservation>& obs, const std::string& method, double noise_sigma) {
            SolverConfig cfg;
            cfg.noise_sigma = noise_sigma;
            return solve(obs, method_from_string(method), cfg);
        },
        py::arg("observations"), py::arg("method") = "nonlinear", py::arg("noise_sigma") = 0.0);
    m.def("residual", &residual_eq12, py::arg("observation"), py::arg("params"),
          "Frame-independent residual of one observation");
    m.def("recover_pose", [](const FrameObservation& o, const CurveParams& p) { return recover_frame_pose(o, p).pose; },
          py::arg("observation"), py::arg("params"));
    m.def("double_quotient", &double_quotient, py::arg("A"), py::arg("E"), py::arg("Y"), py::arg("B"));
    m.def(
        "reconstruct_scene",
        [](std::uint64_t seed, int frames) {
            const Scene scene = make_scene(seed, frames, true);
            const std::vector<FrameImage> images = render_scene(scene);
            const ReconstructedCurve rc = reconstruct_from_solution(images, solve_global(observe_frames(images)));
            return rc.points;
        },
        py::arg("seed"), py::arg("frames") = 6, "Solve and densify a synthetic scene; returns 3D points");
    m.def(
        "run_acceptance",
        [](std::uint64_t seed, const std::string& fixture) {
            AcceptanceOptions opt;
            opt.seed = seed;
            opt.noise_fixture = fixture;
            py::list out;
            for (const CriterionResult& r : run_acceptance(opt))
                out.append(py::dict(py::arg("id") = r.id, py::arg("name") = r.name, py::arg("passed") = r.passed,
                                    py::arg("detail") = r.detail));
            return out;
        },
        py::arg("seed") = 1, py::arg("fixture") = "");
}
