#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <chrono>
#include <string>

#include "mimocap/acceptance.hpp"
#include "mimocap/channel_io.hpp"
#include "mimocap/dispatch.hpp"
#include "mimocap/errors.hpp"
#include "mimocap/fixtures.hpp"
#include "mimocap/linalg.hpp"
#include "mimocap/waterfill.hpp"

namespace py = pybind11;
using namespace mimocap;

namespace
{

SolveMode mode_from(const std::string& name)
{
    const auto m = parse_mode(name);
    if (!m)
        throw InputError("unknown solver mode: " + name);
    return *m;
}

PhaseConvention phase_from(const std::string& name)
{
    if (name == "aligned")
        return PhaseConvention::aligned;
    if (name == "conjugate")
        return PhaseConvention::conjugate;
    throw InputError("unknown phase convention: " + name);
}

RVector caps_from(const py::object& pap, Index n)
{
    if (py::isinstance<py::float_>(pap) || py::isinstance<py::int_>(pap))
        return RVector::Constant(n, pap.cast<double>());
    return pap.cast<RVector>();
}

PowerConstraints constraints(const ChannelMatrix& h, double p_tot, const py::object& pap)
{
    return PowerConstraints(p_tot, caps_from(pap, h.n_t()));
}

} // namespace

PYBIND11_MODULE(_mimocap, m)
{
    m.doc() = "Capacity of MIMO channels under joint total and per-antenna power constraints";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InputError>(m, "InputError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
    py::register_exception<RoutingError>(m, "RoutingError", base.ptr());
    py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());
    py::register_exception<StepError>(m, "StepError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

    py::class_<SolveReport>(m, "SolveReport")
        .def_readonly("capacity_nats", &SolveReport::capacity_nats)
        .def_property_readonly("capacity_bits",
                               [](const SolveReport& r) { return r.capacity_nats / std::log(2.0); })
        .def_property_readonly("q", [](const SolveReport& r) { return r.q_opt.entries(); })
        .def_property_readonly("rank_q", [](const SolveReport& r) { return r.q_opt.rank(); })
        .def_property_readonly("solver", [](const SolveReport& r) { return std::string(to_string(r.solver)); })
        .def_readonly("tp_active", &SolveReport::tp_active)
        .def_readonly("pap_active", &SolveReport::pap_active)
        .def_readonly("kkt_residual", &SolveReport::kkt_residual)
        .def_readonly("iterations", &SolveReport::iterations)
        .def_property_readonly("wall_time",
                               [](const SolveReport& r) { return std::chrono::duration<double>(r.wall_time).count(); })
        .def_readonly("n_var", &SolveReport::n_var)
        .def_readonly("fell_back", &SolveReport::fell_back)
        .def_readonly("objective_trace", &SolveReport::objective_trace)
        .def_readonly("dual_trace", &SolveReport::dual_trace)
        .def_property_readonly("d_check",
                               [](const SolveReport& r) -> std::optional<RVector> {
                                   if (!r.d_check)
                                       return std::nullopt;
                                   return r.d_check->values();
                               })
        .def("__repr__", [](const SolveReport& r) {
            return "<SolveReport solver=" + std::string(to_string(r.solver)) +
                   " capacity_nats=" + std::to_string(r.capacity_nats) + ">";
        });

    m.def(
        "solve",
        [](const CMatrix& h, double p_tot, const py::object& pap, const std::string& mode,
           const std::string& phase) {
            const ChannelMatrix ch(h);
            const PowerConstraints c = constraints(ch, p_tot, pap);
            py::gil_scoped_release release;
            return solve(ch, c, mode_from(mode), {}, phase_from(phase));
        },
        py::arg("h"), py::arg("p_tot"), py::arg("pap"), py::arg("mode") = "auto", py::arg("phase") = "aligned",
        "Capacity-achieving covariance of h under tr Q <= p_tot and diag Q <= pap.");

    m.def(
        "route",
        [](const CMatrix& h, double p_tot, const py::object& pap) {
            const ChannelMatrix ch(h);
            return std::string(to_string(route(ch, constraints(ch, p_tot, pap))));
        },
        py::arg("h"), py::arg("p_tot"), py::arg("pap"), "Solver the auto mode would use.");

    m.def(
        "cross_validate",
        [](const CMatrix& h, double p_tot, const py::object& pap) {
            const ChannelMatrix ch(h);
            const PowerConstraints c = constraints(ch, p_tot, pap);
            CrossValidation cv;
            {
                py::gil_scoped_release release;
                cv = cross_validate(ch, c);
            }
            return py::make_tuple(cv.routed, cv.basic, cv.capacity_gap);
        },
        py::arg("h"), py::arg("p_tot"), py::arg("pap"),
        "Routed and basic reports with the absolute capacity gap in nats.");

    m.def(
        "waterfill",
        [](const CMatrix& h, double p_tot) { return waterfill_tp(ChannelMatrix(h), p_tot); }, py::arg("h"),
        py::arg("p_tot"), "Water-filling under the total power constraint alone.");

    m.def(
        "mutual_information",
        [](const CMatrix& h, const CMatrix& q) { return mutual_information(ChannelMatrix(h), CovarianceMatrix(q)); },
        py::arg("h"), py::arg("q"), "log det(I + H Q H^H) in nats.");

    m.def(
        "kkt_residual",
        [](const CMatrix& h, double p_tot, const py::object& pap, const CMatrix& q) {
            const ChannelMatrix ch(h);
            return kkt_residual(ch, constraints(ch, p_tot, pap), CovarianceMatrix(q));
        },
        py::arg("h"), py::arg("p_tot"), py::arg("pap"), py::arg("q"));

    m.def("calculate_alpha", &calculate_alpha, py::arg("v"), py::arg("pap"), py::arg("p_tot"),
          py::arg("clamp") = true, "Root alpha of sum_i min(alpha |v_i|^2, P_i) = p_tot.");

    m.def(
        "channel_rank", [](const CMatrix& h) { return ChannelMatrix(h).rank(); }, py::arg("h"));

    m.def(
        "load_channel", [](const std::filesystem::path& p) { return load_matrix_file(p); }, py::arg("path"));
    m.def(
        "channel_to_json", [](const CMatrix& h, int indent) { return matrix_to_json(h, indent); }, py::arg("h"),
        py::arg("indent") = -1);

    py::module_ fx = m.def_submodule("fixtures", "Channel matrices used by the examples and tests");
    fx.def("h3x4", &fixtures::h3x4);
    fx.def("h3x2", &fixtures::h3x2);
    fx.def("h3x3", &fixtures::h3x3);
    fx.def("h4x4", &fixtures::h4x4);

    m.def(
        "run_acceptance",
        [](std::uint64_t seed) {
            AcceptanceOptions opts;
            opts.seed = seed;
            std::vector<CriterionResult> results;
            {
                py::gil_scoped_release release;
                results = run_acceptance(opts);
            }
            py::list out;
            for (const auto& r : results)
            {
                py::dict d;
                d["id"]      = r.id;
                d["name"]    = r.name;
                d["passed"]  = r.passed;
                d["detail"]  = r.detail;
                d["seconds"] = r.seconds;
                out.append(d);
            }
            return out;
        },
        py::arg("seed") = 1, "Runs the acceptance criteria and returns one dict per criterion.");
}
