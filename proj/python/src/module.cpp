#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <string>

#include "flashiv/bench.hpp"
#include "flashiv/datasets.hpp"
#include "flashiv/error.hpp"
#include "flashiv/math_kernels.hpp"
#include "flashiv/normalization.hpp"
#include "flashiv/oracle.hpp"
#include "flashiv/seeds.hpp"
#include "flashiv/solver.hpp"

namespace py = pybind11;
using namespace flashiv;

namespace {

OptionKind parse_kind(const std::string& kind) {
    if (kind == "call" || kind == "c") {
        return OptionKind::Call;
    }
    if (kind == "put" || kind == "p") {
        return OptionKind::Put;
    }
    throw Error(ErrorCode::DomainError, "option kind must be 'call' or 'put'");
}

SolverConfig make_config(bool polish, double safety_threshold) {
    SolverConfig cfg;
    cfg.polish = polish ? Polish::On : Polish::Off;
    cfg.safety_threshold = safety_threshold;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_flashiv, m) {
    m.doc() = "Fixed-count implied-volatility inversion";

    static py::object error_type = py::reinterpret_steal<py::object>(
        PyErr_NewException("flashiv.FlashIVError", PyExc_ValueError, nullptr));
    m.attr("FlashIVError") = error_type;
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const Error& e) {
            py::object err = error_type(e.what());
            err.attr("code") = static_cast<int>(e.code());
            err.attr("code_name") = std::string(to_string(e.code()));
            PyErr_SetObject(error_type.ptr(), err.ptr());
        }
    });

    py::enum_<GuessBranch>(m, "GuessBranch")
        .value("BachelierLimit", GuessBranch::BachelierLimit)
        .value("LiRational", GuessBranch::LiRational)
        .value("NearAtmSmallPrice", GuessBranch::NearAtmSmallPrice)
        .value("UpperPrice", GuessBranch::UpperPrice)
        .value("AsymptoticOtm", GuessBranch::AsymptoticOtm)
        .value("Fallback", GuessBranch::Fallback);

    py::class_<SolverResult>(m, "SolverResult")
        .def_readonly("sigma", &SolverResult::sigma)
        .def_readonly("total_vol", &SolverResult::total_vol)
        .def_readonly("branch", &SolverResult::branch)
        .def_readonly("fast_steps", &SolverResult::fast_steps)
        .def_readonly("exact_steps", &SolverResult::exact_steps)
        .def_readonly("safety_fired", &SolverResult::safety_fired)
        .def_readonly("residual", &SolverResult::residual)
        .def_readonly("halley_steps", &SolverResult::halley_steps)
        .def_readonly("polished", &SolverResult::polished)
        .def("__repr__", [](const SolverResult& r) {
            return "SolverResult(sigma=" + std::to_string(r.sigma) + ", branch=" + std::string(to_string(r.branch)) +
                   ")";
        });

    py::class_<NormalizedQuote>(m, "NormalizedQuote")
        .def_property_readonly("x", &NormalizedQuote::x)
        .def_property_readonly("c", &NormalizedQuote::c)
        .def_property_readonly("lnc", &NormalizedQuote::lnc)
        .def_property_readonly("expiry", &NormalizedQuote::expiry);

    m.def(
        "normalize",
        [](const std::string& kind, double forward, double strike, double price, double expiry) {
            return normalize({parse_kind(kind), forward, strike, price, expiry});
        },
        py::arg("kind"), py::arg("forward"), py::arg("strike"), py::arg("price"), py::arg("expiry"));

    m.def(
        "solve",
        [](const std::string& kind, double forward, double strike, double price, double expiry, bool polish,
           double safety_threshold) {
            return solve({parse_kind(kind), forward, strike, price, expiry}, make_config(polish, safety_threshold));
        },
        py::arg("kind"), py::arg("forward"), py::arg("strike"), py::arg("price"), py::arg("expiry"),
        py::arg("polish") = false, py::arg("safety_threshold") = 1e-4,
        "Implied volatility of an undiscounted European call or put.");

    m.def(
        "solve_normalized",
        [](double x, double c, double expiry, bool polish, double safety_threshold) {
            return solve_normalized(x, c, expiry, make_config(polish, safety_threshold));
        },
        py::arg("x"), py::arg("c"), py::arg("expiry") = 1.0, py::arg("polish") = false,
        py::arg("safety_threshold") = 1e-4);

    m.def(
        "implied_total_vol",
        py::vectorize([](double x, double c, bool polish) {
            return solve_normalized(x, c, 1.0, make_config(polish, 1e-4)).total_vol;
        }),
        py::arg("x"), py::arg("c"), py::arg("polish") = false, "Vectorised total volatility from (x, c).");

    m.def(
        "black_price", py::vectorize([](double x, double v) { return black_price_hi(x, v).to_double(); }),
        py::arg("x"), py::arg("v"), "Normalised OTM call price, correctly rounded from double-double.");
    m.def(
        "log_black_price", py::vectorize([](double x, double v) { return log_black_price_hi(x, v).to_double(); }),
        py::arg("x"), py::arg("v"));
    m.def(
        "iv_reference", py::vectorize([](double x, double c) { return iv_reference(x, c); }), py::arg("x"),
        py::arg("c"), "Bisection reference total volatility (closest double).");
    m.def("ulp_error", py::vectorize(&ulp_error), py::arg("v_hat"), py::arg("v_ref"));

    m.def("erfcx_exact", py::vectorize(&erfcx_exact), py::arg("z"));
    m.def("erfcx_fast", py::vectorize(&erfcx_fast), py::arg("z"));
    m.def("norm_cdf", py::vectorize(&norm_cdf), py::arg("z"));
    m.def("norm_cdf_inv", py::vectorize(&norm_cdf_inv), py::arg("p"));

    m.def(
        "li_coefficients",
        []() {
            const LiCoefficients& k = LiCoefficients::builtin();
            return py::make_tuple(k.m, k.n);
        },
        "Built-in rational seed coefficients as (m, n).");
    m.def(
        "li_guess", py::vectorize([](double x, double c) { return li_guess(x, c); }), py::arg("x"), py::arg("c"));
    m.def(
        "dispatch_guess",
        [](double x, double c) {
            const Guess g = dispatch_guess(x, c, std::log(c));
            return py::make_tuple(g.v0, g.branch);
        },
        py::arg("x"), py::arg("c"));

    m.def("dataset_names", []() {
        py::list out;
        for (DatasetName n : kAllDatasets) {
            out.append(std::string(to_string(n)));
        }
        return out;
    });
    m.def(
        "build_dataset",
        [](const std::string& name) {
            const auto parsed = parse_dataset_name(name);
            if (!parsed) {
                throw Error(ErrorCode::SchemaViolation, "unknown dataset '" + name + "'");
            }
            const auto cases = build_dataset(*parsed);
            py::dict out;
            py::array_t<double> x(cases.size()), t(cases.size()), v(cases.size()), c(cases.size());
            auto xm = x.mutable_unchecked<1>();
            auto tm = t.mutable_unchecked<1>();
            auto vm = v.mutable_unchecked<1>();
            auto cm = c.mutable_unchecked<1>();
            for (std::size_t i = 0; i < cases.size(); ++i) {
                xm(i) = cases[i].x;
                tm(i) = cases[i].expiry;
                vm(i) = cases[i].v_ref;
                cm(i) = cases[i].c_ref;
            }
            out["x"] = x;
            out["T"] = t;
            out["v_ref"] = v;
            out["c_ref"] = c;
            return out;
        },
        py::arg("name"), "Dataset columns x, T, v_ref, c_ref as numpy arrays.");
}
