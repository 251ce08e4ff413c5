#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "semiwave/catalog.hpp"
#include "semiwave/jet.hpp"
#include "semiwave/parse.hpp"
#include "semiwave/replay.hpp"
#include "semiwave/solver.hpp"

namespace py = pybind11;
using namespace semiwave;

namespace {

Dir direction(const std::string& d)
{
    if (d == "t") return Dir::T;
    if (d == "r") return Dir::R;
    throw py::value_error("direction must be 't' or 'r'");
}

Dep dependent(const std::string& name)
{
    auto d = dep_from_name(name);
    if (!d) throw py::value_error("unknown dependent variable " + name);
    return *d;
}

PowerKind power_kind(const std::string& name)
{
    auto k = power_kind_from_name(name);
    if (!k) throw py::value_error("unknown power kind " + name);
    return *k;
}

}  // namespace

PYBIND11_MODULE(_core, mod)
{
    mod.doc() = "Exact jet calculus, catalog replay and radial solver";

    py::register_exception<ParseError>(mod, "ParseError", PyExc_ValueError);

    mod.def("simplify", [](const std::string& e) { return print(parse_nf(e)); });
    mod.def("total_derivative",
            [](const std::string& e, const std::string& d, int times) {
                return print(total_derivative(parse_nf(e), direction(d), times));
            },
            py::arg("expr"), py::arg("direction"), py::arg("times") = 1);
    mod.def("euler", [](const std::string& e, const std::string& dep) {
        return print(variational_derivative(parse_nf(e), dependent(dep)));
    }, py::arg("density"), py::arg("dep") = "u");
    mod.def("conjugate", [](const std::string& e) { return print(conjugate(parse_nf(e))); });

    mod.def("equations", [] { return Catalog::equation_names(); });
    mod.def("tables", [] {
        std::vector<std::pair<std::string, std::size_t>> out;
        const Catalog& cat = Catalog::instance();
        for (const std::string& t : cat.table_ids()) out.emplace_back(t, cat.list_table(t).size());
        return out;
    });
    mod.def("special_power",
            [](const std::string& name, const std::string& kind, const std::string& m, std::optional<int> s) {
                std::optional<Coeff> sv;
                if (s) sv = Coeff(*s);
                return Catalog::instance().special_power(name, power_kind(kind), parse_nf(m).constant_value(), sv).str();
            },
            py::arg("equation"), py::arg("kind"), py::arg("m"), py::arg("s") = py::none());

    mod.def("verify_json",
            [](const std::string& scope, const std::string& sigma, int jobs) {
                CheckOptions opt;
                if (sigma == "plus") opt.sigma_branches = {1};
                else if (sigma == "minus") opt.sigma_branches = {-1};
                else if (sigma != "both") throw py::value_error("sigma must be both, plus or minus");
                std::vector<RowResult> rs;
                {
                    py::gil_scoped_release nogil;
                    rs = verify_scope(scope, opt, jobs);
                }
                return to_json(rs);
            },
            py::arg("scope"), py::arg("sigma") = "both", py::arg("jobs") = 1);

    mod.def("simulate_raw",
            [](const std::string& config_text) {
                RunConfig cfg = parse_run_config(config_text);
                RunResult res;
                {
                    py::gil_scoped_release nogil;
                    res = run(cfg);
                }
                return std::make_pair(summary_json(res), to_csv(res));
            },
            py::arg("config_text"));

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const std::domain_error& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });
}
