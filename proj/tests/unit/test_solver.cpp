#include <cmath>
#include <numbers>

#include "doctest.h"
#include "semiwave/parse.hpp"
#include "semiwave/solver.hpp"

using namespace semiwave;

namespace {

RadialProblem problem(const std::string& eq, int sigma, double p, double m, int N = 256, double R = 8.0)
{
    RunParams rp;
    rp.equation = eq;
    rp.sigma = sigma;
    rp.p = p;
    rp.m = m;
    return RadialProblem(rp, Grid(R, N, m));
}

ConsLaw law(const char* id) { return Catalog::instance().law(Catalog::instance().row(id)); }

}  // namespace

TEST_CASE("grid")
{
    Grid g(8.0, 64, 2.0);
    CHECK(g.dr() == doctest::Approx(0.125));
    CHECK(g.r(64) == doctest::Approx(8.0));
    CHECK(g.weights()[0] == 0.0);
    CHECK_THROWS_AS(Grid(8.0, 8, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Grid(0.0, 64, 0.0), std::invalid_argument);
    RunParams rp;
    rp.m = 1;
    CHECK_THROWS_AS(RadialProblem(rp, Grid(8.0, 64, 2.0)), std::invalid_argument);
    rp.equation = "KdV";
    CHECK_THROWS_AS(RadialProblem(rp, Grid(8.0, 64, 1.0)), std::invalid_argument);
}

TEST_CASE("zero field is stationary")
{
    for (const std::string& name : Catalog::equation_names()) {
        RadialProblem pb = problem(name, 1, 2, 2, 64);
        SolverState s = pb.initial_state(parse_nf("0"), pb.eq_class() == EqClass::WEa ? std::optional(parse_nf("0")) : std::nullopt);
        auto [du, dv] = pb.spatial_rhs(s);
        INFO(name);
        for (auto z : du) CHECK(std::abs(z) == 0.0);
        for (auto z : dv) CHECK(std::abs(z) == 0.0);
    }
}

TEST_CASE("NLS right-hand side against the symbolic equation")
{
    RadialProblem pb = problem("NLS", 1, 2, 0, 512);
    SolverState s = pb.initial_state(parse_nf("exp(-r^2)"));
    auto [du, dv] = pb.spatial_rhs(s);
    const NormalForm rhs = Catalog::instance().get_equation("NLS", 1).eq.rhs;
    double err = 0.0;
    for (int j = 8; j < 200; j += 7) {
        const double r = pb.grid().r(j), e = std::exp(-r * r);
        EvalPoint at;
        at.r = r;
        at.params = {{Var::M, 0.0}, {Var::P, 2.0}};
        at.jets[{Dep::U, 0, 0}] = e;
        at.jets[{Dep::Ubar, 0, 0}] = e;
        at.jets[{Dep::U, 0, 1}] = at.jets[{Dep::Ubar, 0, 1}] = -2 * r * e;
        at.jets[{Dep::U, 0, 2}] = at.jets[{Dep::Ubar, 0, 2}] = (4 * r * r - 2) * e;
        err = std::max(err, std::abs(du[j] - eval_numeric(rhs, at)));
    }
    CHECK(err < 1e-3);
}

TEST_CASE("charge of a Gaussian")
{
    RadialProblem pb = problem("NLS", -1, 2, 2, 512);
    SolverState s = pb.initial_state(parse_nf("exp(-r^2)"));
    CHECK(pb.conserved_quantity(s, law("T11.row1")).real() ==
          doctest::Approx(std::sqrt(2 * std::numbers::pi) / 16).epsilon(1e-10));
    CHECK(std::abs(pb.boundary_flux(s, law("T11.row1"))) < 1e-12);
}

TEST_CASE("NLW energy against an independent quadrature")
{
    const double p = 3, m = 2;
    RadialProblem pb = problem("NLW", -1, p, m, 512);
    SolverState s = pb.initial_state(parse_nf("exp(-r^2)"), parse_nf("r*exp(-r^2)"));
    const int n = 20000;
    const double h = 8.0 / n;
    double ref = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double r = k * h, e = std::exp(-r * r);
        const double ur = -2 * r * e, ut = r * e;
        const double f = (0.5 * (ut * ut + ur * ur) + std::pow(e, p + 1) / (p + 1)) * r * r;
        ref += (k == 0 || k == n ? 1 : (k % 2 ? 4 : 2)) * f;
    }
    ref *= h / 3;
    CHECK(pb.conserved_quantity(s, law("T10.row1")).real() == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("real equations stay real, NLS develops a phase")
{
    RadialProblem nlw = problem("NLW", 1, 3, 2, 128);
    Trajectory tr = nlw.integrate(nlw.initial_state(parse_nf("exp(-r^2)"), parse_nf("0")), 0.5, {}, 5);
    double im = 0.0;
    for (const auto& z : tr.samples.back().u) im = std::max(im, std::abs(z.imag()));
    CHECK(im == 0.0);

    RadialProblem nls = problem("NLS", -1, 2, 2, 128);
    Trajectory tn = nls.integrate(nls.initial_state(parse_nf("exp(-r^2)")), 0.2, {}, 4);
    double grow = 0.0;
    for (const auto& z : tn.samples.back().u) grow = std::max(grow, std::abs(z.imag()));
    CHECK(grow > 1e-2);
    CHECK(tn.samples.size() == 5);
    CHECK(tn.samples.back().time == doctest::Approx(0.2));
}

TEST_CASE("drift under refinement")
{
    std::vector<double> drift;
    for (int N : {128, 256}) {
        RadialProblem pb = problem("NLS", -1, 2, 2, N);
        Trajectory tr = pb.integrate(pb.initial_state(parse_nf("exp(-r^2)")), 0.5, {}, 4);
        auto d = pb.monitor_drift(tr, {law("T11.row1"), law("T11.row2")});
        CHECK(d[0].drift < 1e-9);
        drift.push_back(d[1].drift);
    }
    CHECK(drift[1] < drift[0] / 3.0);
}

TEST_CASE("blow-up detection")
{
    RadialProblem pb = problem("NLS", 1, 2, 2, 256);
    Trajectory tr = pb.integrate(pb.initial_state(parse_nf("5*exp(-r^2)")), 1.0);
    CHECK(tr.blowup);
    CHECK(tr.blowup_time > 0.0);
    CHECK(tr.blowup_time < 1.0);
    RadialProblem twin = problem("NLS", -1, 2, 2, 256);
    CHECK(!twin.integrate(twin.initial_state(parse_nf("5*exp(-r^2)")), 0.2).blowup);
}

TEST_CASE("monitor side conditions")
{
    RadialProblem pb = problem("NLS", -1, 2, 2, 64);
    Trajectory tr = pb.integrate(pb.initial_state(parse_nf("exp(-r^2)")), 0.01, {}, 2);
    CHECK_THROWS_AS(pb.monitor_drift(tr, {law("T11.row3")}), std::invalid_argument);
}

TEST_CASE("scaling orbit")
{
    RadialProblem pb = problem("NLS", -1, 2, 0, 256);
    Trajectory tr = pb.integrate(pb.initial_state(parse_nf("exp(-r^2)")), 0.2, {}, 40);
    CHECK(pb.scaling_orbit_check(tr, 1.0, 20) < 1e-2);
    CHECK(pb.scaling_orbit_check(tr, 1.5, 20) < 1e-2);
    CHECK_THROWS_AS(pb.scaling_orbit_check(tr, 3.0, 20), std::invalid_argument);
    CHECK_THROWS_AS(pb.scaling_orbit_check(tr, 1.0, 1), std::invalid_argument);
    auto [b, c] = pb.scaling_weights();
    CHECK(b == doctest::Approx(2.0));
    CHECK(c == doctest::Approx(-1.0));
}

TEST_CASE("run configuration")
{
    RunConfig cfg = parse_run_config("equation = NLS\nsigma = defocusing\np = 2\nm = 2\nN = 64\n"
                                     "initial_data = exp(-r^2)  # Gaussian\nmonitors = [T11.row1, T11.row2:corrected]\n");
    CHECK(cfg.params.sigma == -1);
    CHECK(cfg.N == 64);
    CHECK(cfg.monitors.size() == 2);
    CHECK_THROWS_AS(parse_run_config("equation = NLS\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config("initial_data = 1\ncolour = red\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config("initial_data = 1\nN = 8\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config("initial_data = 1\ndt_factor = 0.5\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_run_config("initial_data = 1\np = 2\np = 3\n"), std::invalid_argument);
    CHECK_THROWS_AS(monitor_law("T11.row1:fixed"), std::invalid_argument);
    CHECK_THROWS_AS(monitor_law("T1.row1"), std::invalid_argument);

    cfg.T_final = 0.05;
    cfg.samples = 2;
    RunResult res = run(cfg);
    CHECK(res.completed());
    const std::string csv = to_csv(res);
    CHECK(csv.rfind("t,C_T11.row1,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(summary_json(res).find("\"verdict\": \"completed\"") != std::string::npos);
}
