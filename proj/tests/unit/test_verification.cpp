#include "doctest.h"
#include "semiwave/parse.hpp"
#include "semiwave/verification.hpp"

using namespace semiwave;

TEST_CASE("point symmetries")
{
    const Catalog& cat = Catalog::instance();
    for (const std::string& name : Catalog::equation_names()) {
        const EquationSpec eq = cat.get_equation(name).eq;
        for (const auto& [label, x] : cat.generators(name)) {
            if (label == "X_inver") continue;
            INFO(name, " ", label);
            CHECK(check_symmetry(eq, x).ok());
        }
    }
    const EquationSpec nlw = cat.get_equation("NLW").eq;
    VectorField bogus;
    bogus.xi = parse_nf("r^2");
    Report r = check_symmetry(nlw, bogus);
    CHECK(r.verdict == Verdict::Refuted);
    CHECK(!r.residual.is_zero());
    CHECK(!r.residual_terms().empty());
}

TEST_CASE("conditional symmetry and generic control")
{
    const Catalog& cat = Catalog::instance();
    const CatalogRow& row = cat.row("T2.row1");
    const EquationSpec eq = cat.get_equation(row.list("eq").front()).eq;
    Report r = check_symmetry(eq, cat.symmetry(row));
    CHECK(r.verdict == Verdict::ConditionallyVerified);
    REQUIRE(r.generic_verdict);
    CHECK(*r.generic_verdict == Verdict::Refuted);
}

TEST_CASE("conservation laws and multipliers")
{
    const Catalog& cat = Catalog::instance();
    const EquationSpec nlw = cat.get_equation("NLW").eq;
    const ConsLaw energy = cat.law(cat.row("T10.row1"));
    CHECK(check_conservation(nlw, energy).verdict == Verdict::Verified);
    NormalForm q = extract_multiplier(nlw, energy);
    CHECK(q == parse_nf("r^m*u_t"));
    CHECK(check_characteristic_identity(nlw, q, energy).ok());

    ConsLaw broken = energy;
    broken.psi_r = broken.psi_r + parse_nf("u");
    CHECK(check_conservation(nlw, broken).verdict == Verdict::Refuted);

    const EquationSpec nls = cat.get_equation("NLS").eq;
    const ConsLaw charge = cat.law(cat.row("T11.row1"));
    CHECK(check_conservation(nls, charge).verdict == Verdict::Verified);
    CHECK(check_characteristic_identity(nls, extract_multiplier(nls, charge), charge).ok());
}

TEST_CASE("Hamiltonian structure")
{
    const Catalog& cat = Catalog::instance();
    for (const std::string name : {"dNLS-H", "mKdV-H"}) {
        INFO(name);
        CHECK(check_hamiltonian_form(cat.get_equation(name)).verdict == Verdict::Verified);
    }
    Report nls = check_hamiltonian_form(cat.get_equation("NLS"));
    CHECK(nls.verdict == Verdict::Refuted);
    bool flipped = false;
    for (const auto& n : nls.notes) flipped = flipped || n.find("-i r^(-m)") != std::string::npos;
    CHECK(flipped);
    CHECK_THROWS(check_hamiltonian_form(cat.get_equation("NLW")));
}

TEST_CASE("algebra classes")
{
    const Catalog& cat = Catalog::instance();
    auto classify_of = [&](const std::string& name, std::vector<std::string> labels, const SideCondition& side) {
        auto gens = cat.generators(name);
        std::vector<VectorField> xs;
        for (const auto& l : labels) xs.push_back(gens.at(l).specialized(side));
        return classify(structure_constants(xs, cat.get_equation(name).eq.complex));
    };
    AlgebraClass a = classify_of("mKdV-1", {"X_trans", "X_scal"}, {});
    CHECK(a.group == "U(1) x| U(1)");
    CHECK(a.solvable);
    AlgebraClass b = classify_of("NLW", {"X_trans", "X_scal", "X_inver"}, {});
    CHECK(b.group == "SL(2,R)");
    CHECK(!b.solvable);
    CHECK(b.center_dimension == 0);
    AlgebraClass c = classify_of("NLS", {"X_trans", "X_scal", "X_phase"}, {});
    CHECK(c.group == "(U(1) x| U(1)) x U(1)");
    CHECK(c.center_dimension == 1);
}

TEST_CASE("scaling weights")
{
    const Catalog& cat = Catalog::instance();
    const VectorField xs = cat.generators("NLS").at("X_scal");
    ScalingResult l2 = scaling_weight(parse_nf("u*ubar"), xs, Coeff::var(Var::M));
    REQUIRE(l2.power);
    CHECK(*l2.power == parse_nf("4/(m+1)").constant_value());
    CHECK_THROWS_AS(scaling_weight(parse_nf("u*ubar + u_r*ubar_r"), xs, Coeff::var(Var::M)), std::invalid_argument);
    CHECK(solve_for_parameter(parse_nf("(a - 2)*u + (2*a - 4)*u_r"), Var::A) == std::vector<Coeff>{Coeff(2)});
}

TEST_CASE("determining systems")
{
    const Catalog& cat = Catalog::instance();
    DeterminingSystem ds = emit_determining_system(cat.get_equation("NLW").eq, Unknown::Symmetry);
    CHECK(!ds.equations.empty());
    CHECK_THROWS_AS(emit_determining_system(cat.get_equation("NLS").eq.specialized({{Var::P, Coeff(0)}}), Unknown::Symmetry),
                    std::invalid_argument);
}

TEST_CASE("report json")
{
    const Catalog& cat = Catalog::instance();
    Report r = check_conservation(cat.get_equation("NLW").eq, cat.law(cat.row("T10.row1")));
    const std::string js = to_json(r);
    CHECK(js.find("\"verdict\":\"verified\"") != std::string::npos);
    CHECK(js.find("\"sigma_branches\"") != std::string::npos);
}
