#include "doctest.h"
#include "semiwave/parse.hpp"
#include "semiwave/potential.hpp"

using namespace semiwave;

TEST_CASE("potential system of the mass law")
{
    const Catalog& cat = Catalog::instance();
    const CatalogRow& row = cat.row("T22.row1");
    PotentialSystem ps = potential_system_of_row(row);
    REQUIRE(ps.potentials.size() == 1);
    CHECK(ps.potentials[0].v_r == parse_nf("u"));
    for (const NormalForm& res : ps.consistency_residuals()) CHECK(res.is_zero());
    CHECK(is_nonlocal(ps, parse_nf("exp(v)*u")));
    CHECK(!is_nonlocal(ps, parse_nf("v_r^2")));
    CHECK(ps.reduce(parse_nf("v_r")) == parse_nf("u"));
}

TEST_CASE("printed and corrected nonlocal laws")
{
    const Catalog& cat = Catalog::instance();
    for (const char* id : {"T22.row1", "T22.row2"}) {
        const CatalogRow& row = cat.row(id);
        PotentialSystem ps = potential_system_of_row(row);
        INFO(std::string(id));
        CHECK(check_nonlocal_conservation(ps, cat.law(row)).verdict == Verdict::Refuted);
        auto fixed = cat.corrected_law(row);
        REQUIRE(fixed);
        CHECK(check_nonlocal_conservation(ps, *fixed).ok());
    }
}

TEST_CASE("stated m of the third row is inconsistent; m = 3 works")
{
    const Catalog& cat = Catalog::instance();
    const CatalogRow& row = cat.row("T22.row3");
    bool inconsistent = false;
    for (const NormalForm& res : potential_system_of_row(row).consistency_residuals())
        inconsistent = inconsistent || !res.is_zero();
    CHECK(inconsistent);
    MScan scan = scan_m(row, *cat.corrected_law(row), {row.side.at(Var::M)});
    CHECK(scan.consistent_at == std::vector<Coeff>{Coeff(3)});
    CHECK(scan.holds_at == std::vector<Coeff>{Coeff(3)});
}

TEST_CASE("orientation and build errors")
{
    const Catalog& cat = Catalog::instance();
    const EquationSpec eq = cat.get_equation("mKdV-1").eq.specialized({{Var::M, Coeff(0)}, {Var::P, Coeff(2)}});
    ConsLaw mass = cat.law(cat.row("T15.row1"));
    mass.side = {{Var::M, Coeff(0)}, {Var::P, Coeff(2)}};
    PotentialSystem a = build_potential_system(eq, mass);
    PotentialSystem b = build_potential_system(eq, mass, Orientation::Negated);
    CHECK(a.potentials[0].v_r == -b.potentials[0].v_r);
    ConsLaw broken = mass;
    broken.psi_r = broken.psi_r + parse_nf("u");
    CHECK_THROWS_AS(build_potential_system(eq, broken), std::invalid_argument);
    ConsLaw empty;
    empty.psi_r = parse_nf("u");
    CHECK_THROWS_AS(second_level_potentiate(a, empty), std::invalid_argument);
}

TEST_CASE("exponential ansatz")
{
    const Catalog& cat = Catalog::instance();
    for (int sigma : {1, -1}) {
        AnsatzResult first = tabulated_ansatz_search(cat.row("T22.row1"), sigma, 1);
        const Coeff k = sigma == 1 ? Coeff::var(Var::I) * Coeff::var(Var::Sqrt2) : Coeff::var(Var::Sqrt2);
        CHECK(first.exponents.size() == 2);
        CHECK(std::find(first.exponents.begin(), first.exponents.end(), k) != first.exponents.end());
        CHECK(std::find(first.exponents.begin(), first.exponents.end(), -k) != first.exponents.end());
        for (const char* id : {"T22.row1", "T22.row2", "T22.row3"})
            CHECK(tabulated_ansatz_search(cat.row(id), sigma, 2).exponents.empty());
    }
}
