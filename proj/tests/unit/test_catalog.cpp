#include "doctest.h"
#include "semiwave/catalog.hpp"
#include "semiwave/parse.hpp"

using namespace semiwave;

namespace {
Coeff q(const char* s) { return parse_nf(s).constant_value(); }
}  // namespace

TEST_CASE("catalog contents")
{
    const Catalog& cat = Catalog::instance();
    CHECK(Catalog::equation_names().size() == 7);
    CHECK(cat.table_ids().size() == 22);
    CHECK(cat.list_table("T1").size() == 4);
    CHECK(cat.list_table("T10").size() == 5);
    CHECK(cat.list_table("T22").size() == 3);
    CHECK_THROWS_AS(cat.list_table("T23"), std::out_of_range);
    CHECK_THROWS_AS(cat.get_equation("KdV"), std::invalid_argument);
    CHECK(cat.row("T8.row2").remarks.rfind("SL(2,R)", 0) == 0);
}

TEST_CASE("equation classes")
{
    const Catalog& cat = Catalog::instance();
    CHECK(cat.get_equation("NLW").eq.cls == EqClass::WEa);
    CHECK(cat.get_equation("NLS").eq.cls == EqClass::WEb);
    CHECK(cat.get_equation("mKdV-H").eq.cls == EqClass::WEc);
    CHECK(cat.get_equation("dNLS").eq.complex);
    CHECK(!cat.get_equation("mKdV-1").eq.complex);
    CHECK(cat.get_equation("NLS", 1).eq.rhs == substitute_params(cat.get_equation("NLS").eq.rhs, sigma_branch(1)));
}

TEST_CASE("special powers")
{
    const Catalog& cat = Catalog::instance();
    CHECK(cat.special_power("NLW", PowerKind::Conformal, Coeff(3)) == q("7/3"));
    CHECK(cat.special_power("NLW", PowerKind::EnergyCritical, Coeff(3)) == Coeff(3));
    CHECK(cat.special_power("NLW", PowerKind::L2Critical, Coeff(3)) == Coeff(2));
    CHECK(cat.special_power("NLW", PowerKind::Dilation, Coeff(3)) == q("7/3"));
    CHECK(cat.special_power("NLS", PowerKind::Conformal, Coeff(3)) == Coeff(1));
    CHECK(cat.special_power("NLS", PowerKind::HsCritical, Coeff(3), Coeff(1)) == Coeff(2));
    CHECK_THROWS_AS(cat.special_power("NLS", PowerKind::EnergyCritical, Coeff(1)), std::domain_error);
    CHECK(cat.critical_s("NLS", Coeff(3), Coeff(2)) == Coeff(1));
}

TEST_CASE("corrected variants are stored beside the printed rows")
{
    const Catalog& cat = Catalog::instance();
    CHECK(cat.corrected_symmetry(cat.row("T3.row1")).has_value());
    CHECK(!cat.corrected_symmetry(cat.row("T1.row1")).has_value());
    CHECK(cat.corrected_law(cat.row("T22.row1")).has_value());
    CHECK(cat.row("T17.row2").has("fixed_density"));
}

TEST_CASE("catalog text errors")
{
    CHECK_THROWS(Catalog::from_text("T1 | row1 | eta = u\n"));
    CHECK_THROWS(Catalog::from_text("T1 | row1 | eta u | |\n"));
    CHECK_THROWS(Catalog::instance().row("T1.row1").expr("no_such_field"));
}
