#include "doctest.h"
#include "semiwave/catalog.hpp"
#include "semiwave/parse.hpp"

using namespace semiwave;

TEST_CASE("total derivatives")
{
    CHECK(total_derivative(parse_nf("u^2"), Dir::R) == parse_nf("2*u*u_r"));
    CHECK(total_derivative(parse_nf("t*r^m"), Dir::R) == parse_nf("m*t*r^(m-1)"));
    CHECK(total_derivative(parse_nf("exp(u)"), Dir::T) == parse_nf("u_t*exp(u)"));
    CHECK(total_derivative(parse_nf("u*ubar"), Dir::T) == parse_nf("u_t*ubar + u*ubar_t"));
    CHECK(total_derivative(parse_nf("u_r"), Dir::R, 3) == parse_nf("u_rrrr"));
    CHECK(partial(parse_nf("t*u_r"), Dir::T) == parse_nf("u_r"));
    CHECK(partial(parse_nf("u_r^2*u"), JetVar{Dep::U, 0, 1}) == parse_nf("2*u_r*u"));
}

TEST_CASE("Euler operator")
{
    CHECK(variational_derivative(parse_nf("1/2*u_r^2"), Dep::U) == parse_nf("-u_rr"));
    CHECK(variational_derivative(parse_nf("1/2*(u_t^2 - u_r^2) + F(u,p+2)"), Dep::U) ==
          parse_nf("-u_tt + u_rr + u^(p+1)"));
    CHECK(variational_derivative(parse_nf("u_r*ubar_r"), Dep::Ubar) == parse_nf("-u_rr"));
    CHECK(variational_derivative(total_derivative(parse_nf("r^2*u^3*u_rr"), Dir::R), Dep::U).is_zero());
}

TEST_CASE("reduction modulo the equation")
{
    const EquationSpec nlw = Catalog::instance().get_equation("NLW").eq;
    NormalForm lap = parse_nf("u_rr + m*r^(-1)*u_r");
    CHECK(reduce_mod_equation(parse_nf("u_tt"), nlw) == lap + parse_nf("sigma*u^p"));
    CHECK(reduce_mod_equation(nlw.residual(), nlw).is_zero());
    CHECK(reduce_mod_equation(total_derivative(nlw.residual(), Dir::R), nlw).is_zero());

    const EquationSpec nls = Catalog::instance().get_equation("NLS").eq;
    CHECK(reduce_mod_equation(nls.residual(), nls).is_zero());
    CHECK(reduce_mod_equation(conjugate(nls.residual()), nls).is_zero());
}

TEST_CASE("characteristic and commutator")
{
    const auto gens = Catalog::instance().generators("NLW");
    const VectorField& trans = gens.at("X_trans");
    const VectorField& scal = gens.at("X_scal");
    CHECK(characteristic(trans) == parse_nf("-u_t"));
    VectorField c = commutator(trans, scal, false);
    CHECK(c.tau == trans.tau);
    CHECK(c.xi.is_zero());
    CHECK(c.eta.is_zero());
}

TEST_CASE("side conditions merge")
{
    SideCondition a{{Var::M, Coeff(0)}};
    SideCondition b{{Var::P, Coeff(2)}};
    auto ab = merge_side_conditions(a, b);
    REQUIRE(ab);
    CHECK(ab->size() == 2);
    CHECK(!merge_side_conditions(a, {{Var::M, Coeff(1)}}));
}
