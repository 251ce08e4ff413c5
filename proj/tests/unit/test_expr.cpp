#include "doctest.h"

#include "semiwave/parse.hpp"

using namespace semiwave;

TEST_CASE("poly gcd")
{
    Poly p = Poly::variable(Var::P);
    Poly one(Coeff(1).num());
    Poly a = (p + one) * (p - one);
    Poly b = (p + one) * (p + one);
    CHECK(gcd(a, b) == p + one);
}

TEST_CASE("coeff canonical form")
{
    Coeff p = Coeff::var(Var::P);
    Coeff x = (p * p - Coeff(1)) / (p - Coeff(1));
    CHECK(x == p + Coeff(1));
    CHECK((Coeff(2) / Coeff(4)) == Coeff(1, 2));
    Coeff i = Coeff::var(Var::I);
    CHECK((Coeff(1) / i) == -i);
    Coeff s2 = Coeff::var(Var::Sqrt2);
    CHECK(s2 * s2 == Coeff(2));
    CHECK((Coeff(1) / (Coeff(1) + s2)) == s2 - Coeff(1));
}

TEST_CASE("normalize examples")
{
    CHECK(parse_nf("u^p*u - u^(p+1)").is_zero());
    CHECK(parse_nf("i*i*u + u").is_zero());
    CHECK(parse_nf("eps^2*u^3 + sigma*u^3").is_zero());
    CHECK(!parse_nf("u_t - u_r").is_zero());
    CHECK(parse_nf("0").is_zero());
}

TEST_CASE("parse")
{
    CHECK(print(parse("u_r")) == "u_r");
    CHECK(print(parse("u_t")) == "u_t");
    CHECK(parse_nf("F(u,0)") == parse_nf("ln(u)"));
    CHECK(parse_nf("F(u,p+1)") == parse_nf("1/(p+1)*u^(p+1)"));
    CHECK(parse_nf("abs(u)^p") == parse_nf("(u*ubar)^(p/2)"));
    CHECK_THROWS_AS(parse("u +* 2"), ParseError);
    try {
        parse("u + foo");
        FAIL("expected error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 4);
    }
    CHECK_THROWS_AS(parse("F(u,p-p)", {false}), ParseError);
}

TEST_CASE("print round trip")
{
    for (const char* s : {"1/2*(u_t^2+u_r^2) - F(u,p+1)", "u^p*u", "-i*(u_rr + m*r^(-1)*u_r)", "r^(-m/2)*u",
                          "exp(eps*sqrt2*v)*(u^2 - sqrt2*u_r)/3", "abs(u)^(-2)*F(abs(u),p+2)", "ln(u)-ln(r)"}) {
        NormalForm a = parse_nf(s);
        std::string txt = print(a);
        INFO(s, " -> ", txt);
        CHECK((parse_nf(txt) - a).is_zero());
    }
}

TEST_CASE("substitute and conjugate")
{
    Bindings b;
    b.jets[{Dep::U, 0, 0}] = Expr::t();
    CHECK(substitute(parse_nf("u^2"), b) == parse_nf("t^2"));
    Bindings c;
    c.params[Var::M] = Coeff(4) / (Coeff::var(Var::P) - Coeff(1));
    CHECK(substitute(parse_nf("m*u"), c) == parse_nf("4/(p-1)*u"));
    Bindings d;
    d.params[Var::M] = Coeff(2);
    CHECK(substitute(parse_nf("r^m"), d) == parse_nf("r^2"));
    CHECK(conjugate(parse_nf("i*u")) == parse_nf("-i*ubar"));
    CHECK(conjugate(parse_nf("u*ubar")) == parse_nf("u*ubar"));
    Bindings bad;
    bad.jets[{Dep::U, 0, 0}] = parse("u+1");
    CHECK_THROWS(substitute(parse_nf("u"), bad));
}

TEST_CASE("eval")
{
    EvalPoint at;
    at.jets[{Dep::U, 0, 0}] = 3.0;
    CHECK(eval_numeric(parse_nf("u^2"), at).real() == doctest::Approx(9));
    at.jets[{Dep::U, 0, 0}] = 2.0;
    at.params[Var::P] = 1;
    CHECK(eval_numeric(parse_nf("F(u,p+1)"), at).real() == doctest::Approx(2));
}
