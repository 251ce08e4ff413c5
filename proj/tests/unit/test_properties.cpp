#include "doctest.h"
#include "random_expr.hpp"
#include "semiwave/jet.hpp"
#include "semiwave/parse.hpp"

using namespace semiwave;
using semiwave::testing::RandomExpr;

TEST_CASE("property: Euler operator annihilates total divergences")
{
    int failures = 0;
    for (unsigned k = 0; k < 200; ++k) {
        RandomExpr gen(1000 + k, k % 2 == 1);
        NormalForm f = gen.nf(3), g = gen.nf(3);
        while (variational_derivative(f, Dep::U).is_zero()) f = gen.nf(3);
        NormalForm div = total_derivative(f, Dir::T) + total_derivative(g, Dir::R);
        if (!variational_derivative(div, Dep::U).is_zero() || !variational_derivative(div, Dep::Ubar).is_zero()) {
            ++failures;
            INFO("f = ", print(f), ", g = ", print(g));
            CHECK(false);
        }
    }
    CHECK(failures == 0);
}

TEST_CASE("property: D_t and D_r commute")
{
    for (unsigned k = 0; k < 200; ++k) {
        RandomExpr gen(2000 + k, k % 3 == 0);
        NormalForm e = gen.nf(3);
        INFO(print(e));
        CHECK(total_derivative(total_derivative(e, Dir::T), Dir::R) ==
              total_derivative(total_derivative(e, Dir::R), Dir::T));
    }
}

TEST_CASE("property: parse and print round-trip")
{
    for (unsigned k = 0; k < 500; ++k) {
        RandomExpr gen(3000 + k, k % 2 == 0);
        Expr e = gen.tree(3);
        const std::string tree_text = print(e);
        INFO(tree_text);
        CHECK(normalize(parse(tree_text)) == normalize(e));
        const NormalForm nf = normalize(e);
        CHECK(parse_nf(print(nf)) == nf);
    }
}

TEST_CASE("property: conjugation is an involution")
{
    for (unsigned k = 0; k < 200; ++k) {
        RandomExpr gen(4000 + k, true);
        Expr e = gen.tree(3);
        NormalForm nf = normalize(e);
        INFO(print(nf));
        CHECK(conjugate(conjugate(nf)) == nf);
        CHECK(normalize(conjugate(conjugate(e))) == nf);
        CHECK(normalize(conjugate(e)) == conjugate(nf));
    }
}
