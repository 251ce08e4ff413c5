#pragma once

#include <random>

#include "semiwave/expr.hpp"

namespace semiwave::testing {

class RandomExpr {
public:
    RandomExpr(unsigned seed, bool complex) : rng_(seed), complex_(complex) {}

    Expr leaf()
    {
        switch (pick(10)) {
        case 0: return Expr::t();
        case 1: return Expr::r();
        case 2: return Coeff(pick(7) - 3, 1 + pick(3));
        case 3: return Coeff::var(pick(2) ? Var::P : Var::M);
        default: {
            Dep d = complex_ && pick(2) ? Dep::Ubar : Dep::U;
            return Expr::jet(d, pick(3) == 0 ? 1 : 0, pick(3));
        }
        }
    }

    Expr tree(int depth)
    {
        if (depth == 0) return leaf();
        switch (pick(6)) {
        case 0:
        case 1: return Expr::sum({tree(depth - 1), tree(depth - 1)});
        case 2:
        case 3: return Expr::product({tree(depth - 1), tree(depth - 1)});
        case 4: {
            Coeff q = pick(2) ? Coeff(pick(3) + 2) : Coeff::var(Var::P);
            return Expr::power(Expr::jet(complex_ && pick(2) ? Dep::Ubar : Dep::U, 0, pick(2)), q);
        }
        default:
            if (complex_ && pick(2)) return Expr::product({Coeff::var(Var::I), tree(depth - 1)});
            return pick(2) ? Expr::exp(Expr::product({Coeff(pick(3) + 1), Expr::r()})) : Expr::ln(Expr::r());
        }
    }

    NormalForm nf(int depth) { return normalize(tree(depth)); }

private:
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
    std::mt19937 rng_;
    bool complex_;
};

}  // namespace semiwave::testing
