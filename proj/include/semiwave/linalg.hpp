#pragma once

#include <vector>

#include "semiwave/expr.hpp"

namespace semiwave {

using CVec = std::vector<Coeff>;
using CMat = std::vector<CVec>;

struct LinearSolution {
    bool consistent = false;
    CVec particular;
    std::vector<CVec> nullspace;
    int rank = 0;
    /// Nonzero right-hand sides left in zero rows after elimination.
    CVec obstructions;
};

/// Exact Gaussian elimination for A x = b over the coefficient field.
/// Pivots must be invertible; specialize sigma before calling.
LinearSolution solve_linear_system(CMat a, CVec b);
int matrix_rank(CMat a);
std::vector<CVec> nullspace(const CMat& a, int ncols);

/// Rows indexed by the union of monomials of `columns`, one column per input.
CMat coefficient_matrix(const std::vector<NormalForm>& columns, std::vector<Monomial>* monomials = nullptr);
/// Coefficients of `e` on the given monomials; nullopt if e has others.
std::optional<CVec> coefficients_on(const NormalForm& e, const std::vector<Monomial>& monomials);

}  // namespace semiwave
