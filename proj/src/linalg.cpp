#include "semiwave/linalg.hpp"

#include <map>

namespace semiwave {

namespace {

/// Row-reduce [a | b] in place; returns pivot columns.
std::vector<int> eliminate(CMat& a, CVec* b, int ncols)
{
    std::vector<int> pivots;
    std::size_t row = 0;
    for (int col = 0; col < ncols && row < a.size(); ++col) {
        std::size_t piv = row;
        while (piv < a.size() && a[piv][col].is_zero()) ++piv;
        if (piv == a.size()) continue;
        std::swap(a[piv], a[row]);
        if (b) std::swap((*b)[piv], (*b)[row]);
        Coeff inv = a[row][col].inverse();
        for (int k = col; k < ncols; ++k) a[row][k] = a[row][k] * inv;
        if (b) (*b)[row] = (*b)[row] * inv;
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == row || a[r][col].is_zero()) continue;
            Coeff f = a[r][col];
            for (int k = col; k < ncols; ++k) a[r][k] = a[r][k] - f * a[row][k];
            if (b) (*b)[r] = (*b)[r] - f * (*b)[row];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

LinearSolution solve_linear_system(CMat a, CVec b)
{
    LinearSolution out;
    int ncols = a.empty() ? 0 : static_cast<int>(a.front().size());
    auto pivots = eliminate(a, &b, ncols);
    out.rank = static_cast<int>(pivots.size());
    out.consistent = true;
    for (std::size_t r = pivots.size(); r < b.size(); ++r)
        if (!b[r].is_zero()) {
            out.consistent = false;
            out.obstructions.push_back(b[r]);
        }
    out.particular.assign(ncols, Coeff(0));
    for (std::size_t k = 0; k < pivots.size(); ++k) out.particular[pivots[k]] = b[k];
    std::vector<bool> is_pivot(ncols, false);
    for (int p : pivots) is_pivot[p] = true;
    for (int f = 0; f < ncols; ++f) {
        if (is_pivot[f]) continue;
        CVec v(ncols, Coeff(0));
        v[f] = Coeff(1);
        for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -a[k][f];
        out.nullspace.push_back(std::move(v));
    }
    return out;
}

int matrix_rank(CMat a)
{
    int ncols = a.empty() ? 0 : static_cast<int>(a.front().size());
    return static_cast<int>(eliminate(a, nullptr, ncols).size());
}

std::vector<CVec> nullspace(const CMat& a, int ncols)
{
    CMat m = a;
    if (m.empty()) m.push_back(CVec(ncols, Coeff(0)));
    return solve_linear_system(m, CVec(m.size(), Coeff(0))).nullspace;
}

CMat coefficient_matrix(const std::vector<NormalForm>& columns, std::vector<Monomial>* monomials)
{
    std::map<Monomial, std::size_t> index;
    std::vector<Monomial> order;
    for (const auto& c : columns)
        for (const auto& [m, _] : c.terms())
            if (index.emplace(m, order.size()).second) order.push_back(m);
    CMat out(order.size(), CVec(columns.size(), Coeff(0)));
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (const auto& [m, c] : columns[j].terms()) out[index[m]][j] = c;
    if (monomials) *monomials = std::move(order);
    return out;
}

std::optional<CVec> coefficients_on(const NormalForm& e, const std::vector<Monomial>& monomials)
{
    CVec out(monomials.size(), Coeff(0));
    std::size_t found = 0;
    for (std::size_t k = 0; k < monomials.size(); ++k) {
        auto it = e.terms().find(monomials[k]);
        if (it != e.terms().end()) {
            out[k] = it->second;
            ++found;
        }
    }
    if (found != e.terms().size()) return std::nullopt;
    return out;
}

}  // namespace semiwave
