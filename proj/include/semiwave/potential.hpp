#pragma once

#include <optional>
#include <string>
#include <vector>

#include "semiwave/catalog.hpp"
#include "semiwave/verification.hpp"

namespace semiwave {

/// v_r = -r^m psi_t, v_t = r^m psi_r (AsWritten), or the same with v -> -v.
enum class Orientation { AsWritten, Negated };

struct PotentialRelation {
    Dep potential = Dep::V;
    NormalForm v_r;
    NormalForm v_t;
};

struct PotentialSystem {
    EquationSpec base;
    /// Bindings under which the system was built (m, p; sigma when fixed).
    SideCondition side;
    /// First entry is v; a second-level system adds w.
    std::vector<PotentialRelation> potentials;
    std::vector<std::string> notes;

    /// Eliminate derivatives of every potential, then the equation's leading jets.
    NormalForm reduce(const NormalForm& e) const;
    /// D_t(v_r) - D_r(v_t) for each potential, reduced.
    std::vector<NormalForm> consistency_residuals() const;
    PotentialSystem specialized(const SideCondition& b) const;
};

/// Throws std::invalid_argument when the cross-derivatives do not agree.
PotentialSystem build_potential_system(const EquationSpec& eq, const ConsLaw& law,
                                       Orientation o = Orientation::AsWritten);

/// Potential-system catalog row (T22): the system stated in the row.
PotentialSystem potential_system_of_row(const CatalogRow& row);

/// D_t psi_t + D_r psi_r reduced by the system, on both eps branches. The
/// r-weights are part of psi as written.
Report check_nonlocal_conservation(const PotentialSystem& ps, const ConsLaw& law, const CheckOptions& opt = {});

/// True when the reduced expression still depends on an undifferentiated potential.
bool is_nonlocal(const PotentialSystem& ps, const NormalForm& e);

/// Adjoins w with w_r = -psi_t, w_t = psi_r (or negated). Throws
/// std::invalid_argument for psi_t = 0 or an inconsistent law.
PotentialSystem second_level_potentiate(const PotentialSystem& ps, const ConsLaw& law,
                                        Orientation o = Orientation::AsWritten);

/// Potential-system row with m left free: values of m making the row's potential
/// system consistent, and values (from `candidates` and from the residuals)
/// at which `law` holds.
struct MScan {
    std::vector<Coeff> consistent_at;
    std::vector<Coeff> holds_at;
    std::vector<Coeff> tried;
};
MScan scan_m(const CatalogRow& row, const ConsLaw& law, const std::vector<Coeff>& candidates);

/// Ansatz search for a conservation law of ps with density r^j exp(k w),
/// flux exp(k w) * sum c_i M_i over the given monomials. k is symbolic;
/// returns the k values (nonzero) admitting a solution.
struct AnsatzResult {
    std::vector<Coeff> exponents;
    std::vector<std::string> laws;
};
/// Exponential ansatz on a row's potential system (level 1, potential v) or on
/// the second-level system built from the row's verified law (level 2,
/// potential w): densities r^j exp(k .) for j = 0, 1, 2, fluxes over
/// r^(j-2..j+1) times low-order u-monomials (times exp(n eps sqrt2 v) at
/// level 2). Uses the corrected law when the printed one fails.
AnsatzResult tabulated_ansatz_search(const CatalogRow& row, int sigma, int level);

AnsatzResult search_exponential_laws(const PotentialSystem& ps, Dep potential, const NormalForm& r_factor,
                                     const std::vector<NormalForm>& flux_monomials);

}  // namespace semiwave
