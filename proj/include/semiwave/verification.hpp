#pragma once

#include <optional>
#include <string>
#include <vector>

#include "semiwave/catalog.hpp"
#include "semiwave/linalg.hpp"

namespace semiwave {

enum class Verdict { Verified, Refuted, ConditionallyVerified };
const char* verdict_name(Verdict v);

struct Report {
    std::string subject;
    Verdict verdict = Verdict::Refuted;
    /// Side condition the verdict was obtained under.
    SideCondition side;
    /// Residual on the first failing branch (empty when verified).
    NormalForm residual;
    std::vector<int> sigma_branches;
    double millis = 0.0;
    /// Conditional subjects only: verdict with the side condition dropped.
    std::optional<Verdict> generic_verdict;
    std::vector<std::string> notes;

    bool ok() const { return verdict != Verdict::Refuted; }
    std::vector<std::string> residual_terms(std::size_t limit = 12) const;
};

/// One JSON object: subject, verdict, side_condition, residual_terms,
/// sigma_branches, millis (plus generic_verdict and notes when present).
std::string to_json(const Report& r);

struct CheckOptions {
    std::vector<int> sigma_branches{1, -1};
    /// For conditional subjects, also run with the side condition dropped.
    bool generic_control = true;
};

Report check_symmetry(const EquationSpec& eq, const VectorField& x, const CheckOptions& opt = {});
Report check_conservation(const EquationSpec& eq, const ConsLaw& law, const CheckOptions& opt = {});

/// Multiplier of a law (characteristic): d/du_t for WEa, d/du for real
/// evolution equations, -i d/du for complex ones, of r^m psi_t over {r}.
NormalForm extract_multiplier(const EquationSpec& eq, const ConsLaw& law);
Report check_characteristic_identity(const EquationSpec& eq, const NormalForm& q, const ConsLaw& law,
                                     const CheckOptions& opt = {});

/// Hamiltonian structure: rhs against D(delta(r^m H)/delta ubar) plus a
/// skew-adjointness certificate for D in the unweighted dr pairing.
Report check_hamiltonian_form(const CatalogEntry& entry, const CheckOptions& opt = {});

/// Divergence-free check of a density alone: r^m D_t(density), reduced,
/// must be annihilated by the Euler operators in r.
Report check_density(const EquationSpec& eq, const std::string& subject, const NormalForm& density,
                     const SideCondition& side, const CheckOptions& opt = {});

// ---------------------------------------------------------------------------
// Lie algebra structure

struct BracketEntry {
    std::size_t i = 0, j = 0;
    CVec coefficients;  // [X_i, X_j] = sum_k c_k X_k
};

struct StructureTable {
    std::vector<std::string> labels;
    SideCondition side;
    std::vector<BracketEntry> brackets;
    /// c[i][j][k]
    std::vector<std::vector<CVec>> constants() const;
};

/// Throws std::runtime_error naming the bracket when the span does not close.
StructureTable structure_constants(const std::vector<VectorField>& generators, bool complex);

struct AlgebraClass {
    int dimension = 0;
    bool solvable = false;
    int center_dimension = 0;
    int killing_rank = 0;
    int derived_dimension = 0;
    /// "U(1) x| U(1)", "SL(2,R)", "(U(1) x| U(1)) x U(1)", "SL(2,R) x U(1)", or "other".
    std::string group;
};
AlgebraClass classify(const StructureTable& t);

// ---------------------------------------------------------------------------
// Scaling and critical powers

struct ScalingResult {
    Coeff weight;                // w
    std::optional<Coeff> power;  // p solving w + 1 = 0 (the dr measure)
};
/// Throws std::invalid_argument when the density is not homogeneous.
ScalingResult scaling_weight(const NormalForm& density, const VectorField& x_scal, const Coeff& weight_exponent);

/// Values of `v` making every coefficient of `residual` vanish.
std::vector<Coeff> solve_for_parameter(const NormalForm& residual, Var v);

// ---------------------------------------------------------------------------
// Determining systems

enum class Unknown { Symmetry, Multiplier };
struct DeterminingSystem {
    std::vector<std::string> equations;
    /// Substitute concrete unknowns and test every equation vanishes.
    std::vector<NormalForm> residuals_for(const std::vector<NormalForm>& values) const;
    std::vector<NormalForm> raw;
    std::vector<std::string> unknown_names;
    bool complex = false;
};
/// Throws std::invalid_argument for a linear equation (p = 0) or k > 2.
DeterminingSystem emit_determining_system(const EquationSpec& eq, Unknown kind, int order = 0);

}  // namespace semiwave
