#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semiwave/jet.hpp"

namespace semiwave {

/// One table row as stored in the catalog data file.
struct CatalogRow {
    std::string table;  // "T10"
    std::string id;     // "row1"
    std::vector<std::pair<std::string, std::string>> fields;
    SideCondition side;
    /// Values excluded by "m != ..." conditions.
    SideCondition excluded;
    std::string side_text;
    std::string remarks;

    std::string full_id() const { return table + "." + id; }
    bool has(const std::string& field) const;
    const std::string& text(const std::string& field) const;
    NormalForm expr(const std::string& field) const;
    /// Comma-separated list field (equation names, generator names).
    std::vector<std::string> list(const std::string& field, char sep = ',') const;
};

struct ConsLaw {
    std::string id;
    NormalForm psi_t;
    NormalForm psi_r;
    SideCondition side;
    std::string label;
};

enum class HamiltonianOperator { MultiplicationByI, RadialWeightedDerivative };

struct Hamiltonian {
    NormalForm density;
    HamiltonianOperator op;
};

struct CatalogEntry {
    EquationSpec eq;
    std::optional<NormalForm> lagrangian;
    std::optional<Hamiltonian> hamiltonian;
    std::optional<NormalForm> energy_density;
    std::vector<VectorField> symmetries;
    std::vector<ConsLaw> conservation_laws;
    /// Subalgebra rows (T9) whose equation list contains this equation.
    std::vector<std::string> subalgebra_rows;
};

enum class PowerKind { Conformal, Dilation, EnergyCritical, L2Critical, HsCritical };
const char* power_kind_name(PowerKind k);
std::optional<PowerKind> power_kind_from_name(const std::string& s);

class Catalog {
public:
    static const Catalog& instance();
    /// Parse catalog text in the line format of data/catalog.txt.
    static Catalog from_text(const std::string& text);

    const std::vector<CatalogRow>& rows() const { return rows_; }
    std::vector<std::string> table_ids() const;
    /// Rows of T1..T22; throws std::out_of_range for unknown ids.
    std::vector<const CatalogRow*> list_table(const std::string& table_id) const;
    const CatalogRow& row(const std::string& full_id) const;

    static const std::vector<std::string>& equation_names();
    /// Entry with sigma symbolic.
    CatalogEntry get_equation(const std::string& name) const;
    /// Entry with sigma (and eps) specialized to the given branch.
    CatalogEntry get_equation(const std::string& name, int sigma) const;

    VectorField symmetry(const CatalogRow& row) const;
    ConsLaw law(const CatalogRow& row) const;
    /// Row with its fixed_* fields substituted; nullopt when the row has none.
    std::optional<VectorField> corrected_symmetry(const CatalogRow& row) const;
    std::optional<ConsLaw> corrected_law(const CatalogRow& row) const;
    /// X_trans, X_scal, X_phase (complex equations), X_inver (where one exists).
    std::map<std::string, VectorField> generators(const std::string& name) const;

    /// Exact table formula. Throws std::domain_error for an excluded m and
    /// std::invalid_argument when the kind does not apply to the equation.
    Coeff special_power(const std::string& name, PowerKind kind, const Coeff& m,
                        const std::optional<Coeff>& s = std::nullopt) const;
    /// Critical Sobolev index for a given power.
    Coeff critical_s(const std::string& name, const Coeff& m, const Coeff& p) const;
    /// Symbolic formula (in m, and s for HsCritical) with its row.
    const CatalogRow& power_row(const std::string& name, PowerKind kind) const;

private:
    std::vector<CatalogRow> rows_;
    std::vector<const CatalogRow*> rows_for(const std::string& table, const std::string& eq) const;
};

/// Bindings for one sigma branch: sigma -> s and eps -> sqrt(-s).
SideCondition sigma_branch(int sigma);

}  // namespace semiwave
