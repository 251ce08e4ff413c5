#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semiwave/catalog.hpp"
#include "semiwave/verification.hpp"

namespace semiwave {

/// Verdict for one catalog row, combined over the equations it lists.
struct RowResult {
    std::string row_id;
    Verdict verdict = Verdict::Refuted;
    SideCondition side;
    std::vector<Report> reports;
    /// Verdict of the row's corrected variant, when the catalog carries one.
    std::optional<Verdict> corrected;
    std::vector<std::string> notes;

    bool ok() const { return verdict != Verdict::Refuted; }
};

/// Dispatches on the table: symmetry (T1-T6), conformal power (T7),
/// algebra class (T8), subalgebra generators (T9), conservation (T10-T16),
/// critical and dilation powers (T17-T21), potential systems (T22).
RowResult verify_row(const CatalogRow& row, const CheckOptions& opt = {});

/// "all", "T<n>" or "T<n>.row<k>". Throws std::out_of_range for an unknown scope.
std::vector<const CatalogRow*> scope_rows(const std::string& scope);

/// Rows verified concurrently; results in catalog order.
std::vector<RowResult> verify_scope(const std::string& scope, const CheckOptions& opt = {}, int jobs = 1);

/// Deterministic JSON: no timings.
std::string to_json(const RowResult& r);
std::string to_json(const std::vector<RowResult>& rs);

/// The equation's inversion generator; the corrected catalog variant when the
/// printed one is not a symmetry (a note is appended).
VectorField effective_inversion(const std::string& name, std::vector<std::string>& notes);

/// weight * e[u] + scale * extra for a dilation-table row.
NormalForm dilation_density(const CatalogRow& row, const NormalForm& scale);
/// Factor on the row's extra term making the dilational density conserved at
/// the row's power (1 when the printed row holds).
std::optional<Coeff> dilation_extra_scale(const CatalogRow& row, const CheckOptions& opt = {});

/// Linear combination "X_a + c*X_b - X_c" of an equation's generators.
VectorField generator_combination(const std::string& name, const std::string& combo);
VectorField combine_generators(const std::map<std::string, VectorField>& gens, bool complex, const std::string& combo);

}  // namespace semiwave
