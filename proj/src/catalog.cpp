#include "semiwave/catalog.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "semiwave/parse.hpp"

namespace semiwave {

namespace {

const char kCatalogText[] =
#include "catalog_data.inc"
    ;

std::string trim(std::string_view s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
    return out;
}

Var param_var(const std::string& name)
{
    if (name == "m") return Var::M;
    if (name == "p") return Var::P;
    if (name == "s") return Var::S;
    throw std::invalid_argument("catalog: unsupported side-condition symbol '" + name + "'");
}

Coeff parse_constant(const std::string& text)
{
    NormalForm n = parse_nf(text);
    if (!n.is_constant()) throw std::invalid_argument("catalog: non-constant value '" + text + "'");
    return n.constant_value();
}

void parse_side(CatalogRow& row, const std::string& text)
{
    row.side_text = text;
    if (text.empty()) return;
    for (const auto& part : split(text, ',')) {
        auto ne = part.find("!=");
        if (ne != std::string::npos) {
            row.excluded[param_var(trim(part.substr(0, ne)))] = parse_constant(part.substr(ne + 2));
            continue;
        }
        auto eq = part.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("catalog: malformed side condition '" + part + "'");
        row.side[param_var(trim(part.substr(0, eq)))] = parse_constant(part.substr(eq + 1));
    }
}

const std::map<std::string, std::string>& energy_rows()
{
    static const std::map<std::string, std::string> m = {
        {"NLW", "T10.row1"}, {"NLS", "T11.row2"}, {"dNLS", "T12.row2"},
        {"dNLS-H", "T13.row3"}, {"mKdV-H", "T14.row2"}};
    return m;
}

const std::map<std::string, std::string>& inversion_rows()
{
    static const std::map<std::string, std::string> m = {
        {"NLW", "T2.row2"}, {"NLS", "T3.row2"}, {"mKdV-2", "T5.row2"}, {"mKdV-H", "T6.row2"}};
    return m;
}

std::string power_table(PowerKind k)
{
    switch (k) {
        case PowerKind::Conformal: return "T7";
        case PowerKind::Dilation: return "T18";
        case PowerKind::EnergyCritical: return "T17";
        case PowerKind::L2Critical: return "T20";
        case PowerKind::HsCritical: return "T21";
    }
    return "";
}

}  // namespace

bool CatalogRow::has(const std::string& field) const
{
    return std::any_of(fields.begin(), fields.end(), [&](const auto& f) { return f.first == field; });
}

const std::string& CatalogRow::text(const std::string& field) const
{
    for (const auto& [k, v] : fields)
        if (k == field) return v;
    throw std::out_of_range(full_id() + " has no field '" + field + "'");
}

NormalForm CatalogRow::expr(const std::string& field) const
{
    try {
        return parse_nf(text(field));
    } catch (const ParseError& e) {
        throw std::runtime_error(full_id() + "." + field + ": " + e.what());
    }
}

std::vector<std::string> CatalogRow::list(const std::string& field, char sep) const
{
    return split(text(field), sep);
}

const char* power_kind_name(PowerKind k)
{
    switch (k) {
        case PowerKind::Conformal: return "conformal";
        case PowerKind::Dilation: return "dilation";
        case PowerKind::EnergyCritical: return "energy-critical";
        case PowerKind::L2Critical: return "L2-critical";
        case PowerKind::HsCritical: return "Hs-critical";
    }
    return "?";
}

std::optional<PowerKind> power_kind_from_name(const std::string& s)
{
    for (auto k : {PowerKind::Conformal, PowerKind::Dilation, PowerKind::EnergyCritical, PowerKind::L2Critical,
                   PowerKind::HsCritical})
        if (s == power_kind_name(k)) return k;
    return std::nullopt;
}

Catalog Catalog::from_text(const std::string& text)
{
    Catalog cat;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::vector<std::string> parts;
        std::size_t start = 0;
        for (int k = 0; k < 4; ++k) {
            auto bar = t.find('|', start);
            if (bar == std::string::npos) throw std::runtime_error("catalog line " + std::to_string(lineno) + ": expected 5 fields");
            parts.push_back(trim(t.substr(start, bar - start)));
            start = bar + 1;
        }
        parts.push_back(trim(t.substr(start)));
        auto eq = parts[2].find('=');
        if (eq == std::string::npos) throw std::runtime_error("catalog line " + std::to_string(lineno) + ": missing '='");
        std::string key = trim(parts[2].substr(0, eq)), value = trim(parts[2].substr(eq + 1));

        CatalogRow* row = nullptr;
        for (auto& r : cat.rows_)
            if (r.table == parts[0] && r.id == parts[1]) row = &r;
        if (!row) {
            cat.rows_.push_back({parts[0], parts[1], {}, {}, {}, {}, {}});
            row = &cat.rows_.back();
        }
        row->fields.emplace_back(key, value);
        if (!parts[3].empty()) parse_side(*row, parts[3]);
        if (!parts[4].empty() && row->remarks.empty()) row->remarks = parts[4];
    }
    return cat;
}

const Catalog& Catalog::instance()
{
    static const Catalog cat = from_text(kCatalogText);
    return cat;
}

std::vector<std::string> Catalog::table_ids() const
{
    std::vector<std::string> out;
    for (int k = 1; k <= 22; ++k) out.push_back("T" + std::to_string(k));
    return out;
}

std::vector<const CatalogRow*> Catalog::list_table(const std::string& table_id) const
{
    auto ids = table_ids();
    if (std::find(ids.begin(), ids.end(), table_id) == ids.end())
        throw std::out_of_range("unknown table id '" + table_id + "'");
    std::vector<const CatalogRow*> out;
    for (const auto& r : rows_)
        if (r.table == table_id) out.push_back(&r);
    return out;
}

const CatalogRow& Catalog::row(const std::string& full_id) const
{
    auto dot = full_id.find('.');
    if (dot != std::string::npos) {
        std::string t = full_id.substr(0, dot), id = full_id.substr(dot + 1);
        for (const auto& r : rows_)
            if (r.table == t && r.id == id) return r;
    }
    throw std::out_of_range("unknown row '" + full_id + "'");
}

const std::vector<std::string>& Catalog::equation_names()
{
    static const std::vector<std::string> names = {"NLW", "NLS", "dNLS", "dNLS-H", "mKdV-1", "mKdV-2", "mKdV-H"};
    return names;
}

std::vector<const CatalogRow*> Catalog::rows_for(const std::string& table, const std::string& eq) const
{
    std::vector<const CatalogRow*> out;
    for (const auto& r : rows_) {
        if (r.table != table) continue;
        const char* key = r.has("eq") ? "eq" : (r.has("equations") ? "equations" : nullptr);
        if (!key) continue;
        auto names = r.list(key);
        if (std::find(names.begin(), names.end(), eq) != names.end()) out.push_back(&r);
    }
    return out;
}

VectorField Catalog::symmetry(const CatalogRow& row) const
{
    VectorField x;
    x.tau = row.expr("tau");
    x.xi = row.expr("xi");
    x.eta = row.expr("eta");
    if (row.has("etabar")) x.etabar = row.expr("etabar");
    x.side = row.side;
    x.label = row.full_id();
    return x;
}

ConsLaw Catalog::law(const CatalogRow& row) const
{
    return {row.full_id(), row.expr("psi_t"), row.expr("psi_r"), row.side, row.remarks};
}

namespace {

NormalForm fixed_or_printed(const CatalogRow& row, const std::string& field)
{
    return row.has("fixed_" + field) ? row.expr("fixed_" + field) : row.expr(field);
}

}  // namespace

std::optional<VectorField> Catalog::corrected_symmetry(const CatalogRow& row) const
{
    if (!row.has("erratum")) return std::nullopt;
    VectorField x = symmetry(row);
    x.tau = fixed_or_printed(row, "tau");
    x.xi = fixed_or_printed(row, "xi");
    x.eta = fixed_or_printed(row, "eta");
    x.label += " (corrected)";
    return x;
}

std::optional<ConsLaw> Catalog::corrected_law(const CatalogRow& row) const
{
    if (!row.has("erratum")) return std::nullopt;
    ConsLaw l = law(row);
    l.psi_t = fixed_or_printed(row, "psi_t");
    l.psi_r = fixed_or_printed(row, "psi_r");
    if (row.has("fixed_m")) l.side[Var::M] = row.expr("fixed_m").terms().begin()->second;
    l.id += " (corrected)";
    return l;
}

CatalogEntry Catalog::get_equation(const std::string& name) const
{
    const auto& names = equation_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
        throw std::invalid_argument("unknown equation '" + name + "'");
    CatalogEntry e;
    const CatalogRow& eqrow = row("EQ." + name);
    e.eq.name = name;
    const std::string& cls = eqrow.text("class");
    e.eq.cls = cls == "WEa" ? EqClass::WEa : cls == "WEb" ? EqClass::WEb : EqClass::WEc;
    e.eq.rhs = eqrow.expr("rhs");
    e.eq.complex = eqrow.remarks == "complex";
    e.eq.notes = eqrow.text("rhs");
    for (const auto& r : rows_) {
        if (r.table == "LAG" && r.id == name) e.lagrangian = r.expr("density");
        if (r.table == "HAM" && r.id == name)
            e.hamiltonian = Hamiltonian{r.expr("density"), r.remarks == "multiplication-by-i"
                                                               ? HamiltonianOperator::MultiplicationByI
                                                               : HamiltonianOperator::RadialWeightedDerivative};
    }
    if (auto it = energy_rows().find(name); it != energy_rows().end()) e.energy_density = row(it->second).expr("psi_t");
    for (int k = 1; k <= 6; ++k)
        for (const auto* r : rows_for("T" + std::to_string(k), name)) e.symmetries.push_back(symmetry(*r));
    for (int k = 10; k <= 16; ++k)
        for (const auto* r : rows_for("T" + std::to_string(k), name)) e.conservation_laws.push_back(law(*r));
    for (const auto* r : rows_for("T9", name)) e.subalgebra_rows.push_back(r->full_id());
    return e;
}

SideCondition sigma_branch(int sigma)
{
    if (sigma != 1 && sigma != -1) throw std::invalid_argument("sigma must be +1 or -1");
    return {{Var::Sigma, Coeff(sigma)}, {Var::Eps, sigma > 0 ? Coeff::var(Var::I) : Coeff(1)}};
}

CatalogEntry Catalog::get_equation(const std::string& name, int sigma) const
{
    CatalogEntry e = get_equation(name);
    SideCondition b = sigma_branch(sigma);
    e.eq = e.eq.specialized(b);
    if (e.lagrangian) e.lagrangian = substitute_params(*e.lagrangian, b);
    if (e.hamiltonian) e.hamiltonian->density = substitute_params(e.hamiltonian->density, b);
    if (e.energy_density) e.energy_density = substitute_params(*e.energy_density, b);
    for (auto& x : e.symmetries) {
        VectorField y = x.specialized(b);
        y.side = x.side;
        x = y;
    }
    for (auto& l : e.conservation_laws) {
        l.psi_t = substitute_params(l.psi_t, b);
        l.psi_r = substitute_params(l.psi_r, b);
    }
    return e;
}

std::map<std::string, VectorField> Catalog::generators(const std::string& name) const
{
    CatalogEntry e = get_equation(name);
    std::map<std::string, VectorField> out;
    VectorField trans{NormalForm(1), {}, {}, std::nullopt, {}, "X_trans"};
    out["X_trans"] = trans;
    auto scal = rows_for("T1", name);
    if (scal.empty()) throw std::logic_error("no scaling row for " + name);
    VectorField xs = symmetry(*scal.front());
    xs.label = "X_scal";
    out["X_scal"] = xs;
    if (e.eq.complex) {
        VectorField ph{{}, {}, NormalForm(Coeff::var(Var::I)) * NormalForm::jet(Dep::U), std::nullopt, {}, "X_phase"};
        out["X_phase"] = ph;
    }
    if (auto it = inversion_rows().find(name); it != inversion_rows().end()) {
        VectorField xi = symmetry(row(it->second));
        xi.label = "X_inver";
        out["X_inver"] = xi;
    }
    return out;
}

const CatalogRow& Catalog::power_row(const std::string& name, PowerKind kind) const
{
    const auto& names = equation_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
        throw std::invalid_argument("unknown equation '" + name + "'");
    auto rows = rows_for(power_table(kind), name);
    if (rows.empty())
        throw std::invalid_argument(std::string(power_kind_name(kind)) + " power is not defined for " + name);
    return *rows.front();
}

namespace {

Coeff evaluate_formula(const CatalogRow& row, const std::string& field, const SideCondition& at)
{
    for (const auto& [v, c] : row.side) {
        auto it = at.find(v);
        if (it != at.end() && it->second != c)
            throw std::domain_error(row.full_id() + " holds only for " + row.side_text);
    }
    for (const auto& [v, c] : row.excluded) {
        auto it = at.find(v);
        if (it != at.end() && it->second == c)
            throw std::domain_error(row.full_id() + ": excluded value " + std::string(var_name(v)) + " = " + c.str());
    }
    NormalForm f = row.expr(field);
    if (!f.is_constant()) throw std::logic_error(row.full_id() + "." + field + " is not a constant formula");
    Coeff c = f.constant_value();
    Coeff den(c.den(), Poly(1));
    if (den.substitute(at).is_zero())
        throw std::domain_error(row.full_id() + ": formula undefined at the given parameters");
    Coeff v = c.substitute(at);
    if (!v.is_rational()) throw std::invalid_argument(row.full_id() + ": formula needs more parameters");
    return v;
}

}  // namespace

Coeff Catalog::special_power(const std::string& name, PowerKind kind, const Coeff& m,
                             const std::optional<Coeff>& s) const
{
    const CatalogRow& r = power_row(name, kind);
    SideCondition at{{Var::M, m}};
    if (kind == PowerKind::HsCritical) {
        if (!s) throw std::invalid_argument("Hs-critical power needs s");
        at[Var::S] = *s;
    }
    return evaluate_formula(r, "p", at);
}

Coeff Catalog::critical_s(const std::string& name, const Coeff& m, const Coeff& p) const
{
    return evaluate_formula(power_row(name, PowerKind::HsCritical), "s", {{Var::M, m}, {Var::P, p}});
}

}  // namespace semiwave
