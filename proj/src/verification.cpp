#include "semiwave/verification.hpp"

#include <chrono>
#include <functional>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "semiwave/parse.hpp"

namespace semiwave {

namespace {

using Clock = std::chrono::steady_clock;

NormalForm r_pow(const Coeff& e) { return NormalForm::atom(Atom::r(), e); }
NormalForm ucoord(Dep d) { return NormalForm::jet(d); }
NormalForm imag_unit() { return NormalForm(Coeff::var(Var::I)); }

SideCondition with_branch(const SideCondition& side, int sigma)
{
    auto merged = merge_side_conditions(side, sigma_branch(sigma));
    if (!merged) throw std::invalid_argument("side condition binds sigma");
    return *merged;
}

Coeff m_value(const SideCondition& b) { return Coeff::var(Var::M).substitute(b); }

SideCondition i_flip() { return {{Var::I, Coeff::var(Var::I) * Coeff(-1)}}; }
constexpr const char* kFlipNote = "holds with i -> -i, i.e. for the convention -i u_t = ...";

using BranchFn = std::function<NormalForm(const SideCondition&)>;

/// Zero on every sigma branch under `side`; stores the first nonzero residual.
bool all_branches_zero(const SideCondition& side, const CheckOptions& opt, const BranchFn& fn, NormalForm* residual,
                       std::vector<std::string>* notes)
{
    for (int s : opt.sigma_branches) {
        NormalForm res;
        try {
            res = fn(with_branch(side, s));
        } catch (const std::exception& e) {
            if (notes) notes->push_back(std::string("sigma=") + std::to_string(s) + ": " + e.what());
            return false;
        }
        if (!res.is_zero()) {
            if (residual) *residual = res;
            if (notes && opt.sigma_branches.size() > 1) notes->push_back("nonzero residual on sigma=" + std::to_string(s));
            return false;
        }
    }
    return true;
}

Report run_check(const std::string& subject, const SideCondition& side, const CheckOptions& opt, const BranchFn& fn)
{
    auto start = Clock::now();
    Report r;
    r.subject = subject;
    r.side = side;
    r.sigma_branches = opt.sigma_branches;
    bool ok = all_branches_zero(side, opt, fn, &r.residual, &r.notes);
    if (side.empty()) {
        r.verdict = ok ? Verdict::Verified : Verdict::Refuted;
    } else {
        r.verdict = ok ? Verdict::ConditionallyVerified : Verdict::Refuted;
        if (opt.generic_control) {
            NormalForm g;
            r.generic_verdict = all_branches_zero({}, opt, fn, &g, nullptr) ? Verdict::Verified : Verdict::Refuted;
        }
    }
    r.millis = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return r;
}

NormalForm conj_residual(const EquationSpec& e)
{
    JetVar lead = e.leading();
    lead.dep = Dep::Ubar;
    return NormalForm::atom(Atom::of(lead)) - conjugate(e.rhs);
}

/// Generator of the equation residual G entering the characteristic form.
NormalForm equation_form(const EquationSpec& e)
{
    return e.complex ? imag_unit() * e.residual() : e.residual();
}

NormalForm euler_certificate(const NormalForm& d, bool complex, bool dir_t)
{
    NormalForm eu = variational_derivative(d, JetVar{Dep::U, 0, 0}, dir_t, true);
    if (!eu.is_zero() || !complex) return eu;
    return variational_derivative(d, JetVar{Dep::Ubar, 0, 0}, dir_t, true);
}

}  // namespace

const char* verdict_name(Verdict v)
{
    switch (v) {
        case Verdict::Verified: return "verified";
        case Verdict::Refuted: return "refuted";
        case Verdict::ConditionallyVerified: return "conditionally-verified";
    }
    return "?";
}

std::vector<std::string> Report::residual_terms(std::size_t limit) const
{
    std::vector<std::string> out;
    for (const auto& [m, c] : residual.terms()) {
        if (out.size() == limit) {
            out.push_back("... (" + std::to_string(residual.size() - limit) + " more terms)");
            break;
        }
        out.push_back(print(NormalForm::term(m, c)));
    }
    return out;
}

std::string to_json(const Report& r)
{
    nlohmann::json j;
    j["subject"] = r.subject;
    j["verdict"] = verdict_name(r.verdict);
    nlohmann::json side = nlohmann::json::object();
    for (const auto& [v, c] : r.side) side[var_name(v)] = c.str();
    j["side_condition"] = side;
    j["residual_terms"] = r.residual_terms();
    j["sigma_branches"] = r.sigma_branches;
    j["millis"] = r.millis;
    if (r.generic_verdict) j["generic_verdict"] = verdict_name(*r.generic_verdict);
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j.dump();
}

Report check_symmetry(const EquationSpec& eq, const VectorField& x, const CheckOptions& opt)
{
    std::string subject = x.label.empty() ? eq.name + " symmetry" : x.label;
    auto residual = [&](const SideCondition& b, bool flip) {
        EquationSpec e = eq.specialized(b);
        VectorField xs = x.specialized(b);
        if (flip) xs = xs.specialized(i_flip());
        Reducer red(e);
        NormalForm res = prolong_apply(xs, e.residual(), e.complex, &red);
        if (res.is_zero() && e.complex) res = prolong_apply(xs, conj_residual(e), true, &red);
        return res;
    };
    Report rep = run_check(subject, x.side, opt, [&](const SideCondition& b) { return residual(b, false); });
    if (!rep.ok() && eq.complex &&
        all_branches_zero(x.side, opt, [&](const SideCondition& b) { return residual(b, true); }, nullptr, nullptr))
        rep.notes.push_back(kFlipNote);
    return rep;
}

namespace {

NormalForm divergence_residual(const EquationSpec& eq, const ConsLaw& law, const SideCondition& b, bool flip)
{
    EquationSpec e = eq.specialized(b);
    NormalForm pt = substitute_params(law.psi_t, b);
    NormalForm pr = substitute_params(law.psi_r, b);
    if (flip) {
        pt = substitute_params(pt, i_flip());
        pr = substitute_params(pr, i_flip());
    }
    NormalForm div = total_derivative(pt, Dir::T) + total_derivative(pr, Dir::R) +
                     NormalForm(m_value(b)) * r_pow(Coeff(-1)) * pr;
    return reduce_mod_equation(div, e);
}

}  // namespace

Report check_conservation(const EquationSpec& eq, const ConsLaw& law, const CheckOptions& opt)
{
    Report rep = run_check(law.id, law.side, opt,
                           [&](const SideCondition& b) { return divergence_residual(eq, law, b, false); });
    if (rep.ok()) return rep;
    CheckOptions quiet = opt;
    quiet.generic_control = false;
    Report dens = check_density(eq, law.id, law.psi_t, law.side, quiet);
    rep.notes.push_back(dens.ok() ? "density is conserved; the flux is inconsistent with it"
                                  : "density is not conserved under the side condition");
    if (eq.complex &&
        all_branches_zero(law.side, opt, [&](const SideCondition& b) { return divergence_residual(eq, law, b, true); },
                          nullptr, nullptr))
        rep.notes.push_back(kFlipNote);
    return rep;
}

NormalForm extract_multiplier(const EquationSpec& eq, const ConsLaw& law)
{
    NormalForm w = r_pow(Coeff::var(Var::M)) * law.psi_t;
    if (eq.cls == EqClass::WEa) return variational_derivative(w, JetVar{Dep::U, 1, 0}, false, true);
    NormalForm q = variational_derivative(w, JetVar{Dep::U, 0, 0}, false, true);
    return eq.complex ? NormalForm(Coeff::var(Var::I) * Coeff(-1)) * q : q;
}

Report check_characteristic_identity(const EquationSpec& eq, const NormalForm& q, const ConsLaw& law,
                                     const CheckOptions& opt)
{
    Report rep = run_check(law.id + " characteristic", law.side, opt, [&](const SideCondition& b) {
        EquationSpec e = eq.specialized(b);
        NormalForm rm = r_pow(m_value(b));
        NormalForm pt = substitute_params(law.psi_t, b);
        NormalForm pr = substitute_params(law.psi_r, b);
        NormalForm qs = substitute_params(q, b);
        NormalForm g = equation_form(e);
        NormalForm d = total_derivative(rm * pt, Dir::T) + total_derivative(rm * pr, Dir::R) - qs * g;
        if (e.complex) d -= conjugate(qs) * conjugate(g);
        NormalForm on_shell = reduce_mod_equation(d, e);
        if (!on_shell.is_zero() || d.is_zero()) return on_shell;
        return euler_certificate(d, e.complex, true);
    });
    return rep;
}

Report check_hamiltonian_form(const CatalogEntry& entry, const CheckOptions& opt)
{
    if (!entry.hamiltonian) throw std::invalid_argument(entry.eq.name + " has no Hamiltonian formulation");
    const Hamiltonian& ham = *entry.hamiltonian;
    const bool complex = entry.eq.complex;
    const NormalForm rm_half = r_pow(Coeff::var(Var::M) * Coeff(-1, 2));
    const NormalForm rm_inv = r_pow(Coeff::var(Var::M) * Coeff(-1));

    auto apply_op = [&](const NormalForm& g, const NormalForm& scalar) -> NormalForm {
        if (ham.op == HamiltonianOperator::MultiplicationByI) return scalar * rm_inv * g;
        return rm_half * total_derivative(rm_half * g, Dir::R);
    };
    auto skew_residual = [&](const NormalForm& weight) -> NormalForm {
        NormalForm f = ucoord(Dep::F), g = ucoord(Dep::G);
        NormalForm fb = complex ? ucoord(Dep::Fbar) : f;
        NormalForm scalar = imag_unit();
        NormalForm df = apply_op(f, scalar), dg = apply_op(g, scalar);
        NormalForm s = weight * (fb * dg + (complex ? conjugate(df) : df) * g);
        for (Dep d : {Dep::F, Dep::Fbar, Dep::G, Dep::Gbar}) {
            if (!complex && (d == Dep::Fbar || d == Dep::Gbar)) continue;
            NormalForm e = variational_derivative(s, JetVar{d, 0, 0}, false, true);
            if (!e.is_zero()) return e;
        }
        return {};
    };
    auto form_residual = [&](const SideCondition& b, const NormalForm& scalar) {
        EquationSpec e = entry.eq.specialized(b);
        NormalForm h = substitute_params(ham.density, b);
        NormalForm delta = variational_derivative(r_pow(Coeff::var(Var::M)) * h,
                                                  JetVar{complex ? Dep::Ubar : Dep::U, 0, 0}, false, true);
        return e.rhs - apply_op(delta, scalar);
    };

    Report rep = run_check(entry.eq.name + " Hamiltonian form", {}, opt, [&](const SideCondition& b) {
        NormalForm res = form_residual(b, imag_unit());
        if (!res.is_zero()) return res;
        return skew_residual(NormalForm(1));
    });
    if (ham.op == HamiltonianOperator::MultiplicationByI && !rep.ok()) {
        NormalForm g;
        CheckOptions o = opt;
        bool alt = all_branches_zero({}, o, [&](const SideCondition& b) { return form_residual(b, -imag_unit()); }, &g,
                                     nullptr);
        if (alt) rep.notes.push_back("the formulation holds with the operator -i r^(-m), i.e. i u_t = delta H/delta ubar");
    }
    if (ham.op == HamiltonianOperator::RadialWeightedDerivative &&
        !skew_residual(r_pow(Coeff::var(Var::M))).is_zero())
        rep.notes.push_back("operator is not skew-adjoint in the r^m-weighted pairing; certificate uses the dr pairing");
    return rep;
}

Report check_density(const EquationSpec& eq, const std::string& subject, const NormalForm& density,
                     const SideCondition& side, const CheckOptions& opt)
{
    return run_check(subject, side, opt, [&](const SideCondition& b) {
        EquationSpec e = eq.specialized(b);
        NormalForm rho = substitute_params(density, b);
        NormalForm x = reduce_mod_equation(r_pow(m_value(b)) * total_derivative(rho, Dir::T), e);
        NormalForm eu = euler_certificate(x, e.complex, false);
        if (!eu.is_zero() || e.cls != EqClass::WEa) return eu;
        return variational_derivative(x, JetVar{Dep::U, 1, 0}, false, true);
    });
}

// ---------------------------------------------------------------------------
// Lie algebra structure

std::vector<std::vector<CVec>> StructureTable::constants() const
{
    const std::size_t n = labels.size();
    std::vector<std::vector<CVec>> c(n, std::vector<CVec>(n, CVec(n, Coeff(0))));
    for (const auto& b : brackets) {
        c[b.i][b.j] = b.coefficients;
        for (std::size_t k = 0; k < n; ++k) c[b.j][b.i][k] = -b.coefficients[k];
    }
    return c;
}

StructureTable structure_constants(const std::vector<VectorField>& generators, bool complex)
{
    StructureTable t;
    SideCondition side;
    for (const auto& g : generators) {
        auto m = merge_side_conditions(side, g.side);
        if (!m) throw std::invalid_argument("generators with incompatible side conditions");
        side = *m;
    }
    t.side = side;
    std::vector<VectorField> gs;
    for (const auto& g : generators) {
        t.labels.push_back(g.label);
        VectorField s = g.specialized(side);
        s.side = side;
        gs.push_back(std::move(s));
    }
    auto components = [complex](const VectorField& x) {
        std::vector<NormalForm> c{x.tau, x.xi, x.eta};
        if (complex) c.push_back(x.eta_bar());
        return c;
    };
    const std::size_t n = gs.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            VectorField br = commutator(gs[i], gs[j], complex);
            CMat a;
            CVec rhs;
            auto bc = components(br);
            for (std::size_t comp = 0; comp < bc.size(); ++comp) {
                std::vector<NormalForm> cols;
                for (const auto& g : gs) cols.push_back(components(g)[comp]);
                cols.push_back(bc[comp]);
                for (auto& row : coefficient_matrix(cols)) {
                    rhs.push_back(row.back());
                    row.pop_back();
                    a.push_back(std::move(row));
                }
            }
            LinearSolution sol = solve_linear_system(a, rhs);
            if (!sol.consistent)
                throw std::runtime_error("bracket [" + gs[i].label + ", " + gs[j].label + "] leaves the span");
            t.brackets.push_back({i, j, sol.particular});
        }
    return t;
}

namespace {

CVec bracket_of(const std::vector<std::vector<CVec>>& c, const CVec& x, const CVec& y)
{
    const std::size_t n = x.size();
    CVec out(n, Coeff(0));
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i].is_zero()) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (y[j].is_zero()) continue;
            Coeff f = x[i] * y[j];
            for (std::size_t k = 0; k < n; ++k)
                if (!c[i][j][k].is_zero()) out[k] += f * c[i][j][k];
        }
    }
    return out;
}

/// Row-reduced basis of the span of `vs`.
std::vector<CVec> span_basis(const std::vector<CVec>& vs, std::size_t n)
{
    std::vector<CVec> basis;
    for (const auto& v : vs) {
        std::vector<CVec> trial = basis;
        trial.push_back(v);
        if (matrix_rank(trial) > static_cast<int>(basis.size())) basis.push_back(v);
    }
    (void)n;
    return basis;
}

}  // namespace

AlgebraClass classify(const StructureTable& t)
{
    AlgebraClass out;
    const std::size_t n = t.labels.size();
    out.dimension = static_cast<int>(n);
    auto c = t.constants();

    std::vector<CVec> current;
    for (std::size_t i = 0; i < n; ++i) {
        CVec e(n, Coeff(0));
        e[i] = Coeff(1);
        current.push_back(e);
    }
    bool first = true;
    for (;;) {
        std::vector<CVec> brs;
        for (std::size_t i = 0; i < current.size(); ++i)
            for (std::size_t j = i + 1; j < current.size(); ++j) brs.push_back(bracket_of(c, current[i], current[j]));
        auto next = span_basis(brs, n);
        if (first) out.derived_dimension = static_cast<int>(next.size());
        first = false;
        if (next.empty()) {
            out.solvable = true;
            break;
        }
        if (next.size() == current.size()) break;
        current = std::move(next);
    }

    CMat zc;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            CVec row(n, Coeff(0));
            for (std::size_t i = 0; i < n; ++i) row[i] = c[i][j][k];
            zc.push_back(row);
        }
    out.center_dimension = n ? static_cast<int>(nullspace(zc, static_cast<int>(n)).size()) : 0;

    CMat kf(n, CVec(n, Coeff(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l)
                    if (!c[i][k][l].is_zero() && !c[j][l][k].is_zero()) kf[i][j] += c[i][k][l] * c[j][l][k];
    out.killing_rank = n ? matrix_rank(kf) : 0;

    if (n == 2 && out.solvable && out.center_dimension == 0) out.group = "U(1) x| U(1)";
    else if (n == 3 && out.killing_rank == 3) out.group = "SL(2,R)";
    else if (n == 3 && out.solvable && out.center_dimension == 1 && out.derived_dimension == 1)
        out.group = "(U(1) x| U(1)) x U(1)";
    else if (n == 4 && out.center_dimension == 1 && out.killing_rank == 3) out.group = "SL(2,R) x U(1)";
    else out.group = "other";
    return out;
}

// ---------------------------------------------------------------------------
// Scaling

ScalingResult scaling_weight(const NormalForm& density, const VectorField& x_scal, const Coeff& weight_exponent)
{
    ScalingResult out;
    if (density.is_zero()) throw std::invalid_argument("zero density");
    bool complex = false;
    for (const auto& j : collect_jets(density))
        if (j.dep == Dep::Ubar) complex = true;
    NormalForm f = density * r_pow(weight_exponent);
    NormalForm pf = prolong_apply(x_scal, f, complex);
    const auto& [m0, c0] = *f.terms().begin();
    auto it = pf.terms().find(m0);
    Coeff w = it == pf.terms().end() ? Coeff(0) : it->second / c0;
    NormalForm rest = pf - f.scaled(w);
    if (!rest.is_zero() && !euler_certificate(rest, complex, false).is_zero())
        throw std::invalid_argument("density is not homogeneous under the scaling generator");
    out.weight = w;
    Coeff xi_r = partial(x_scal.xi, Dir::R).is_constant() ? partial(x_scal.xi, Dir::R).constant_value() : Coeff(1);
    out.power = solve_linear(w + xi_r, Var::P);
    return out;
}

std::vector<Coeff> solve_for_parameter(const NormalForm& residual, Var v)
{
    std::set<Coeff> candidates;
    for (const auto& [m, c] : residual.terms()) {
        if (c.depends_on(v))
            if (auto s = solve_linear(c, v)) candidates.insert(*s);
        for (const auto& [a, e] : m.factors)
            if (e.depends_on(v))
                for (const auto& [m2, c2] : residual.terms())
                    for (const auto& [a2, e2] : m2.factors)
                        if (a2 == a && e2 != e)
                            if (auto s = solve_linear(e - e2, v)) candidates.insert(*s);
    }
    std::vector<Coeff> out;
    for (const auto& cand : candidates) {
        try {
            if (substitute_params(residual, {{v, cand}}).is_zero()) out.push_back(cand);
        } catch (const std::domain_error&) {
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Determining systems

namespace {

bool is_linear_equation(const EquationSpec& eq)
{
    for (const auto& [m, c] : eq.rhs.terms()) {
        Coeff deg(0);
        for (const auto& [a, e] : m.factors) {
            if (a.kind == AtomKind::Jet) deg += e;
            else if (a.kind != AtomKind::R && a.kind != AtomKind::T) return false;
        }
        if (deg != Coeff(1)) return false;
    }
    return true;
}

std::vector<NormalForm> split_by_jets(const NormalForm& e, const std::set<JetVar>& keep)
{
    std::map<Monomial, NormalForm> groups;
    for (const auto& [m, c] : e.terms()) {
        Monomial key, rest;
        for (const auto& f : m.factors) {
            const Atom& a = f.first;
            bool splitting = a.kind == AtomKind::Jet && !keep.count(a.jet);
            (splitting ? key : rest).factors.push_back(f);
        }
        groups[key] += NormalForm::term(rest, c);
    }
    std::vector<NormalForm> out;
    for (auto& [k, v] : groups)
        if (!v.is_zero()) out.push_back(std::move(v));
    return out;
}

}  // namespace

DeterminingSystem emit_determining_system(const EquationSpec& eq, Unknown kind, int order)
{
    if (order < 0 || order > 2) throw std::invalid_argument("multiplier order must be 0, 1 or 2");
    if (is_linear_equation(eq)) throw std::invalid_argument("linear equations are excluded (p = 0)");
    DeterminingSystem sys;
    sys.complex = eq.complex;
    std::vector<Atom> args{Atom::t(), Atom::r(), Atom::of({Dep::U, 0, 0})};
    if (eq.complex) args.push_back(Atom::of({Dep::Ubar, 0, 0}));
    if (kind == Unknown::Symmetry) {
        VectorField x;
        x.tau = NormalForm::atom(Atom::function("tau", args));
        x.xi = NormalForm::atom(Atom::function("xi", args));
        x.eta = NormalForm::atom(Atom::function("eta", args));
        sys.unknown_names = {"tau", "xi", "eta"};
        Reducer red(eq);
        NormalForm c1 = prolong_apply(x, eq.residual(), eq.complex, &red);
        std::set<JetVar> keep;
        for (const auto& a : args)
            if (a.kind == AtomKind::Jet) keep.insert(a.jet);
        sys.raw = split_by_jets(c1, keep);
        if (eq.complex) {
            auto more = split_by_jets(prolong_apply(x, conj_residual(eq), true, &red), keep);
            sys.raw.insert(sys.raw.end(), more.begin(), more.end());
        }
    } else {
        const int nt = eq.cls == EqClass::WEa ? 1 : 0;
        for (int k = 1; k <= order; ++k) args.push_back(Atom::of({Dep::U, 0, k}));
        if (eq.complex)
            for (int k = 1; k <= order; ++k) args.push_back(Atom::of({Dep::Ubar, 0, k}));
        for (int a = 1; a <= nt; ++a)
            for (int k = 0; k + a <= order; ++k) args.push_back(Atom::of({Dep::U, a, k}));
        NormalForm q = NormalForm::atom(Atom::function("Q", args));
        sys.unknown_names = {"Q"};
        NormalForm g = equation_form(eq);
        NormalForm qg = q * g;
        if (eq.complex) qg += conjugate(q) * conjugate(g);
        std::set<JetVar> keep;
        for (const auto& a : args)
            if (a.kind == AtomKind::Jet) keep.insert(a.jet);
        sys.raw = split_by_jets(variational_derivative(qg, JetVar{Dep::U, 0, 0}, true, true), keep);
        if (eq.complex) {
            auto more = split_by_jets(variational_derivative(qg, JetVar{Dep::Ubar, 0, 0}, true, true), keep);
            sys.raw.insert(sys.raw.end(), more.begin(), more.end());
        }
    }
    std::set<NormalForm, std::function<bool(const NormalForm&, const NormalForm&)>> seen(
        [](const NormalForm& a, const NormalForm& b) { return a.compare(b) < 0; });
    std::vector<NormalForm> unique;
    for (auto& e : sys.raw)
        if (seen.insert(e).second && seen.insert(-e).second) unique.push_back(e);
    sys.raw = std::move(unique);
    for (const auto& e : sys.raw) sys.equations.push_back(print(e) + " = 0");
    return sys;
}

std::vector<NormalForm> DeterminingSystem::residuals_for(const std::vector<NormalForm>& values) const
{
    if (values.size() != unknown_names.size()) throw std::invalid_argument("wrong number of unknown values");
    auto value_of = [&](const std::string& name) -> NormalForm {
        for (std::size_t k = 0; k < unknown_names.size(); ++k) {
            if (unknown_names[k] == name) return values[k];
            if (unknown_names[k] + "bar" == name) return conjugate(values[k]);
        }
        throw std::invalid_argument("unknown function " + name);
    };
    AtomReplacer rep = [&](const Atom& a) -> std::optional<NormalForm> {
        if (a.kind != AtomKind::Fun) return std::nullopt;
        NormalForm v = value_of(a.fun->name);
        for (std::size_t k = 0; k < a.fun->args.size(); ++k) {
            const Atom& x = a.fun->args[k];
            for (int n = 0; n < a.fun->orders[k]; ++n) {
                if (x.kind == AtomKind::T) v = partial(v, Dir::T);
                else if (x.kind == AtomKind::R) v = partial(v, Dir::R);
                else v = partial(v, x.jet);
            }
        }
        return v;
    };
    std::vector<NormalForm> out;
    for (const auto& e : raw) out.push_back(map_atoms(e, rep));
    return out;
}

}  // namespace semiwave
