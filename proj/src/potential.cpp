#include "semiwave/potential.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "semiwave/linalg.hpp"
#include "semiwave/parse.hpp"

namespace semiwave {

namespace {

NormalForm r_pow(const Coeff& e) { return NormalForm::atom(Atom::r(), e); }

bool is_potential(Dep d) { return d == Dep::V || d == Dep::Vbar || d == Dep::W || d == Dep::Wbar; }

SideCondition with_branch(const SideCondition& side, int sigma)
{
    auto merged = merge_side_conditions(side, sigma_branch(sigma));
    if (!merged) throw std::invalid_argument("side condition binds sigma");
    return *merged;
}

class Eliminator {
public:
    explicit Eliminator(const PotentialSystem& ps) : ps_(ps), base_(ps.base) {}

    NormalForm operator()(const NormalForm& e)
    {
        NormalForm cur = e;
        for (int pass = 0; pass < 16; ++pass) {
            bool any = false;
            for (const auto& j : collect_jets(cur))
                if (is_potential(j.dep) && j.nt + j.nr > 0) any = true;
            if (!any) return base_(cur);
            cur = map_atoms(cur, [this](const Atom& a) -> std::optional<NormalForm> {
                if (a.kind != AtomKind::Jet || !is_potential(a.jet.dep) || a.jet.nt + a.jet.nr == 0)
                    return std::nullopt;
                return value(a.jet);
            });
            cur = base_(cur);
        }
        throw std::runtime_error("potential elimination did not terminate");
    }

private:
    const PotentialSystem& ps_;
    Reducer base_;
    std::map<JetVar, NormalForm> memo_;

    const PotentialRelation* relation(Dep d, bool& conj) const
    {
        for (const auto& p : ps_.potentials) {
            if (p.potential == d) {
                conj = false;
                return &p;
            }
            if (conjugate(p.potential) == d) {
                conj = true;
                return &p;
            }
        }
        return nullptr;
    }

    NormalForm value(const JetVar& j)
    {
        auto it = memo_.find(j);
        if (it != memo_.end()) return it->second;
        bool conj = false;
        const PotentialRelation* rel = relation(j.dep, conj);
        if (!rel) throw std::invalid_argument(std::string("no relation for potential ") + dep_name(j.dep));
        NormalForm v;
        if (j.nr == 1 && j.nt == 0) v = conj ? conjugate(rel->v_r) : rel->v_r;
        else if (j.nr == 0 && j.nt == 1) v = conj ? conjugate(rel->v_t) : rel->v_t;
        else if (j.nr >= 2 || (j.nr == 1 && j.nt == 0)) v = (*this)(total_derivative(value({j.dep, j.nt, j.nr - 1}), Dir::R));
        else v = (*this)(total_derivative(value({j.dep, j.nt - 1, j.nr}), Dir::T));
        return memo_.emplace(j, v).first->second;
    }
};

NormalForm divergence(const PotentialSystem& ps, const NormalForm& pt, const NormalForm& pr)
{
    return ps.reduce(total_derivative(pt, Dir::T) + total_derivative(pr, Dir::R));
}

PotentialRelation relation_from(Dep d, const NormalForm& density, const NormalForm& flux, Orientation o)
{
    NormalForm s(o == Orientation::AsWritten ? Coeff(1) : Coeff(-1));
    return {d, NormalForm(Coeff(-1)) * s * density, s * flux};
}

void require_consistent(const PotentialSystem& ps)
{
    for (const auto& r : ps.consistency_residuals())
        if (!r.is_zero())
            throw std::invalid_argument("potential system is inconsistent: D_t v_r - D_r v_t = " + print(r));
}

}  // namespace

NormalForm PotentialSystem::reduce(const NormalForm& e) const
{
    Eliminator el(*this);
    return el(e);
}

std::vector<NormalForm> PotentialSystem::consistency_residuals() const
{
    std::vector<NormalForm> out;
    PotentialSystem lower = *this;
    lower.potentials.clear();
    for (const auto& p : potentials) {
        Eliminator el(lower);
        out.push_back(el(total_derivative(p.v_r, Dir::T) - total_derivative(p.v_t, Dir::R)));
        lower.potentials.push_back(p);
    }
    return out;
}

PotentialSystem PotentialSystem::specialized(const SideCondition& b) const
{
    PotentialSystem out = *this;
    out.base = base.specialized(b);
    for (auto& p : out.potentials) {
        p.v_r = substitute_params(p.v_r, b);
        p.v_t = substitute_params(p.v_t, b);
    }
    for (const auto& [k, v] : b) out.side[k] = v;
    return out;
}

PotentialSystem build_potential_system(const EquationSpec& eq, const ConsLaw& law, Orientation o)
{
    PotentialSystem ps;
    ps.side = law.side;
    ps.base = eq.specialized(law.side);
    NormalForm rm = r_pow(Coeff::var(Var::M).substitute(law.side));
    NormalForm pt = substitute_params(law.psi_t, law.side), pr = substitute_params(law.psi_r, law.side);
    ps.potentials.push_back(relation_from(Dep::V, rm * pt, rm * pr, o));
    NormalForm q = extract_multiplier(eq, law);
    if (q.is_zero() || !collect_jets(q).empty()) ps.notes.push_back("multiplier " + print(q) + " is not a nonzero function of (t, r)");
    require_consistent(ps);
    return ps;
}

PotentialSystem potential_system_of_row(const CatalogRow& row)
{
    const auto& cat = Catalog::instance();
    PotentialSystem ps;
    ps.side = row.side;
    ps.base = cat.get_equation(row.list("eq").front()).eq.specialized(row.side);
    ps.potentials.push_back({Dep::V, row.expr("v_r"), row.expr("v_t")});
    return ps;
}

Report check_nonlocal_conservation(const PotentialSystem& ps, const ConsLaw& law, const CheckOptions& opt)
{
    auto start = std::chrono::steady_clock::now();
    Report rep;
    rep.subject = law.id;
    rep.side = ps.side;
    for (const auto& [k, v] : law.side) rep.side[k] = v;
    rep.sigma_branches = opt.sigma_branches;
    bool ok = true;
    for (int s : opt.sigma_branches) {
        SideCondition b = with_branch(rep.side, s);
        PotentialSystem sp = ps.specialized(b);
        auto cons = sp.consistency_residuals();
        bool consistent = true;
        for (const auto& c : cons) consistent = consistent && c.is_zero();
        if (!consistent) {
            rep.notes.push_back("potential system inconsistent on sigma=" + std::to_string(s));
            if (ok) rep.residual = cons.front();
            ok = false;
            break;
        }
        NormalForm res = divergence(sp, substitute_params(law.psi_t, b), substitute_params(law.psi_r, b));
        if (!res.is_zero()) {
            rep.notes.push_back("nonzero residual on sigma=" + std::to_string(s));
            if (ok) rep.residual = res;
            ok = false;
        }
    }
    rep.verdict = !ok ? Verdict::Refuted : rep.side.empty() ? Verdict::Verified : Verdict::ConditionallyVerified;
    if (!ok) {
        for (int s : opt.sigma_branches) {
            SideCondition b = with_branch(rep.side, s);
            PotentialSystem sp = ps.specialized(b);
            NormalForm dt = sp.reduce(total_derivative(substitute_params(law.psi_t, b), Dir::T));
            NormalForm dr = sp.reduce(total_derivative(substitute_params(law.psi_r, b), Dir::R));
            if (dr.is_zero()) continue;
            NormalForm lambda = NormalForm(Coeff::var(Var::A));
            auto sols = solve_for_parameter(dt + lambda * dr, Var::A);
            for (const auto& l : sols)
                rep.notes.push_back("sigma=" + std::to_string(s) + ": holds with the flux scaled by " + l.str());
        }
    }
    rep.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

bool is_nonlocal(const PotentialSystem& ps, const NormalForm& e)
{
    for (const auto& j : collect_jets(ps.reduce(e)))
        if (is_potential(j.dep) && j.nt == 0 && j.nr == 0) return true;
    return false;
}

PotentialSystem second_level_potentiate(const PotentialSystem& ps, const ConsLaw& law, Orientation o)
{
    if (law.psi_t.is_zero()) throw std::invalid_argument("law has zero density");
    PotentialSystem out = ps;
    for (const auto& [k, v] : law.side) out.side[k] = v;
    out = out.specialized(out.side);
    NormalForm pt = substitute_params(law.psi_t, out.side), pr = substitute_params(law.psi_r, out.side);
    if (!divergence(out, pt, pr).is_zero()) throw std::invalid_argument("law does not hold on the potential system");
    Dep next = out.potentials.size() == 1 ? Dep::W : throw std::invalid_argument("at most two potential levels");
    out.potentials.push_back(relation_from(next, pt, pr, o));
    require_consistent(out);
    return out;
}

MScan scan_m(const CatalogRow& row, const ConsLaw& law, const std::vector<Coeff>& candidates)
{
    const auto& cat = Catalog::instance();
    MScan out;
    SideCondition side = row.side;
    side.erase(Var::M);
    PotentialSystem ps;
    ps.side = side;
    ps.base = cat.get_equation(row.list("eq").front()).eq.specialized(side);
    ps.potentials.push_back({Dep::V, substitute_params(row.expr("v_r"), side), substitute_params(row.expr("v_t"), side)});
    NormalForm pt = substitute_params(law.psi_t, side), pr = substitute_params(law.psi_r, side);

    std::vector<Coeff> cands = candidates;
    auto add = [&](const Coeff& c) {
        for (const auto& x : cands)
            if ((x - c).is_zero()) return;
        cands.push_back(c);
    };
    for (int s : {1, -1}) {
        SideCondition b = sigma_branch(s);
        PotentialSystem sp = ps.specialized(b);
        for (const auto& c : sp.consistency_residuals())
            for (const auto& v : solve_for_parameter(c, Var::M)) {
                add(v);
                bool seen = false;
                for (const auto& x : out.consistent_at) seen = seen || (x - v).is_zero();
                if (!seen) out.consistent_at.push_back(v);
            }
        NormalForm res = divergence(sp, substitute_params(pt, b), substitute_params(pr, b));
        for (const auto& v : solve_for_parameter(res, Var::M)) add(v);
    }
    out.tried = cands;
    for (const auto& mv : cands) {
        SideCondition bm{{Var::M, mv}};
        bool ok = true;
        for (int s : {1, -1}) {
            SideCondition b = *merge_side_conditions(bm, sigma_branch(s));
            PotentialSystem sp = ps.specialized(b);
            for (const auto& c : sp.consistency_residuals()) ok = ok && c.is_zero();
            ok = ok && divergence(sp, substitute_params(pt, b), substitute_params(pr, b)).is_zero();
        }
        if (ok) out.holds_at.push_back(mv);
    }
    return out;
}

AnsatzResult search_exponential_laws(const PotentialSystem& ps, Dep potential, const NormalForm& r_factor,
                                     const std::vector<NormalForm>& flux_monomials)
{
    AnsatzResult out;
    const Var kv = Var::S;
    const NormalForm ex = nf_exp(NormalForm(Coeff::var(kv)) * NormalForm::jet(potential));
    const NormalForm dens = r_factor * ex;
    std::vector<NormalForm> cols;
    for (const auto& mono : flux_monomials) cols.push_back(ps.reduce(total_derivative(ex * mono, Dir::R)));
    cols.push_back(ps.reduce(total_derivative(dens, Dir::T)));

    auto solve_at = [&](const SideCondition& b) {
        std::vector<NormalForm> cs;
        for (const auto& c : cols) cs.push_back(b.empty() ? c : substitute_params(c, b));
        CMat a = coefficient_matrix(cs);
        CMat m;
        CVec rhs;
        for (auto& row : a) {
            rhs.push_back(-row.back());
            row.pop_back();
            m.push_back(std::move(row));
        }
        return solve_linear_system(m, rhs);
    };
    auto describe = [&](const Coeff& k, const CVec& c) {
        SideCondition b{{kv, k}};
        NormalForm flux;
        for (std::size_t i = 0; i < c.size(); ++i) flux += NormalForm(c[i]) * flux_monomials[i];
        NormalForm e = substitute_params(ex, b);
        return "psi_t = " + print(substitute_params(dens, b)) + ", psi_r = " + print(e * substitute_params(flux, b));
    };

    LinearSolution generic = solve_at({});
    if (generic.consistent) {
        out.exponents.push_back(Coeff::var(kv));
        out.laws.push_back(describe(Coeff::var(kv), generic.particular));
        return out;
    }
    Poly g;
    for (const auto& o : generic.obstructions) g = g.is_zero() ? o.num() : gcd(g, o.num());
    for (const auto& k : field_roots(Coeff(g, Poly(1)), kv)) {
        if (k.is_zero()) continue;
        LinearSolution s = solve_at({{kv, k}});
        if (!s.consistent) continue;
        out.exponents.push_back(k);
        out.laws.push_back(describe(k, s.particular));
    }
    return out;
}

AnsatzResult tabulated_ansatz_search(const CatalogRow& row, int sigma, int level)
{
    if (level != 1 && level != 2) throw std::invalid_argument("level must be 1 or 2");
    const auto& cat = Catalog::instance();
    ConsLaw law = cat.law(row);
    PotentialSystem ps = potential_system_of_row(row);
    if (!check_nonlocal_conservation(ps, law).ok()) {
        if (auto fixed = cat.corrected_law(row)) law = *fixed;
        ps.side = law.side;
        ps.base = cat.get_equation(row.list("eq").front()).eq.specialized(law.side);
        ps.potentials.front() = {Dep::V, substitute_params(row.expr("v_r"), law.side),
                                 substitute_params(row.expr("v_t"), law.side)};
    }
    SideCondition b = sigma_branch(sigma);
    PotentialSystem sp = ps.specialized(b);
    Dep target = Dep::V;
    std::vector<NormalForm> factors{NormalForm(Coeff(1))};
    if (level == 2) {
        ConsLaw l = law;
        l.psi_t = substitute_params(law.psi_t, b);
        l.psi_r = substitute_params(law.psi_r, b);
        sp = second_level_potentiate(sp, l, Orientation::Negated);
        target = Dep::W;
        NormalForm kv = substitute_params(parse_nf("eps*sqrt2*v"), b);
        for (int n : {-1, 1, 2}) factors.push_back(nf_exp(NormalForm(Coeff(n)) * kv));
    }
    const char* umonos[] = {"1", "u", "u^2", "u_r", "u^3", "u*u_r", "u_rr"};
    AnsatzResult out;
    for (int j = 0; j <= 2; ++j) {
        std::vector<NormalForm> monos;
        for (int k = j - 2; k <= j + 1; ++k)
            for (const char* um : umonos)
                for (const auto& f : factors) monos.push_back(r_pow(Coeff(k)) * parse_nf(um) * f);
        AnsatzResult r = search_exponential_laws(sp, target, r_pow(Coeff(j)), monos);
        out.exponents.insert(out.exponents.end(), r.exponents.begin(), r.exponents.end());
        out.laws.insert(out.laws.end(), r.laws.begin(), r.laws.end());
    }
    return out;
}

}  // namespace semiwave
