#include "semiwave/jet.hpp"

#include <functional>
#include <stdexcept>

namespace semiwave {

std::string side_condition_str(const SideCondition& s)
{
    std::string out;
    for (const auto& [v, c] : s) {
        if (!out.empty()) out += ", ";
        out += std::string(var_name(v)) + " = " + c.str();
    }
    return out;
}

std::optional<SideCondition> merge_side_conditions(const SideCondition& a, const SideCondition& b)
{
    SideCondition out = a;
    for (const auto& [v, c] : b) {
        auto [it, inserted] = out.emplace(v, c);
        if (!inserted && it->second != c) return std::nullopt;
    }
    return out;
}

namespace {

/// A derivation on normal forms, fixed by its values on the leaf atoms
/// t, r and jet coordinates.
class Derivation {
public:
    using Leaf = std::function<NormalForm(const Atom&)>;
    explicit Derivation(Leaf leaf) : leaf_(std::move(leaf)) {}

    NormalForm operator()(const NormalForm& e)
    {
        NormalForm out;
        for (const auto& [m, c] : e.terms()) {
            for (std::size_t k = 0; k < m.factors.size(); ++k) {
                const auto& [a, ex] = m.factors[k];
                const NormalForm& da = value_derivative(a);
                if (da.is_zero()) continue;
                Monomial rest;
                rest.factors.reserve(m.factors.size());
                for (std::size_t j = 0; j < m.factors.size(); ++j) {
                    if (j != k) {
                        rest.factors.push_back(m.factors[j]);
                        continue;
                    }
                    Coeff e1 = ex - Coeff(1);
                    if (!e1.is_zero()) rest.factors.emplace_back(a, std::move(e1));
                }
                out += NormalForm::term(std::move(rest), c * ex) * da;
            }
        }
        return out;
    }

private:
    Leaf leaf_;
    std::map<Atom, NormalForm> cache_;

    const NormalForm& value_derivative(const Atom& a)
    {
        auto it = cache_.find(a);
        if (it != cache_.end()) return it->second;
        NormalForm d;
        switch (a.kind) {
            case AtomKind::T:
            case AtomKind::R:
            case AtomKind::Jet: d = leaf_(a); break;
            case AtomKind::Ln: {
                NormalForm inner = (*this)(*a.arg);
                if (!inner.is_zero()) d = inner * nf_pow(*a.arg, Coeff(-1));
                break;
            }
            case AtomKind::Exp: {
                NormalForm inner = (*this)(*a.arg);
                if (!inner.is_zero()) d = atom_value(a) * inner;
                break;
            }
            case AtomKind::Pow: d = (*this)(*a.arg); break;
            case AtomKind::Fun: {
                const FunSpec& f = *a.fun;
                for (std::size_t k = 0; k < f.args.size(); ++k) {
                    NormalForm dk = leaf_(f.args[k]);
                    if (dk.is_zero()) continue;
                    std::vector<int> ord = f.orders;
                    ++ord[k];
                    d += NormalForm::atom(Atom::function(f.name, f.args, std::move(ord))) * dk;
                }
                break;
            }
        }
        return cache_.emplace(a, std::move(d)).first->second;
    }
};

NormalForm one() { return NormalForm(Coeff(1)); }

Derivation total(Dir d)
{
    return Derivation([d](const Atom& a) -> NormalForm {
        switch (a.kind) {
            case AtomKind::T: return d == Dir::T ? one() : NormalForm();
            case AtomKind::R: return d == Dir::R ? one() : NormalForm();
            default: {
                JetVar j = a.jet;
                (d == Dir::T ? j.nt : j.nr) += 1;
                return NormalForm::atom(Atom::of(j));
            }
        }
    });
}

}  // namespace

NormalForm total_derivative(const NormalForm& e, Dir d)
{
    return total(d)(e);
}

NormalForm total_derivative(const NormalForm& e, Dir d, int times)
{
    if (times == 0) return e;
    auto D = total(d);
    NormalForm out = e;
    for (int k = 0; k < times && !out.is_zero(); ++k) out = D(out);
    return out;
}

Expr total_derivative(const Expr& e, Dir d)
{
    return Expr::from(total_derivative(normalize(e), d));
}

NormalForm partial(const NormalForm& e, Dir d)
{
    AtomKind want = d == Dir::T ? AtomKind::T : AtomKind::R;
    return Derivation([want](const Atom& a) { return a.kind == want ? one() : NormalForm(); })(e);
}

NormalForm partial(const NormalForm& e, const JetVar& j)
{
    return Derivation([&j](const Atom& a) {
        return (a.kind == AtomKind::Jet && a.jet == j) ? one() : NormalForm();
    })(e);
}

NormalForm variational_derivative(const NormalForm& density, const JetVar& w, bool dir_t, bool dir_r)
{
    NormalForm out;
    for (const auto& j : collect_jets(density)) {
        if (j.dep != w.dep || j.nt < w.nt || j.nr < w.nr) continue;
        int a = j.nt - w.nt, b = j.nr - w.nr;
        if ((a > 0 && !dir_t) || (b > 0 && !dir_r)) continue;
        if (a + b > 6) throw std::length_error("variational derivative order exceeds 6");
        NormalForm term = partial(density, j);
        term = total_derivative(term, Dir::T, a);
        term = total_derivative(term, Dir::R, b);
        if ((a + b) % 2) out -= term;
        else out += term;
    }
    return out;
}

const char* eq_class_name(EqClass c)
{
    switch (c) {
        case EqClass::WEa: return "WEa";
        case EqClass::WEb: return "WEb";
        case EqClass::WEc: return "WEc";
    }
    return "?";
}

NormalForm EquationSpec::residual() const
{
    return NormalForm::atom(Atom::of(leading())) - rhs;
}

EquationSpec EquationSpec::specialized(const SideCondition& s) const
{
    EquationSpec out = *this;
    if (!s.empty()) out.rhs = substitute_params(rhs, s);
    return out;
}

VectorField VectorField::specialized(const SideCondition& s) const
{
    if (s.empty()) return *this;
    VectorField out = *this;
    out.tau = substitute_params(tau, s);
    out.xi = substitute_params(xi, s);
    out.eta = substitute_params(eta, s);
    if (etabar) out.etabar = substitute_params(*etabar, s);
    return out;
}

bool VectorField::is_zero(bool complex) const
{
    return tau.is_zero() && xi.is_zero() && eta.is_zero() && (!complex || eta_bar().is_zero());
}

NormalForm characteristic(const VectorField& x)
{
    return x.eta - x.tau * NormalForm::jet(Dep::U, 1, 0) - x.xi * NormalForm::jet(Dep::U, 0, 1);
}

NormalForm characteristic_bar(const VectorField& x)
{
    return x.eta_bar() - x.tau * NormalForm::jet(Dep::Ubar, 1, 0) - x.xi * NormalForm::jet(Dep::Ubar, 0, 1);
}

Reducer::Reducer(EquationSpec eq) : eq_(std::move(eq)), rhs_bar_(conjugate(eq_.rhs)) {}

std::optional<NormalForm> Reducer::jet_value(const JetVar& j)
{
    if (j.dep != Dep::U && !(eq_.complex && j.dep == Dep::Ubar)) return std::nullopt;
    const int nt0 = eq_.leading().nt;
    if (j.nt < nt0) return std::nullopt;
    if (j.nt + j.nr > 24) throw std::length_error("reduction order bound exceeded in " + eq_.name);
    auto it = memo_.find(j);
    if (it != memo_.end()) return it->second;
    NormalForm v;
    if (j.nt == nt0 && j.nr == 0) {
        v = j.dep == Dep::U ? eq_.rhs : rhs_bar_;
    } else if (j.nr > 0) {
        v = total_derivative(*jet_value({j.dep, j.nt, j.nr - 1}), Dir::R);
    } else {
        v = (*this)(total_derivative(*jet_value({j.dep, j.nt - 1, 0}), Dir::T));
    }
    return memo_.emplace(j, std::move(v)).first->second;
}

NormalForm Reducer::operator()(const NormalForm& e)
{
    bool any = false;
    for (const auto& j : collect_jets(e)) {
        if (j.nt >= eq_.leading().nt && (j.dep == Dep::U || (eq_.complex && j.dep == Dep::Ubar))) {
            any = true;
            break;
        }
    }
    if (!any) return e;
    return map_atoms(e, [this](const Atom& a) -> std::optional<NormalForm> {
        if (a.kind != AtomKind::Jet) return std::nullopt;
        return jet_value(a.jet);
    });
}

NormalForm reduce_mod_equation(const NormalForm& e, const EquationSpec& eq)
{
    Reducer r(eq);
    return r(e);
}

NormalForm prolong_apply(const VectorField& x, const NormalForm& e, bool complex, Reducer* reduce)
{
    NormalForm out;
    if (!x.tau.is_zero()) out += x.tau * total_derivative(e, Dir::T);
    if (!x.xi.is_zero()) out += x.xi * total_derivative(e, Dir::R);
    NormalForm q = characteristic(x);
    NormalForm qb;
    if (complex) qb = characteristic_bar(x);
    std::map<JetVar, NormalForm> dq;
    std::function<const NormalForm&(const JetVar&)> dQ = [&](const JetVar& j) -> const NormalForm& {
        auto it = dq.find(j);
        if (it != dq.end()) return it->second;
        NormalForm v;
        if (j.nt == 0 && j.nr == 0) v = j.dep == Dep::U ? q : qb;
        else if (j.nr > 0) v = total_derivative(dQ({j.dep, j.nt, j.nr - 1}), Dir::R);
        else v = total_derivative(dQ({j.dep, j.nt - 1, 0}), Dir::T);
        return dq.emplace(j, std::move(v)).first->second;
    };
    for (const auto& j : collect_jets(e)) {
        if (j.dep != Dep::U && !(complex && j.dep == Dep::Ubar)) continue;
        NormalForm d = partial(e, j);
        if (d.is_zero()) continue;
        out += dQ(j) * d;
    }
    return reduce ? (*reduce)(out) : out;
}

namespace {

NormalForm apply_field(const VectorField& x, const NormalForm& f, bool complex)
{
    NormalForm out;
    if (!x.tau.is_zero()) out += x.tau * partial(f, Dir::T);
    if (!x.xi.is_zero()) out += x.xi * partial(f, Dir::R);
    if (!x.eta.is_zero()) out += x.eta * partial(f, JetVar{Dep::U, 0, 0});
    if (complex) {
        NormalForm eb = x.eta_bar();
        if (!eb.is_zero()) out += eb * partial(f, JetVar{Dep::Ubar, 0, 0});
    }
    return out;
}

}  // namespace

VectorField commutator(const VectorField& x0, const VectorField& y0, bool complex)
{
    auto side = merge_side_conditions(x0.side, y0.side);
    if (!side) throw std::invalid_argument("incompatible side conditions: " + x0.label + " and " + y0.label);
    VectorField x = x0.specialized(*side), y = y0.specialized(*side);
    VectorField out;
    out.side = *side;
    out.label = "[" + x0.label + "," + y0.label + "]";
    out.tau = apply_field(x, y.tau, complex) - apply_field(y, x.tau, complex);
    out.xi = apply_field(x, y.xi, complex) - apply_field(y, x.xi, complex);
    out.eta = apply_field(x, y.eta, complex) - apply_field(y, x.eta, complex);
    if (complex) out.etabar = apply_field(x, y.eta_bar(), complex) - apply_field(y, x.eta_bar(), complex);
    return out;
}

}  // namespace semiwave
