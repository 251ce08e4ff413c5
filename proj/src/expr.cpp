#include <stdexcept>

#include "semiwave/expr.hpp"

namespace semiwave {

struct Expr::Node {
    Kind kind = Kind::Const;
    Coeff value;      // Const
    JetVar jet;       // Jet
    Coeff exponent;   // Power
    std::shared_ptr<const FunSpec> fun;
    std::vector<Expr> children;
};

namespace {

const std::vector<Expr>& empty_children()
{
    static const std::vector<Expr> e;
    return e;
}

}  // namespace

Expr::Expr() : Expr(Coeff{}) {}

Expr::Expr(Coeff c)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Const;
    n->value = std::move(c);
    node_ = std::move(n);
}

Expr Expr::t()
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::T;
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::r()
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::R;
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::jet(Dep d, int nt, int nr)
{
    if (nt < 0 || nr < 0) throw std::invalid_argument("negative derivative order");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Jet;
    n->jet = {d, nt, nr};
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::sum(std::vector<Expr> terms)
{
    std::vector<Expr> flat;
    for (auto& t : terms) {
        if (t.kind() == Kind::Sum) {
            for (const auto& c : t.children()) flat.push_back(c);
        } else if (!(t.kind() == Kind::Const && t.value().is_zero())) {
            flat.push_back(std::move(t));
        }
    }
    if (flat.empty()) return Expr();
    if (flat.size() == 1) return flat.front();
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sum;
    n->children = std::move(flat);
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::product(std::vector<Expr> factors)
{
    std::vector<Expr> flat;
    for (auto& f : factors) {
        if (f.kind() == Kind::Product) {
            for (const auto& c : f.children()) flat.push_back(c);
        } else if (f.kind() == Kind::Const && f.value().is_zero()) {
            return Expr();
        } else if (!(f.kind() == Kind::Const && f.value().is_one())) {
            flat.push_back(std::move(f));
        }
    }
    if (flat.empty()) return Expr(Coeff(1));
    if (flat.size() == 1) return flat.front();
    auto n = std::make_shared<Node>();
    n->kind = Kind::Product;
    n->children = std::move(flat);
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::power(Expr base, Coeff exponent)
{
    if (exponent.is_one()) return base;
    if (exponent.is_zero()) return Expr(Coeff(1));
    auto n = std::make_shared<Node>();
    n->kind = Kind::Power;
    n->exponent = std::move(exponent);
    n->children.push_back(std::move(base));
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::ln(Expr arg)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Ln;
    n->children.push_back(std::move(arg));
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::exp(Expr arg)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Exp;
    n->children.push_back(std::move(arg));
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::function(const FunSpec& f)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Fun;
    n->fun = std::make_shared<const FunSpec>(f);
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

const FunSpec& Expr::fun() const { return *node_->fun; }

Expr::Kind Expr::kind() const { return node_->kind; }
const Coeff& Expr::value() const { return node_->value; }
JetVar Expr::jet_var() const { return node_->jet; }
const std::vector<Expr>& Expr::children() const { return node_ ? node_->children : empty_children(); }
const Coeff& Expr::exponent() const { return node_->exponent; }

Expr Expr::operator-() const
{
    return product({Expr(Coeff(-1)), *this});
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }

Expr operator/(const Expr& a, const Expr& b)
{
    if (b.kind() == Expr::Kind::Const) return Expr::product({a, Expr(b.value().inverse())});
    return Expr::product({a, Expr::power(b, Coeff(-1))});
}

namespace {

Expr atom_expr(const Atom& a)
{
    switch (a.kind) {
        case AtomKind::T: return Expr::t();
        case AtomKind::R: return Expr::r();
        case AtomKind::Jet: return Expr::jet(a.jet);
        case AtomKind::Ln: return Expr::ln(Expr::from(*a.arg));
        case AtomKind::Exp: return Expr::exp(Expr::from(*a.arg));
        case AtomKind::Pow: return Expr::from(*a.arg);
        case AtomKind::Fun: return Expr::function(*a.fun);
    }
    return Expr();
}

}  // namespace

Expr Expr::from(const NormalForm& nf)
{
    std::vector<Expr> terms;
    for (const auto& [m, c] : nf.terms()) {
        std::vector<Expr> f;
        if (!c.is_one() || m.empty()) f.emplace_back(c);
        for (const auto& [a, e] : m.factors) f.push_back(Expr::power(atom_expr(a), e));
        terms.push_back(Expr::product(std::move(f)));
    }
    return Expr::sum(std::move(terms));
}

NormalForm normalize(const Expr& e)
{
    switch (e.kind()) {
        case Expr::Kind::Const: return NormalForm(e.value());
        case Expr::Kind::T: return NormalForm::atom(Atom::t());
        case Expr::Kind::R: return NormalForm::atom(Atom::r());
        case Expr::Kind::Jet: return NormalForm::atom(Atom::of(e.jet_var()));
        case Expr::Kind::Sum: {
            NormalForm acc;
            for (const auto& c : e.children()) acc += normalize(c);
            return acc;
        }
        case Expr::Kind::Product: {
            NormalForm acc(Coeff(1));
            for (const auto& c : e.children()) {
                acc = acc * normalize(c);
                if (acc.is_zero()) break;
            }
            return acc;
        }
        case Expr::Kind::Power: return nf_pow(normalize(e.children()[0]), e.exponent());
        case Expr::Kind::Ln: return nf_ln(normalize(e.children()[0]));
        case Expr::Kind::Exp: return nf_exp(normalize(e.children()[0]));
        case Expr::Kind::Fun: {
            const FunSpec& f = e.fun();
            return NormalForm::atom(Atom::function(f.name, f.args, f.orders));
        }
    }
    return {};
}

bool is_zero(const Expr& e)
{
    return normalize(e).is_zero();
}

bool equivalent(const Expr& a, const Expr& b)
{
    return normalize(a) == normalize(b);
}

Expr conjugate(const Expr& e)
{
    switch (e.kind()) {
        case Expr::Kind::Const: return Expr(e.value().conjugate());
        case Expr::Kind::T:
        case Expr::Kind::R: return e;
        case Expr::Kind::Jet: {
            JetVar j = e.jet_var();
            j.dep = conjugate(j.dep);
            return Expr::jet(j);
        }
        case Expr::Kind::Sum:
        case Expr::Kind::Product: {
            std::vector<Expr> c;
            for (const auto& x : e.children()) c.push_back(conjugate(x));
            return e.kind() == Expr::Kind::Sum ? Expr::sum(std::move(c)) : Expr::product(std::move(c));
        }
        case Expr::Kind::Power: return Expr::power(conjugate(e.children()[0]), e.exponent().conjugate());
        case Expr::Kind::Ln: return Expr::ln(conjugate(e.children()[0]));
        case Expr::Kind::Exp: return Expr::exp(conjugate(e.children()[0]));
        case Expr::Kind::Fun: return Expr::function(e.fun().conjugated());
    }
    return e;
}

NormalForm substitute(const NormalForm& e, const Bindings& b)
{
    std::map<JetVar, NormalForm> jets;
    for (const auto& [j, x] : b.jets) {
        NormalForm v = normalize(x);
        for (const auto& k : collect_jets(v))
            if (k == j) throw std::invalid_argument("jet variable " + j.name() + " bound to an expression containing it");
        jets.emplace(j, std::move(v));
    }
    std::optional<NormalForm> tv, rv;
    if (b.t) tv = normalize(*b.t);
    if (b.r) rv = normalize(*b.r);
    AtomReplacer rep = [&](const Atom& a) -> std::optional<NormalForm> {
        switch (a.kind) {
            case AtomKind::T: return tv;
            case AtomKind::R: return rv;
            case AtomKind::Jet: {
                auto it = jets.find(a.jet);
                if (it == jets.end()) return std::nullopt;
                return it->second;
            }
            default: return std::nullopt;
        }
    };
    NormalForm out = substitute_params(e, b.params);
    if (!jets.empty() || tv || rv) out = map_atoms(out, rep);
    return out;
}

Expr substitute(const Expr& e, const Bindings& b)
{
    return Expr::from(substitute(normalize(e), b));
}

std::complex<double> eval_numeric(const Expr& e, const EvalPoint& at)
{
    return eval_numeric(normalize(e), at);
}

}  // namespace semiwave
