#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "semiwave/expr.hpp"

namespace semiwave {

Dep conjugate(Dep d)
{
    auto k = static_cast<std::uint8_t>(d);
    return static_cast<Dep>(k ^ 1u);
}

const char* dep_name(Dep d)
{
    switch (d) {
        case Dep::U: return "u";
        case Dep::Ubar: return "ubar";
        case Dep::V: return "v";
        case Dep::Vbar: return "vbar";
        case Dep::W: return "w";
        case Dep::Wbar: return "wbar";
        case Dep::F: return "f";
        case Dep::Fbar: return "fbar";
        case Dep::G: return "g";
        case Dep::Gbar: return "gbar";
    }
    return "?";
}

std::optional<Dep> dep_from_name(std::string_view name)
{
    for (int k = 0; k <= static_cast<int>(Dep::Gbar); ++k) {
        auto d = static_cast<Dep>(k);
        if (name == dep_name(d)) return d;
    }
    return std::nullopt;
}

std::string JetVar::name() const
{
    std::string s = dep_name(dep);
    if (nt || nr) {
        s += '_';
        s.append(static_cast<std::size_t>(nt), 't');
        s.append(static_cast<std::size_t>(nr), 'r');
    }
    return s;
}

Atom Atom::ln(NormalForm a)
{
    return {AtomKind::Ln, {}, std::make_shared<const NormalForm>(std::move(a)), nullptr};
}

Atom Atom::exp(NormalForm a)
{
    return {AtomKind::Exp, {}, std::make_shared<const NormalForm>(std::move(a)), nullptr};
}

Atom Atom::pow(NormalForm a)
{
    return {AtomKind::Pow, {}, std::make_shared<const NormalForm>(std::move(a)), nullptr};
}

Atom Atom::function(std::string name, std::vector<Atom> args, std::vector<int> orders)
{
    for (const auto& a : args)
        if (a.kind != AtomKind::T && a.kind != AtomKind::R && a.kind != AtomKind::Jet)
            throw std::invalid_argument("unknown-function arguments must be t, r or jet variables");
    if (orders.empty()) orders.assign(args.size(), 0);
    if (orders.size() != args.size()) throw std::invalid_argument("derivative orders do not match arguments");
    auto spec = std::make_shared<FunSpec>(FunSpec{std::move(name), std::move(args), std::move(orders)});
    return {AtomKind::Fun, {}, nullptr, std::move(spec)};
}

FunSpec FunSpec::conjugated() const
{
    FunSpec out = *this;
    const std::string bar = "bar";
    if (name.size() > bar.size() && name.compare(name.size() - bar.size(), bar.size(), bar) == 0)
        out.name = name.substr(0, name.size() - bar.size());
    else
        out.name = name + bar;
    for (auto& a : out.args)
        if (a.kind == AtomKind::Jet) a.jet.dep = conjugate(a.jet.dep);
    return out;
}

std::string FunSpec::text() const
{
    bool any = false;
    std::string ds;
    for (std::size_t k = 0; k < args.size(); ++k)
        for (int n = 0; n < orders[k]; ++n) {
            any = true;
            const Atom& a = args[k];
            ds += ", ";
            ds += a.kind == AtomKind::T ? std::string("t") : a.kind == AtomKind::R ? std::string("r") : a.jet.name();
        }
    return any ? "diff(" + name + ds + ")" : name;
}

int Atom::compare(const Atom& o) const
{
    if (kind != o.kind) return kind < o.kind ? -1 : 1;
    switch (kind) {
        case AtomKind::T:
        case AtomKind::R: return 0;
        case AtomKind::Jet:
            if (jet == o.jet) return 0;
            return jet < o.jet ? -1 : 1;
        case AtomKind::Fun: {
            if (fun == o.fun) return 0;
            if (int c = fun->name.compare(o.fun->name)) return c < 0 ? -1 : 1;
            if (fun->args.size() != o.fun->args.size()) return fun->args.size() < o.fun->args.size() ? -1 : 1;
            for (std::size_t k = 0; k < fun->args.size(); ++k)
                if (int c = fun->args[k].compare(o.fun->args[k])) return c;
            if (fun->orders == o.fun->orders) return 0;
            return fun->orders < o.fun->orders ? -1 : 1;
        }
        default:
            if (arg == o.arg) return 0;
            return arg->compare(*o.arg);
    }
}

int Monomial::compare(const Monomial& o) const
{
    const std::size_t n = std::min(factors.size(), o.factors.size());
    for (std::size_t k = 0; k < n; ++k) {
        int c = factors[k].first.compare(o.factors[k].first);
        if (c) return c;
        c = factors[k].second.compare(o.factors[k].second);
        if (c) return c;
    }
    if (factors.size() != o.factors.size()) return factors.size() < o.factors.size() ? -1 : 1;
    return 0;
}

// ---------------------------------------------------------------------------
// NormalForm arithmetic

NormalForm::NormalForm(Coeff c)
{
    if (!c.is_zero()) terms_.emplace(Monomial{}, std::move(c));
}

NormalForm NormalForm::atom(const Atom& a, const Coeff& exponent)
{
    Monomial m;
    m.factors.emplace_back(a, Coeff(1));
    NormalForm base = term(std::move(m), Coeff(1));
    if (exponent.is_one()) return base;
    return nf_pow(base, exponent);
}

bool NormalForm::is_constant() const
{
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Coeff NormalForm::constant_value() const
{
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Coeff{} : it->second;
}

void NormalForm::add_term(const Monomial& m, const Coeff& c)
{
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

NormalForm NormalForm::operator-() const
{
    NormalForm r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

NormalForm& NormalForm::operator+=(const NormalForm& o)
{
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

NormalForm& NormalForm::operator-=(const NormalForm& o)
{
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

NormalForm NormalForm::operator+(const NormalForm& o) const
{
    NormalForm r = *this;
    r += o;
    return r;
}

NormalForm NormalForm::operator-(const NormalForm& o) const
{
    NormalForm r = *this;
    r -= o;
    return r;
}

NormalForm NormalForm::scaled(const Coeff& c) const
{
    if (c.is_zero()) return {};
    if (c.is_one()) return *this;
    NormalForm r = *this;
    for (auto& [m, v] : r.terms_) v = v * c;
    return r;
}

int NormalForm::compare(const NormalForm& o) const
{
    auto a = terms_.begin();
    auto b = o.terms_.begin();
    for (; a != terms_.end() && b != o.terms_.end(); ++a, ++b) {
        int c = a->first.compare(b->first);
        if (c) return c;
        c = a->second.compare(b->second);
        if (c) return c;
    }
    if (a == terms_.end() && b == o.terms_.end()) return 0;
    return a == terms_.end() ? -1 : 1;
}

namespace {

bool is_nonneg_integer(const Coeff& c)
{
    return c.is_integer() && c.rational().first >= 0;
}

/// Largest integer n >= 0 such that e - n still has a nonnegative constant
/// term, for exponents with a constant denominator. S^(p+1) becomes S*S^p.
Int integer_part(const Coeff& e)
{
    if (!e.den().is_constant()) return 0;
    const auto& t = e.num().terms();
    if (t.empty()) return 0;
    const auto& last = t.back();
    for (auto x : last.exps)
        if (x) return 0;
    Int n = last.coeff / e.den().constant_value();
    return n > 0 ? n : 0;
}

/// Merge two sorted factor lists, adding exponents of equal atoms.
std::vector<Factor> merge_factors(const std::vector<Factor>& a, const std::vector<Factor>& b)
{
    std::vector<Factor> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        int c;
        if (i == a.size()) c = 1;
        else if (j == b.size()) c = -1;
        else c = a[i].first.compare(b[j].first);
        if (c < 0) {
            out.push_back(a[i++]);
        } else if (c > 0) {
            out.push_back(b[j++]);
        } else {
            Coeff e = a[i].second + b[j].second;
            if (!e.is_zero()) out.emplace_back(a[i].first, std::move(e));
            ++i;
            ++j;
        }
    }
    return out;
}

bool needs_fix(const std::vector<Factor>& f)
{
    int exps = 0;
    for (const auto& [a, e] : f) {
        if (a.kind == AtomKind::Exp) {
            if (++exps > 1 || !e.is_one()) return true;
        } else if (a.kind == AtomKind::Pow && (is_nonneg_integer(e) || integer_part(e) > 0)) {
            return true;
        }
    }
    return false;
}

void insert_sorted(std::vector<Factor>& f, Factor x)
{
    auto it = std::lower_bound(f.begin(), f.end(), x.first,
                               [](const Factor& a, const Atom& b) { return a.first.compare(b) < 0; });
    f.insert(it, std::move(x));
}

/// Canonicalize a product whose factors may contain several exp atoms or
/// expandable powers of sums.
NormalForm fix_monomial(std::vector<Factor> f, const Coeff& c)
{
    NormalForm exp_arg;
    bool has_exp = false;
    std::vector<std::pair<std::shared_ptr<const NormalForm>, Int>> expand;
    std::vector<Factor> rest;
    for (auto& [a, e] : f) {
        if (a.kind == AtomKind::Exp) {
            exp_arg += a.arg->scaled(e);
            has_exp = true;
        } else if (a.kind == AtomKind::Pow && is_nonneg_integer(e)) {
            expand.emplace_back(a.arg, e.rational().first);
        } else if (a.kind == AtomKind::Pow && integer_part(e) > 0) {
            Int n = integer_part(e);
            expand.emplace_back(a.arg, n);
            rest.emplace_back(std::move(a), e - Coeff(n));
        } else {
            rest.emplace_back(std::move(a), std::move(e));
        }
    }
    if (has_exp && !exp_arg.is_zero()) insert_sorted(rest, {Atom::exp(std::move(exp_arg)), Coeff(1)});
    NormalForm out = NormalForm::term(Monomial{std::move(rest)}, c);
    for (const auto& [base, n] : expand) out = out * nf_pow(*base, Coeff(n));
    return out;
}

}  // namespace

NormalForm NormalForm::term(Monomial m, Coeff c)
{
    NormalForm r;
    if (c.is_zero()) return r;
    if (needs_fix(m.factors)) return fix_monomial(std::move(m.factors), c);
    r.terms_.emplace(std::move(m), std::move(c));
    return r;
}

NormalForm NormalForm::operator*(const NormalForm& o) const
{
    NormalForm r;
    if (is_zero() || o.is_zero()) return r;
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            Coeff c = ca * cb;
            if (ma.empty()) {
                r.add_term(mb, c);
                continue;
            }
            if (mb.empty()) {
                r.add_term(ma, c);
                continue;
            }
            auto f = merge_factors(ma.factors, mb.factors);
            if (needs_fix(f)) r += fix_monomial(std::move(f), c);
            else r.add_term(Monomial{std::move(f)}, c);
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Powers, logarithms, exponentials

namespace {

/// Exact integer d-th root of n >= 0 if it exists.
std::optional<Int> exact_root(Int n, Int d)
{
    if (n < 0) return std::nullopt;
    if (n < 2) return n;
    auto guess = static_cast<Int>(std::llround(std::pow(static_cast<double>(n), 1.0 / static_cast<double>(d))));
    for (Int g = std::max<Int>(0, guess - 1); g <= guess + 1; ++g) {
        Int acc = 1;
        bool over = false;
        for (Int k = 0; k < d; ++k) {
            if (__builtin_mul_overflow(acc, g, &acc)) {
                over = true;
                break;
            }
        }
        if (!over && acc == n) return g;
    }
    return std::nullopt;
}

/// c^q for a rational constant c and rational q, when exactly representable.
std::optional<Coeff> rational_power(const Coeff& c, const Coeff& q)
{
    if (!c.is_rational() || !q.is_rational()) return std::nullopt;
    auto [a, b] = c.rational();
    auto [n, d] = q.rational();
    if (d == 1) return c.pow(n);
    bool neg = a < 0;
    if (neg && d % 2 == 0) return std::nullopt;
    Int aa = neg ? -a : a;
    auto ra = exact_root(aa, d);
    auto rb = exact_root(b, d);
    if (ra && rb) {
        Coeff root(neg ? -*ra : *ra, *rb);
        return root.pow(n);
    }
    if (d == 2 && !neg) {
        // sqrt(a/b) = sqrt(a*b)/b; accept a*b = 2*s^2.
        Int ab = checked_mul(aa, b);
        if (ab % 2 == 0) {
            if (auto s = exact_root(ab / 2, 2)) {
                Coeff root = Coeff(*s, b) * Coeff::var(Var::Sqrt2);
                return root.pow(n);
            }
        }
    }
    return std::nullopt;
}

}  // namespace

NormalForm nf_pow(const NormalForm& x, const Coeff& q)
{
    if (q.is_zero()) return NormalForm(Coeff(1));
    if (q.is_one()) return x;
    if (x.is_zero()) {
        if (q.is_rational() && q.rational().first > 0) return {};
        throw std::domain_error("zero raised to a non-positive power");
    }
    if (x.size() == 1) {
        const auto& [m, c] = *x.terms().begin();
        NormalForm coeff_part;
        if (c.is_one()) {
            coeff_part = NormalForm(Coeff(1));
        } else if (q.is_integer()) {
            coeff_part = NormalForm(c.pow(q.rational().first));
        } else if (auto v = rational_power(c, q)) {
            coeff_part = NormalForm(*v);
        } else {
            Monomial pm;
            pm.factors.emplace_back(Atom::pow(NormalForm(c)), q);
            coeff_part = NormalForm::term(std::move(pm), Coeff(1));
        }
        std::vector<Factor> f;
        f.reserve(m.factors.size());
        for (const auto& [a, e] : m.factors) {
            if (a.kind == AtomKind::Exp) f.emplace_back(Atom::exp(a.arg->scaled(e * q)), Coeff(1));
            else f.emplace_back(a, e * q);
        }
        std::sort(f.begin(), f.end(), [](const Factor& l, const Factor& r) { return l.first.compare(r.first) < 0; });
        return coeff_part * NormalForm::term(Monomial{std::move(f)}, Coeff(1));
    }
    if (is_nonneg_integer(q)) {
        Int n = q.rational().first;
        NormalForm result(Coeff(1));
        NormalForm base = x;
        while (n) {
            if (n & 1) result = result * base;
            n >>= 1;
            if (n) base = base * base;
        }
        return result;
    }
    Monomial pm;
    pm.factors.emplace_back(Atom::pow(x), q);
    return NormalForm::term(std::move(pm), Coeff(1));
}

NormalForm atom_value(const Atom& a)
{
    switch (a.kind) {
        case AtomKind::Pow: return *a.arg;
        default: {
            Monomial m;
            m.factors.emplace_back(a, Coeff(1));
            return NormalForm::term(std::move(m), Coeff(1));
        }
    }
}

NormalForm nf_ln(const NormalForm& x)
{
    if (x.is_zero()) throw std::domain_error("logarithm of zero");
    if (x.size() != 1) return NormalForm::atom(Atom::ln(x));
    const auto& [m, c] = *x.terms().begin();
    NormalForm out;
    if (!c.is_one()) out += NormalForm::atom(Atom::ln(NormalForm(c)));
    for (const auto& [a, e] : m.factors) {
        switch (a.kind) {
            case AtomKind::Exp: out += a.arg->scaled(e); break;
            case AtomKind::Pow: out += NormalForm::atom(Atom::ln(*a.arg)).scaled(e); break;
            default: out += NormalForm::atom(Atom::ln(atom_value(a))).scaled(e); break;
        }
    }
    return out;
}

NormalForm nf_exp(const NormalForm& x)
{
    if (x.is_zero()) return NormalForm(Coeff(1));
    return NormalForm::atom(Atom::exp(x));
}

// ---------------------------------------------------------------------------
// Traversal and substitution

namespace {

void collect_into(const NormalForm& x, std::set<Atom>& out)
{
    for (const auto& [m, c] : x.terms())
        for (const auto& [a, e] : m.factors) {
            out.insert(a);
            if (a.arg) collect_into(*a.arg, out);
            if (a.fun) out.insert(a.fun->args.begin(), a.fun->args.end());
        }
}

}  // namespace

std::vector<Atom> collect_atoms(const NormalForm& x)
{
    std::set<Atom> s;
    collect_into(x, s);
    return {s.begin(), s.end()};
}

std::vector<JetVar> collect_jets(const NormalForm& x)
{
    std::vector<JetVar> out;
    for (const auto& a : collect_atoms(x))
        if (a.kind == AtomKind::Jet) out.push_back(a.jet);
    return out;
}

NormalForm map_atoms(const NormalForm& x, const AtomReplacer& replace, const CoeffMapper* coeffs)
{
    std::map<Atom, std::optional<NormalForm>> cache;
    std::function<std::optional<NormalForm>(const Atom&)> image = [&](const Atom& a) -> std::optional<NormalForm> {
        auto it = cache.find(a);
        if (it != cache.end()) return it->second;
        std::optional<NormalForm> v;
        switch (a.kind) {
            case AtomKind::Ln: {
                NormalForm arg = map_atoms(*a.arg, replace, coeffs);
                if (arg != *a.arg) v = nf_ln(arg);
                break;
            }
            case AtomKind::Exp: {
                NormalForm arg = map_atoms(*a.arg, replace, coeffs);
                if (arg != *a.arg) v = nf_exp(arg);
                break;
            }
            case AtomKind::Pow: {
                NormalForm arg = map_atoms(*a.arg, replace, coeffs);
                if (arg != *a.arg) v = arg;
                break;
            }
            default: v = replace(a); break;
        }
        cache.emplace(a, v);
        return v;
    };

    NormalForm out;
    for (const auto& [m, c] : x.terms()) {
        Coeff cc = coeffs ? (*coeffs)(c) : c;
        if (cc.is_zero()) continue;
        bool simple = true;
        std::vector<std::optional<NormalForm>> images;
        images.reserve(m.factors.size());
        for (const auto& [a, e] : m.factors) {
            images.push_back(image(a));
            if (images.back()) simple = false;
            else if (coeffs && (*coeffs)(e) != e) simple = false;
        }
        if (simple) {
            out += NormalForm::term(m, cc);
            continue;
        }
        NormalForm t(cc);
        for (std::size_t k = 0; k < m.factors.size() && !t.is_zero(); ++k) {
            const auto& [a, e] = m.factors[k];
            Coeff ee = coeffs ? (*coeffs)(e) : e;
            if (images[k]) {
                t = t * nf_pow(*images[k], ee);
            } else if (a.kind == AtomKind::Pow) {
                t = t * nf_pow(*a.arg, ee);
            } else {
                t = t * NormalForm::atom(a, ee);
            }
        }
        out += t;
    }
    return out;
}

NormalForm substitute_params(const NormalForm& x, const std::map<Var, Coeff>& values)
{
    if (values.empty()) return x;
    CoeffMapper f = [&](const Coeff& c) { return c.substitute(values); };
    return map_atoms(x, [](const Atom&) { return std::optional<NormalForm>{}; }, &f);
}

NormalForm conjugate(const NormalForm& x)
{
    NormalForm out;
    for (const auto& [m, c] : x.terms()) {
        std::vector<Factor> f;
        f.reserve(m.factors.size());
        for (const auto& [a, e] : m.factors) {
            Atom b = a;
            if (a.kind == AtomKind::Jet) b.jet.dep = conjugate(a.jet.dep);
            else if (a.fun) b.fun = std::make_shared<const FunSpec>(a.fun->conjugated());
            else if (a.arg) b.arg = std::make_shared<const NormalForm>(conjugate(*a.arg));
            f.emplace_back(std::move(b), e.conjugate());
        }
        std::sort(f.begin(), f.end(), [](const Factor& l, const Factor& r) { return l.first.compare(r.first) < 0; });
        out.add_term(Monomial{std::move(f)}, c.conjugate());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Numeric evaluation

namespace {

using cplx = std::complex<double>;

bool is_barred(Dep d)
{
    return static_cast<std::uint8_t>(d) & 1u;
}

cplx real_power(cplx base, cplx expo, bool conj_branch)
{
    if (std::abs(expo.imag()) > 0.0) return std::pow(base, expo);
    const double q = expo.real();
    const double qr = std::round(q);
    if (q == qr && std::abs(q) < 1e9) {
        auto n = static_cast<long long>(qr);
        cplx acc = 1.0;
        cplx b = n < 0 ? 1.0 / base : base;
        for (long long k = std::llabs(n); k; k >>= 1) {
            if (k & 1) acc *= b;
            b *= b;
        }
        return acc;
    }
    if (base.imag() == 0.0) {
        if (base.real() > 0.0) return std::pow(base.real(), q);
        if (!conj_branch) {
            if (base.real() == 0.0 && q > 0) return 0.0;
            throw std::domain_error("fractional power of a non-positive real value");
        }
    }
    if (conj_branch) return std::conj(std::pow(std::conj(base), q));
    return std::pow(base, q);
}

struct Evaluator {
    const EvalPoint& at;
    std::map<Var, std::complex<double>> params;

    explicit Evaluator(const EvalPoint& p) : at(p)
    {
        for (const auto& [v, x] : p.params) params[v] = x;
        auto s = p.params.find(Var::Sigma);
        if (s != p.params.end()) params[Var::Eps] = std::sqrt(cplx(-s->second, 0.0));
    }

    cplx coeff(const Coeff& c) const { return c.eval(params); }

    cplx atom(const Atom& a) const
    {
        switch (a.kind) {
            case AtomKind::T: return at.t;
            case AtomKind::R: return at.r;
            case AtomKind::Jet: {
                auto it = at.jets.find(a.jet);
                if (it == at.jets.end()) throw std::domain_error("unbound jet variable " + a.jet.name());
                return it->second;
            }
            case AtomKind::Ln: {
                cplx v = eval(*a.arg);
                if (v.imag() == 0.0 && v.real() <= 0.0) throw std::domain_error("logarithm of a non-positive value");
                return std::log(v);
            }
            case AtomKind::Exp: return std::exp(eval(*a.arg));
            case AtomKind::Pow: return eval(*a.arg);
            case AtomKind::Fun: throw std::domain_error("cannot evaluate unknown function " + a.fun->name);
        }
        return 0.0;
    }

    cplx eval(const NormalForm& x) const
    {
        cplx acc = 0.0;
        for (const auto& [m, c] : x.terms()) {
            cplx term = coeff(c);
            for (const auto& [a, e] : m.factors) {
                bool conj_branch = a.kind == AtomKind::Jet && is_barred(a.jet.dep);
                term *= real_power(atom(a), coeff(e), conj_branch);
            }
            acc += term;
        }
        return acc;
    }
};

}  // namespace

std::complex<double> eval_numeric(const NormalForm& x, const EvalPoint& at)
{
    return Evaluator(at).eval(x);
}

}  // namespace semiwave
