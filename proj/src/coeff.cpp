#include "semiwave/coeff.hpp"

#include <cmath>
#include <stdexcept>

namespace semiwave {

namespace {

/// Flip the sign of every term with an odd power of `v`.
Poly flip(const Poly& p, Var v)
{
    std::vector<PolyTerm> terms = p.terms();
    for (auto& t : terms)
        if (t.exps[static_cast<int>(v)] % 2) t.coeff = -t.coeff;
    return Poly::from_terms(std::move(terms));
}

}  // namespace

Coeff::Coeff(Int n, Int d) : num_(n), den_(d)
{
    if (d == 0) throw std::domain_error("zero denominator");
    canonicalize();
}

Coeff::Coeff(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den))
{
    if (den_.is_zero()) throw std::domain_error("zero denominator");
    for (int k = static_cast<int>(Var::Sigma); k < kNumVars; ++k)
        if (den_.has_var(static_cast<Var>(k))) {
            // Move algebraic generators out of the denominator.
            Coeff q = Coeff(num_, Poly(1)) / Coeff(den_, Poly(1));
            *this = q;
            return;
        }
    num_ = num_.reduced();
    canonicalize();
}

void Coeff::canonicalize()
{
    if (num_.is_zero()) {
        den_ = Poly(1);
        return;
    }
    if (den_.is_constant()) {
        Int d = den_.constant_value();
        Int g = int_gcd(num_.content(), d);
        if (d < 0) g = -g;
        if (g != 1) {
            num_ = num_.divided(g);
            den_ = Poly(d / g);
        }
        return;
    }
    if (num_.is_constant()) {
        Int g = int_gcd(num_.constant_value(), den_.content());
        if (den_.leading().coeff < 0) g = -g;
        if (g != 1) {
            num_ = num_.divided(g);
            den_ = den_.divided(g);
        }
        return;
    }
    Poly g = gcd(num_, den_);
    if (!g.is_one()) {
        num_ = exact_divide(num_, g);
        den_ = exact_divide(den_, g);
    }
    if (den_.leading().coeff < 0) {
        num_ = -num_;
        den_ = -den_;
    }
}

std::pair<Int, Int> Coeff::rational() const
{
    return {num_.constant_value(), den_.constant_value()};
}

Coeff Coeff::operator-() const
{
    return Coeff(-num_, den_, Canonical{});
}

Coeff Coeff::operator+(const Coeff& o) const
{
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (den_ == o.den_) {
        Coeff r(num_ + o.num_, den_, Canonical{});
        if (!den_.is_one()) r.canonicalize();
        else if (r.num_.is_zero()) r.den_ = Poly(1);
        return r;
    }
    Coeff r(num_ * o.den_ + o.num_ * den_, den_ * o.den_, Canonical{});
    r.canonicalize();
    return r;
}

Coeff Coeff::operator-(const Coeff& o) const
{
    return *this + (-o);
}

Coeff Coeff::operator*(const Coeff& o) const
{
    if (is_zero() || o.is_zero()) return Coeff{};
    if (den_.is_one() && o.den_.is_one()) return Coeff((num_ * o.num_).reduced(), Poly(1), Canonical{});
    Coeff r((num_ * o.num_).reduced(), den_ * o.den_, Canonical{});
    r.canonicalize();
    return r;
}

Coeff Coeff::inverse() const
{
    if (is_zero()) throw std::domain_error("division by zero coefficient");
    // Multiply through by conjugates until the numerator is free of the
    // algebraic generators: x * x' with x' = x|_{g -> -g}.
    Poly n = num_;
    Poly cof(1);
    for (Var g : {Var::Eps, Var::Sigma, Var::I, Var::Sqrt2}) {
        if (!n.has_var(g)) continue;
        Poly c = flip(n, g);
        cof = (cof * c).reduced();
        n = (n * c).reduced();
        if (n.is_zero()) throw std::domain_error("division by a zero divisor");
    }
    Coeff r((den_ * cof).reduced(), n, Canonical{});
    r.canonicalize();
    return r;
}

Coeff Coeff::operator/(const Coeff& o) const
{
    return *this * o.inverse();
}

Coeff Coeff::pow(Int n) const
{
    if (n < 0) return inverse().pow(-n);
    Coeff r(1);
    Coeff b = *this;
    while (n) {
        if (n & 1) r *= b;
        n >>= 1;
        if (n) b *= b;
    }
    return r;
}

Coeff Coeff::conjugate() const
{
    if (!num_.has_var(Var::I)) return *this;
    return Coeff(num_.conjugated(), den_, Canonical{});
}

namespace {

Coeff eval_poly(const Poly& p, const std::map<Var, Coeff>& values)
{
    Coeff acc;
    for (const auto& t : p.terms()) {
        Coeff term(t.coeff);
        std::vector<PolyTerm> rest;
        PolyTerm keep{{}, 1};
        for (int k = 0; k < kNumVars; ++k) {
            if (!t.exps[k]) continue;
            auto it = values.find(static_cast<Var>(k));
            if (it == values.end()) keep.exps[k] = t.exps[k];
            else term *= it->second.pow(t.exps[k]);
        }
        term *= Coeff(Poly::from_terms({keep}), Poly(1));
        acc += term;
    }
    return acc;
}

}  // namespace

Coeff Coeff::substitute(const std::map<Var, Coeff>& values) const
{
    bool touched = false;
    for (const auto& [v, _] : values)
        if (depends_on(v)) touched = true;
    if (!touched) return *this;
    Coeff n = eval_poly(num_, values);
    Coeff d = eval_poly(den_, values);
    if (d.is_zero()) throw std::domain_error("substitution makes a denominator vanish");
    return n / d;
}

std::complex<double> Coeff::eval(const std::map<Var, std::complex<double>>& values) const
{
    auto value_of = [&](Var v) -> std::complex<double> {
        auto it = values.find(v);
        if (it != values.end()) return it->second;
        if (v == Var::I) return {0.0, 1.0};
        if (v == Var::Sqrt2) return {std::sqrt(2.0), 0.0};
        throw std::domain_error(std::string("unbound parameter ") + var_name(v));
    };
    auto ev = [&](const Poly& p) {
        std::complex<double> acc = 0.0;
        for (const auto& t : p.terms()) {
            std::complex<double> term = static_cast<double>(t.coeff);
            for (int k = 0; k < kNumVars; ++k)
                for (int e = 0; e < t.exps[k]; ++e) term *= value_of(static_cast<Var>(k));
            acc += term;
        }
        return acc;
    };
    return ev(num_) / ev(den_);
}

int Coeff::compare(const Coeff& o) const
{
    int c = den_.compare(o.den_);
    if (c) return c;
    return num_.compare(o.num_);
}

std::string Coeff::str() const
{
    if (den_.is_one()) return num_.str();
    auto wrap = [](const Poly& p) {
        std::string s = p.str();
        if (p.terms().size() > 1 || (!p.is_constant() && (p.leading().coeff != 1 || p.total_degree() > 1)))
            return "(" + s + ")";
        return s;
    };
    std::string n = num_.str();
    if (num_.terms().size() > 1) n = "(" + n + ")";
    return n + "/" + wrap(den_);
}

std::optional<Coeff> solve_linear(const Coeff& x, Var v)
{
    if (x.num().degree(v) != 1) return std::nullopt;
    const auto cs = x.num().coefficients_in(v);
    return -Coeff(cs[0], Poly(1)) / Coeff(cs[1], Poly(1));
}

namespace {

std::optional<Int> isqrt_exact(Int n)
{
    if (n < 0) return std::nullopt;
    Int r = static_cast<Int>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    if (r * r != n) return std::nullopt;
    return r;
}

std::optional<Coeff> rational_sqrt(const Coeff& x)
{
    if (!x.is_rational()) return std::nullopt;
    auto [n, d] = x.rational();
    auto a = isqrt_exact(n), b = isqrt_exact(d);
    if (!a || !b) return std::nullopt;
    return Coeff(*a, *b);
}

}  // namespace

std::optional<Coeff> field_sqrt(const Coeff& x)
{
    if (x.is_zero()) return Coeff(0);
    const Coeff i = Coeff::var(Var::I), s2 = Coeff::var(Var::Sqrt2);
    for (const Coeff& u : {Coeff(1), i, s2, i * s2, Coeff(1) + i, Coeff(1) - i}) {
        auto q = rational_sqrt(x / (u * u));
        if (q) return *q * u;
    }
    return std::nullopt;
}

std::vector<Coeff> field_roots(const Coeff& x, Var v)
{
    std::vector<Poly> cs = x.num().coefficients_in(v);
    std::vector<Coeff> out;
    std::size_t lo = 0;
    while (lo < cs.size() && cs[lo].is_zero()) ++lo;
    if (lo == cs.size()) return out;
    if (lo > 0) out.push_back(Coeff(0));
    cs.erase(cs.begin(), cs.begin() + static_cast<std::ptrdiff_t>(lo));
    auto c = [&](std::size_t k) { return Coeff(cs[k], Poly(1)); };
    if (cs.size() == 2) {
        out.push_back(-c(0) / c(1));
    } else if (cs.size() == 3) {
        Coeff disc = c(1) * c(1) - Coeff(4) * c(0) * c(2);
        if (auto r = field_sqrt(disc)) {
            out.push_back((-c(1) + *r) / (Coeff(2) * c(2)));
            if (!r->is_zero()) out.push_back((-c(1) - *r) / (Coeff(2) * c(2)));
        }
    }
    return out;
}

}  // namespace semiwave
