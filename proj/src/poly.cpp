#include "semiwave/poly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace semiwave {

Int checked_add(Int a, Int b)
{
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in polynomial arithmetic");
    return r;
}

Int checked_sub(Int a, Int b)
{
    Int r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("integer overflow in polynomial arithmetic");
    return r;
}

Int checked_mul(Int a, Int b)
{
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in polynomial arithmetic");
    return r;
}

Int int_gcd(Int a, Int b)
{
    return std::gcd(a, b);
}

const char* var_name(Var v)
{
    switch (v) {
        case Var::P: return "p";
        case Var::M: return "m";
        case Var::A: return "a";
        case Var::B: return "b";
        case Var::C: return "c";
        case Var::S: return "s";
        case Var::Sigma: return "sigma";
        case Var::I: return "i";
        case Var::Eps: return "eps";
        case Var::Sqrt2: return "sqrt2";
    }
    return "?";
}

int compare_exponents(const Exponents& a, const Exponents& b)
{
    int da = 0, db = 0;
    for (int k = 0; k < kNumVars; ++k) {
        da += a[k];
        db += b[k];
    }
    if (da != db) return da < db ? -1 : 1;
    for (int k = kNumVars - 1; k >= 0; --k) {
        if (a[k] != b[k]) return a[k] < b[k] ? -1 : 1;
    }
    return 0;
}

namespace {

Exponents add_exps(const Exponents& a, const Exponents& b)
{
    Exponents r{};
    for (int k = 0; k < kNumVars; ++k) {
        int s = a[k] + b[k];
        if (s > 255) throw std::overflow_error("polynomial degree overflow");
        r[k] = static_cast<std::uint8_t>(s);
    }
    return r;
}

bool divides(const Exponents& d, const Exponents& n)
{
    for (int k = 0; k < kNumVars; ++k)
        if (d[k] > n[k]) return false;
    return true;
}

Exponents sub_exps(const Exponents& a, const Exponents& b)
{
    Exponents r{};
    for (int k = 0; k < kNumVars; ++k) r[k] = static_cast<std::uint8_t>(a[k] - b[k]);
    return r;
}

}  // namespace

Poly::Poly(Int c)
{
    if (c != 0) terms_.push_back({Exponents{}, c});
}

Poly Poly::variable(Var v, int power)
{
    Poly p;
    PolyTerm t;
    t.exps[static_cast<int>(v)] = static_cast<std::uint8_t>(power);
    t.coeff = 1;
    p.terms_.push_back(t);
    return p;
}

Poly Poly::from_terms(std::vector<PolyTerm> terms)
{
    Poly p;
    p.terms_ = std::move(terms);
    p.canonicalize();
    return p;
}

void Poly::canonicalize()
{
    std::sort(terms_.begin(), terms_.end(),
              [](const PolyTerm& a, const PolyTerm& b) { return compare_exponents(a.exps, b.exps) > 0; });
    std::vector<PolyTerm> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        if (!out.empty() && out.back().exps == t.exps) {
            out.back().coeff = checked_add(out.back().coeff, t.coeff);
        } else {
            out.push_back(t);
        }
        if (out.back().coeff == 0) out.pop_back();
    }
    terms_ = std::move(out);
}

bool Poly::is_constant() const
{
    if (terms_.empty()) return true;
    if (terms_.size() != 1) return false;
    for (auto e : terms_[0].exps)
        if (e) return false;
    return true;
}

Int Poly::constant_value() const
{
    return terms_.empty() ? 0 : terms_[0].coeff;
}

bool Poly::has_var(Var v) const
{
    const int k = static_cast<int>(v);
    for (const auto& t : terms_)
        if (t.exps[k]) return true;
    return false;
}

int Poly::degree(Var v) const
{
    const int k = static_cast<int>(v);
    int d = 0;
    for (const auto& t : terms_) d = std::max<int>(d, t.exps[k]);
    return d;
}

int Poly::total_degree() const
{
    int d = 0;
    for (const auto& t : terms_) {
        int s = 0;
        for (auto e : t.exps) s += e;
        d = std::max(d, s);
    }
    return d;
}

Int Poly::content() const
{
    Int g = 0;
    for (const auto& t : terms_) {
        g = int_gcd(g, t.coeff);
        if (g == 1) break;
    }
    return g;
}

Poly Poly::operator-() const
{
    Poly r = *this;
    for (auto& t : r.terms_) t.coeff = checked_sub(0, t.coeff);
    return r;
}

Poly Poly::operator+(const Poly& o) const
{
    Poly r;
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
        int c;
        if (i == terms_.size()) c = -1;
        else if (j == o.terms_.size()) c = 1;
        else c = compare_exponents(terms_[i].exps, o.terms_[j].exps);
        if (c > 0) {
            r.terms_.push_back(terms_[i++]);
        } else if (c < 0) {
            r.terms_.push_back(o.terms_[j++]);
        } else {
            Int s = checked_add(terms_[i].coeff, o.terms_[j].coeff);
            if (s != 0) r.terms_.push_back({terms_[i].exps, s});
            ++i;
            ++j;
        }
    }
    return r;
}

Poly Poly::operator-(const Poly& o) const
{
    return *this + (-o);
}

Poly Poly::operator*(const Poly& o) const
{
    if (is_zero() || o.is_zero()) return Poly{};
    Poly r;
    r.terms_.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_)
        for (const auto& b : o.terms_) r.terms_.push_back({add_exps(a.exps, b.exps), checked_mul(a.coeff, b.coeff)});
    r.canonicalize();
    return r;
}

Poly Poly::scaled(Int s) const
{
    if (s == 0) return Poly{};
    Poly r = *this;
    for (auto& t : r.terms_) t.coeff = checked_mul(t.coeff, s);
    return r;
}

Poly Poly::divided(Int s) const
{
    Poly r = *this;
    for (auto& t : r.terms_) {
        if (t.coeff % s != 0) throw std::domain_error("inexact integer division of polynomial");
        t.coeff /= s;
    }
    return r;
}

Poly Poly::times_monomial(const Exponents& e) const
{
    Poly r = *this;
    for (auto& t : r.terms_) t.exps = add_exps(t.exps, e);
    return r;
}

std::vector<Poly> Poly::coefficients_in(Var v) const
{
    const int k = static_cast<int>(v);
    std::vector<std::vector<PolyTerm>> buckets(static_cast<std::size_t>(degree(v)) + 1);
    for (const auto& t : terms_) {
        PolyTerm u = t;
        u.exps[k] = 0;
        buckets[t.exps[k]].push_back(u);
    }
    std::vector<Poly> out;
    out.reserve(buckets.size());
    for (auto& b : buckets) out.push_back(Poly::from_terms(std::move(b)));
    return out;
}

Poly Poly::from_coefficients_in(Var v, const std::vector<Poly>& coeffs)
{
    const int k = static_cast<int>(v);
    std::vector<PolyTerm> terms;
    for (std::size_t d = 0; d < coeffs.size(); ++d)
        for (auto t : coeffs[d].terms_) {
            t.exps[k] = static_cast<std::uint8_t>(d);
            terms.push_back(t);
        }
    return from_terms(std::move(terms));
}

Poly Poly::reduced() const
{
    constexpr int kS = static_cast<int>(Var::Sigma);
    constexpr int kI = static_cast<int>(Var::I);
    constexpr int kE = static_cast<int>(Var::Eps);
    constexpr int kK = static_cast<int>(Var::Sqrt2);
    bool needed = false;
    for (const auto& t : terms_)
        if (t.exps[kS] > 1 || t.exps[kI] > 1 || t.exps[kE] > 1 || t.exps[kK] > 1) {
            needed = true;
            break;
        }
    if (!needed) return *this;
    std::vector<PolyTerm> out;
    out.reserve(terms_.size());
    for (auto t : terms_) {
        // eps^2 = -sigma
        int e = t.exps[kE];
        if (e >= 2) {
            int h = e / 2;
            if (h % 2) t.coeff = checked_sub(0, t.coeff);
            t.exps[kS] = static_cast<std::uint8_t>(t.exps[kS] + h);
            t.exps[kE] = static_cast<std::uint8_t>(e % 2);
        }
        t.exps[kS] = static_cast<std::uint8_t>(t.exps[kS] % 2);
        int ei = t.exps[kI];
        if ((ei / 2) % 2) t.coeff = checked_sub(0, t.coeff);
        t.exps[kI] = static_cast<std::uint8_t>(ei % 2);
        int ek = t.exps[kK];
        for (int h = 0; h < ek / 2; ++h) t.coeff = checked_mul(t.coeff, 2);
        t.exps[kK] = static_cast<std::uint8_t>(ek % 2);
        out.push_back(t);
    }
    return from_terms(std::move(out));
}

Poly Poly::conjugated() const
{
    constexpr int kI = static_cast<int>(Var::I);
    Poly r = *this;
    for (auto& t : r.terms_)
        if (t.exps[kI] % 2) t.coeff = checked_sub(0, t.coeff);
    return r;
}

bool Poly::operator==(const Poly& o) const
{
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].exps != o.terms_[i].exps || terms_[i].coeff != o.terms_[i].coeff) return false;
    return true;
}

int Poly::compare(const Poly& o) const
{
    const std::size_t n = std::min(terms_.size(), o.terms_.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = compare_exponents(terms_[i].exps, o.terms_[i].exps);
        if (c) return c;
        if (terms_[i].coeff != o.terms_[i].coeff) return terms_[i].coeff < o.terms_[i].coeff ? -1 : 1;
    }
    if (terms_.size() != o.terms_.size()) return terms_.size() < o.terms_.size() ? -1 : 1;
    return 0;
}

std::string Poly::str() const
{
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        Int c = t.coeff;
        bool has_vars = false;
        for (auto e : t.exps)
            if (e) has_vars = true;
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        Int a = c < 0 ? -c : c;
        bool need_star = false;
        if (!has_vars || a != 1) {
            os << a;
            need_star = true;
        }
        for (int k = 0; k < kNumVars; ++k) {
            if (!t.exps[k]) continue;
            if (need_star) os << "*";
            os << var_name(static_cast<Var>(k));
            if (t.exps[k] > 1) os << "^" << static_cast<int>(t.exps[k]);
            need_star = true;
        }
    }
    return os.str();
}

Poly exact_divide(const Poly& a, const Poly& b)
{
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    if (b.is_constant()) return a.divided(b.constant_value());
    const PolyTerm& lb = b.leading();
    std::vector<PolyTerm> quot;
    Poly r = a;
    while (!r.is_zero()) {
        const PolyTerm& lr = r.leading();
        if (!divides(lb.exps, lr.exps) || lr.coeff % lb.coeff != 0)
            throw std::domain_error("inexact polynomial division");
        PolyTerm q{sub_exps(lr.exps, lb.exps), lr.coeff / lb.coeff};
        quot.push_back(q);
        r = r - b.times_monomial(q.exps).scaled(q.coeff);
    }
    return Poly::from_terms(std::move(quot));
}

namespace {

Poly normalize_sign(Poly p)
{
    if (!p.is_zero() && p.leading().coeff < 0) return -p;
    return p;
}

Poly gcd_impl(const Poly& a, const Poly& b);

Poly content_in(const Poly& a, Var v)
{
    Poly g;
    for (const auto& c : a.coefficients_in(v)) {
        if (c.is_zero()) continue;
        g = gcd_impl(g, c);
        if (g.is_one()) break;
    }
    return g;
}

Poly primitive_in(const Poly& a, Var v)
{
    if (a.is_zero()) return a;
    return exact_divide(a, content_in(a, v));
}

/// Pseudo-remainder of a by b with respect to v (lazy variant; differs from
/// the textbook prem only by a power of lc(b), irrelevant for gcd).
Poly prem(const Poly& a, const Poly& b, Var v)
{
    const int db = b.degree(v);
    const auto bc = b.coefficients_in(v);
    const Poly& lcb = bc.back();
    Poly r = a;
    Exponents shift{};
    while (!r.is_zero() && r.degree(v) >= db) {
        const int dr = r.degree(v);
        const Poly lcr = r.coefficients_in(v).back();
        shift[static_cast<int>(v)] = static_cast<std::uint8_t>(dr - db);
        r = lcb * r - (lcr * b).times_monomial(shift);
    }
    return r;
}

Poly gcd_impl(const Poly& a, const Poly& b)
{
    if (a.is_zero()) return normalize_sign(b);
    if (b.is_zero()) return normalize_sign(a);
    if (a == b) return normalize_sign(a);
    if (a.is_constant() || b.is_constant()) return Poly(int_gcd(a.content(), b.content()));
    int vi = -1;
    for (int k = 0; k < kNumVars && vi < 0; ++k) {
        const Var v = static_cast<Var>(k);
        if (a.has_var(v) || b.has_var(v)) vi = k;
    }
    const Var v = static_cast<Var>(vi);
    if (!a.has_var(v)) return gcd_impl(a, content_in(b, v));
    if (!b.has_var(v)) return gcd_impl(content_in(a, v), b);
    const Poly ca = content_in(a, v);
    const Poly cb = content_in(b, v);
    Poly pa = exact_divide(a, ca);
    Poly pb = exact_divide(b, cb);
    const Poly g = gcd_impl(ca, cb);
    if (pa.degree(v) < pb.degree(v)) std::swap(pa, pb);
    while (!pb.is_zero()) {
        Poly r = prem(pa, pb, v);
        pa = std::move(pb);
        pb = primitive_in(r, v);
    }
    pa = primitive_in(pa, v);
    return normalize_sign(g * pa);
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b)
{
    return gcd_impl(a, b);
}

}  // namespace semiwave
