#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "semiwave/poly.hpp"

namespace semiwave {

/// Element of Q(p, m, a, b, c)[sigma, i, eps, sqrt2] with the relations
/// sigma^2 = 1, i^2 = -1, eps^2 = -sigma, sqrt2^2 = 2.
///
/// Stored as num/den with num reduced by the relations, den free of the
/// algebraic generators, gcd(num, den) = 1 and a positive leading
/// coefficient on den. The representation is canonical, so equality is
/// structural.
class Coeff {
public:
    Coeff() : num_(), den_(1) {}
    Coeff(Int n) : num_(n), den_(1) {}  // NOLINT(implicit)
    Coeff(Int n, Int d);
    Coeff(Poly num, Poly den);
    static Coeff var(Var v) { return Coeff(Poly::variable(v), Poly(1)); }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_rational() const { return num_.is_constant() && den_.is_constant(); }
    bool is_integer() const { return num_.is_constant() && den_.is_one(); }
    /// (numerator, denominator) when is_rational().
    std::pair<Int, Int> rational() const;
    bool depends_on(Var v) const { return num_.has_var(v) || den_.has_var(v); }

    Coeff operator-() const;
    Coeff operator+(const Coeff& o) const;
    Coeff operator-(const Coeff& o) const;
    Coeff operator*(const Coeff& o) const;
    /// Throws std::domain_error on division by zero or by a zero divisor
    /// (e.g. 1 + sigma).
    Coeff operator/(const Coeff& o) const;
    Coeff& operator+=(const Coeff& o) { return *this = *this + o; }
    Coeff& operator*=(const Coeff& o) { return *this = *this * o; }
    Coeff inverse() const;
    Coeff pow(Int n) const;

    /// i -> -i.
    Coeff conjugate() const;
    /// Simultaneous substitution of generators by field elements.
    Coeff substitute(const std::map<Var, Coeff>& values) const;
    /// Numeric value at the given generator values; i and sqrt2 evaluate to
    /// their complex values unless overridden.
    std::complex<double> eval(const std::map<Var, std::complex<double>>& values) const;

    bool operator==(const Coeff& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Coeff& o) const { return !(*this == o); }
    int compare(const Coeff& o) const;
    bool operator<(const Coeff& o) const { return compare(o) < 0; }

    /// Text in the expression grammar, e.g. "(p + 1)/(p - 1)".
    std::string str() const;

private:
    Poly num_;
    Poly den_;
    struct Canonical {};
    Coeff(Poly num, Poly den, Canonical) : num_(std::move(num)), den_(std::move(den)) {}
    void canonicalize();
};

/// Solve c1*p + c0 = 0 style linear equations: returns the value of `v`
/// making `x` vanish when the numerator of x has degree exactly 1 in v.
std::optional<Coeff> solve_linear(const Coeff& x, Var v);

/// Square root inside the field for constants of the form q * u^2 with q a
/// rational square and u in {1, i, sqrt2, i sqrt2, 1 + i, 1 - i}.
std::optional<Coeff> field_sqrt(const Coeff& x);
/// Roots in v of the numerator of x, up to degree 2 after removing powers
/// of v, when they lie in the field. Coefficients must be free of other
/// parameters for the quadratic case.
std::vector<Coeff> field_roots(const Coeff& x, Var v);

}  // namespace semiwave
