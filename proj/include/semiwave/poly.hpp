#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace semiwave {

/// Integer type used for polynomial coefficients. Arithmetic is overflow
/// checked; an overflow raises std::overflow_error instead of wrapping.
using Int = long long;

Int checked_add(Int a, Int b);
Int checked_sub(Int a, Int b);
Int checked_mul(Int a, Int b);
Int int_gcd(Int a, Int b);

/// Generators of the coefficient ring. The first six are free parameters;
/// the last four are algebraic and obey sigma^2 = 1, i^2 = -1,
/// eps^2 = -sigma, sqrt2^2 = 2 once a polynomial is reduced (see Coeff).
enum class Var : std::uint8_t { P = 0, M, A, B, C, S, Sigma, I, Eps, Sqrt2 };

inline constexpr int kNumVars = 10;

const char* var_name(Var v);

using Exponents = std::array<std::uint8_t, kNumVars>;

/// Graded lexicographic comparison, p < m < a < b < c < sigma < i < eps < sqrt2.
/// Returns <0, 0, >0.
int compare_exponents(const Exponents& a, const Exponents& b);

struct PolyTerm {
    Exponents exps{};
    Int coeff = 0;
};

/// Sparse multivariate polynomial with integer coefficients. Terms are kept
/// sorted in decreasing graded-lex order with no zero coefficients, so
/// structural equality is polynomial equality.
class Poly {
public:
    Poly() = default;
    explicit Poly(Int c);
    static Poly variable(Var v, int power = 1);
    static Poly from_terms(std::vector<PolyTerm> terms);

    const std::vector<PolyTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// Constant term value; only meaningful when is_constant().
    Int constant_value() const;
    bool is_one() const { return is_constant() && constant_value() == 1; }
    bool has_var(Var v) const;
    int degree(Var v) const;
    int total_degree() const;
    /// Leading term in graded-lex order. Precondition: nonzero.
    const PolyTerm& leading() const { return terms_.front(); }
    Int content() const;

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly scaled(Int s) const;
    /// Exact division of every coefficient by s.
    Poly divided(Int s) const;
    Poly times_monomial(const Exponents& e) const;

    /// Coefficients with respect to v, index = power of v. Each coefficient
    /// is free of v.
    std::vector<Poly> coefficients_in(Var v) const;
    static Poly from_coefficients_in(Var v, const std::vector<Poly>& coeffs);

    /// Apply the quadratic relations of the algebraic generators.
    Poly reduced() const;
    /// Substitute i -> -i.
    Poly conjugated() const;

    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }
    /// Total order used for container keys.
    int compare(const Poly& o) const;

    std::string str() const;

private:
    std::vector<PolyTerm> terms_;
    void canonicalize();
};

/// Exact quotient a / b. Throws std::domain_error when b does not divide a.
Poly exact_divide(const Poly& a, const Poly& b);

/// Greatest common divisor over Z[vars], normalized so that the leading
/// coefficient is positive.
Poly gcd(const Poly& a, const Poly& b);

}  // namespace semiwave
