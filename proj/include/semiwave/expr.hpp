#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semiwave/coeff.hpp"

namespace semiwave {

/// Dependent symbols of the jet space. Barred symbols are the complex
/// conjugates of their partners; f and g are scratch symbols used by the
/// skew-adjointness certificate.
enum class Dep : std::uint8_t { U, Ubar, V, Vbar, W, Wbar, F, Fbar, G, Gbar };

Dep conjugate(Dep d);
const char* dep_name(Dep d);
std::optional<Dep> dep_from_name(std::string_view name);

/// A jet coordinate: dependent symbol with (t, r) derivative orders.
struct JetVar {
    Dep dep = Dep::U;
    int nt = 0;
    int nr = 0;

    auto operator<=>(const JetVar&) const = default;
    std::string name() const;
};

class NormalForm;

enum class AtomKind : std::uint8_t { T, R, Jet, Ln, Exp, Pow, Fun };

struct FunSpec;

/// Base of a power product. Ln/Exp/Pow atoms carry a normalized argument;
/// a Pow atom is a sum (or a non-unit constant) raised to a power that could
/// not be expanded.
struct Atom {
    AtomKind kind = AtomKind::T;
    JetVar jet{};
    std::shared_ptr<const NormalForm> arg;
    std::shared_ptr<const FunSpec> fun;

    static Atom t() { return {AtomKind::T, {}, nullptr, nullptr}; }
    static Atom r() { return {AtomKind::R, {}, nullptr, nullptr}; }
    static Atom of(JetVar j) { return {AtomKind::Jet, j, nullptr, nullptr}; }
    /// Unknown function of leaf atoms (t, r, jets) differentiated `orders`
    /// times in each argument.
    static Atom function(std::string name, std::vector<Atom> args, std::vector<int> orders = {});
    static Atom ln(NormalForm a);
    static Atom exp(NormalForm a);
    static Atom pow(NormalForm a);

    int compare(const Atom& o) const;
    bool operator==(const Atom& o) const { return compare(o) == 0; }
    bool operator<(const Atom& o) const { return compare(o) < 0; }
};

struct FunSpec {
    std::string name;
    std::vector<Atom> args;
    std::vector<int> orders;

    /// Name with the "bar" suffix toggled; arguments conjugated.
    FunSpec conjugated() const;
    std::string text() const;
};

using Factor = std::pair<Atom, Coeff>;

/// Sorted product of atoms with field-valued exponents.
struct Monomial {
    std::vector<Factor> factors;

    bool empty() const { return factors.empty(); }
    int compare(const Monomial& o) const;
    bool operator<(const Monomial& o) const { return compare(o) < 0; }
    bool operator==(const Monomial& o) const { return compare(o) == 0; }
};

/// Canonical form: map from monomial to nonzero coefficient. Two expressions
/// are equal iff their normal forms are identical.
class NormalForm {
public:
    using Terms = std::map<Monomial, Coeff>;

    NormalForm() = default;
    NormalForm(Coeff c);  // NOLINT(implicit)
    NormalForm(Int c) : NormalForm(Coeff(c)) {}  // NOLINT(implicit)
    static NormalForm atom(const Atom& a, const Coeff& exponent = Coeff(1));
    static NormalForm jet(Dep d, int nt = 0, int nr = 0) { return atom(Atom::of({d, nt, nr})); }
    static NormalForm term(Monomial m, Coeff c);

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// Constant value; zero when the form is not constant.
    Coeff constant_value() const;
    std::size_t size() const { return terms_.size(); }

    NormalForm operator-() const;
    NormalForm operator+(const NormalForm& o) const;
    NormalForm operator-(const NormalForm& o) const;
    NormalForm operator*(const NormalForm& o) const;
    NormalForm& operator+=(const NormalForm& o);
    NormalForm& operator-=(const NormalForm& o);
    NormalForm& operator*=(const NormalForm& o) { return *this = *this * o; }
    NormalForm scaled(const Coeff& c) const;

    int compare(const NormalForm& o) const;
    bool operator==(const NormalForm& o) const { return compare(o) == 0; }
    bool operator!=(const NormalForm& o) const { return compare(o) != 0; }

    /// Insert a term without any monomial fix-ups (caller guarantees canonical).
    void add_term(const Monomial& m, const Coeff& c);

private:
    Terms terms_;
};

NormalForm nf_pow(const NormalForm& x, const Coeff& q);
NormalForm nf_ln(const NormalForm& x);
NormalForm nf_exp(const NormalForm& x);
/// The value an atom stands for, as a normal form (atom^1).
NormalForm atom_value(const Atom& a);

/// Every atom occurring in x, including atoms inside Ln/Exp/Pow arguments.
std::vector<Atom> collect_atoms(const NormalForm& x);
/// Every jet variable occurring anywhere in x.
std::vector<JetVar> collect_jets(const NormalForm& x);

/// Rebuild x with atoms replaced. `replace` returns the replacement value of
/// a leaf atom (T, R, Jet) or nullopt to keep it; Ln/Exp/Pow arguments are
/// mapped recursively. `coeffs`, when given, is applied to every coefficient
/// and exponent.
using AtomReplacer = std::function<std::optional<NormalForm>(const Atom&)>;
using CoeffMapper = std::function<Coeff(const Coeff&)>;
NormalForm map_atoms(const NormalForm& x, const AtomReplacer& replace, const CoeffMapper* coeffs = nullptr);

/// Substitute generators (p, m, sigma, ...) in every coefficient and exponent.
NormalForm substitute_params(const NormalForm& x, const std::map<Var, Coeff>& values);

/// u <-> ubar, v <-> vbar, ..., i -> -i.
NormalForm conjugate(const NormalForm& x);

/// Numeric evaluation point.
struct EvalPoint {
    double t = 0.0;
    double r = 0.0;
    std::map<JetVar, std::complex<double>> jets;
    /// Values for p, m, sigma, a, b, c. eps evaluates to sqrt(-sigma).
    std::map<Var, double> params;
};

/// IEEE evaluation. Throws std::domain_error for ln of a non-positive real,
/// a fractional power of a negative real, or an unbound atom.
std::complex<double> eval_numeric(const NormalForm& x, const EvalPoint& at);

/// Immutable expression tree. Sums and products are flattened on
/// construction; power exponents are field elements.
class Expr {
public:
    enum class Kind : std::uint8_t { Const, T, R, Jet, Sum, Product, Power, Ln, Exp, Fun };

    Expr();
    Expr(Coeff c);  // NOLINT(implicit)
    Expr(Int c) : Expr(Coeff(c)) {}  // NOLINT(implicit)

    static Expr t();
    static Expr r();
    static Expr jet(Dep d, int nt = 0, int nr = 0);
    static Expr jet(JetVar j) { return jet(j.dep, j.nt, j.nr); }
    static Expr sum(std::vector<Expr> terms);
    static Expr product(std::vector<Expr> factors);
    static Expr power(Expr base, Coeff exponent);
    static Expr ln(Expr arg);
    static Expr exp(Expr arg);
    static Expr from(const NormalForm& nf);
    static Expr function(const FunSpec& f);

    Kind kind() const;
    const Coeff& value() const;
    JetVar jet_var() const;
    const std::vector<Expr>& children() const;
    const Coeff& exponent() const;
    const FunSpec& fun() const;

    Expr operator-() const;
    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);

private:
    struct Node;
    std::shared_ptr<const Node> node_;
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
};

NormalForm normalize(const Expr& e);
bool is_zero(const Expr& e);
bool equivalent(const Expr& a, const Expr& b);
Expr conjugate(const Expr& e);

/// Bindings for substitute(): leaf atoms (t, r, jet variables) map to
/// expressions, generators map to field elements.
struct Bindings {
    std::map<JetVar, Expr> jets;
    std::optional<Expr> t;
    std::optional<Expr> r;
    std::map<Var, Coeff> params;
};

/// Simultaneous substitution. Throws std::invalid_argument when a jet
/// variable is bound to an expression containing that same variable.
Expr substitute(const Expr& e, const Bindings& b);
NormalForm substitute(const NormalForm& e, const Bindings& b);

std::complex<double> eval_numeric(const Expr& e, const EvalPoint& at);

}  // namespace semiwave
