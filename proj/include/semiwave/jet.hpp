#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semiwave/expr.hpp"

namespace semiwave {

enum class Dir { T, R };

/// Parameter bindings such as m -> 4/(p-1) or {m -> 2, p -> 1}.
using SideCondition = std::map<Var, Coeff>;

std::string side_condition_str(const SideCondition& s);
/// Union of two side conditions; nullopt when they bind a symbol differently.
std::optional<SideCondition> merge_side_conditions(const SideCondition& a, const SideCondition& b);

NormalForm total_derivative(const NormalForm& e, Dir d);
NormalForm total_derivative(const NormalForm& e, Dir d, int times);
/// Explicit partial derivative in t or r (jet variables held fixed).
NormalForm partial(const NormalForm& e, Dir d);
/// Partial derivative with respect to one jet coordinate.
NormalForm partial(const NormalForm& e, const JetVar& j);

Expr total_derivative(const Expr& e, Dir d);

/// Euler operator sum_J (-D)_J d/d w_J, J ranging over multi-indices in the
/// directions `dirs` on top of w's own derivative orders. Throws
/// std::length_error past order 6.
NormalForm variational_derivative(const NormalForm& density, const JetVar& w, bool dir_t, bool dir_r);
inline NormalForm variational_derivative(const NormalForm& density, Dep w)
{
    return variational_derivative(density, JetVar{w, 0, 0}, true, true);
}

enum class EqClass { WEa, WEb, WEc };
const char* eq_class_name(EqClass c);

struct EquationSpec {
    std::string name;
    EqClass cls = EqClass::WEa;
    /// Right-hand side for the leading jet (u_tt for WEa, u_t otherwise).
    NormalForm rhs;
    bool complex = false;
    std::string notes;

    JetVar leading() const { return {Dep::U, cls == EqClass::WEa ? 2 : 1, 0}; }
    /// leading - rhs
    NormalForm residual() const;
    EquationSpec specialized(const SideCondition& s) const;
};

struct VectorField {
    NormalForm tau;
    NormalForm xi;
    NormalForm eta;
    /// Complex case only; defaults to conjugate(eta) when absent.
    std::optional<NormalForm> etabar;
    SideCondition side;
    std::string label;

    NormalForm eta_bar() const { return etabar ? *etabar : conjugate(eta); }
    VectorField specialized(const SideCondition& s) const;
    bool is_zero(bool complex) const;
};

/// eta - tau*u_t - xi*u_r
NormalForm characteristic(const VectorField& x);
NormalForm characteristic_bar(const VectorField& x);

/// Reduction modulo an equation and its differential consequences; the
/// conjugate equation is adjoined for complex equations. Memoizes the
/// reduced value of every leading-type jet.
class Reducer {
public:
    explicit Reducer(EquationSpec eq);
    NormalForm operator()(const NormalForm& e);
    const EquationSpec& equation() const { return eq_; }

    /// Reduced value of a single jet coordinate, or nullopt if it is not
    /// eliminated by the equation.
    std::optional<NormalForm> jet_value(const JetVar& j);

private:
    EquationSpec eq_;
    NormalForm rhs_bar_;
    std::map<JetVar, NormalForm> memo_;
};

NormalForm reduce_mod_equation(const NormalForm& e, const EquationSpec& eq);

/// Prolonged vector field applied to e; complex fields act through both the
/// eta and etabar branches. If `reduce` is given, the result is reduced.
NormalForm prolong_apply(const VectorField& x, const NormalForm& e, bool complex, Reducer* reduce = nullptr);

/// Lie bracket of point vector fields as first-order operators on
/// (t, r, u[, ubar]). Throws std::invalid_argument on incompatible side
/// conditions.
VectorField commutator(const VectorField& x, const VectorField& y, bool complex);

}  // namespace semiwave
