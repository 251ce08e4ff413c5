#include "semiwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

#include "semiwave/parse.hpp"

namespace semiwave {

namespace {

using cplx = std::complex<double>;

enum class Kind { NLW, NLS, DNLS, DNLSH, MKDV1, MKDV2, MKDVH };

Kind kind_of(const std::string& name)
{
    static const std::map<std::string, Kind> kinds{
        {"NLW", Kind::NLW},     {"NLS", Kind::NLS},       {"dNLS", Kind::DNLS},     {"dNLS-H", Kind::DNLSH},
        {"mKdV-1", Kind::MKDV1}, {"mKdV-2", Kind::MKDV2}, {"mKdV-H", Kind::MKDVH},
    };
    auto it = kinds.find(name);
    if (it == kinds.end()) throw std::invalid_argument("unknown equation '" + name + "'");
    return it->second;
}

inline double powr(double x, double e)
{
    if (e == 0.0) return 1.0;
    if (e == 1.0) return x;
    if (e == 2.0) return x * x;
    if (e == 3.0) return x * x * x;
    if (e == 0.5) return std::sqrt(x);
    return std::pow(x, e);
}

inline double conj_of(double x) { return x; }
inline cplx conj_of(cplx x) { return std::conj(x); }
inline double abs2(double x) { return x * x; }
inline double abs2(cplx x) { return std::norm(x); }

template <class T>
T from_cplx(cplx z);
template <>
double from_cplx<double>(cplx z)
{
    return z.real();
}
template <>
cplx from_cplx<cplx>(cplx z)
{
    return z;
}

/// Ghost-extended copy: even reflection at r = 0, odd at R_outer.
template <class T>
std::vector<T> extend(const std::vector<T>& u, int g)
{
    const int n = static_cast<int>(u.size()) - 1;
    std::vector<T> e(u.size() + 2 * g);
    for (int k = 0; k <= n; ++k) e[k + g] = u[k];
    for (int k = 1; k <= g; ++k) {
        e[g - k] = u[std::min(k, n)];
        e[g + n + k] = -u[std::max(n - k, 0)];
    }
    return e;
}

template <class T>
struct Derivs {
    std::vector<T> d1, d2, d3;
};

template <class T>
Derivs<T> derivatives(const std::vector<T>& u, double h, int order, bool third)
{
    constexpr int g = 3;
    const int n = static_cast<int>(u.size());
    std::vector<T> e = extend(u, g);
    Derivs<T> d{std::vector<T>(n), std::vector<T>(n), third ? std::vector<T>(n) : std::vector<T>{}};
    const double h2 = h * h, h3 = h2 * h;
    for (int j = 0; j < n; ++j) {
        const T* x = &e[j + g];
        if (order == 2) {
            d.d1[j] = (x[1] - x[-1]) / (2.0 * h);
            d.d2[j] = (x[1] - 2.0 * x[0] + x[-1]) / h2;
            if (third) d.d3[j] = (x[2] - 2.0 * x[1] + 2.0 * x[-1] - x[-2]) / (2.0 * h3);
        } else {
            d.d1[j] = (-x[2] + 8.0 * x[1] - 8.0 * x[-1] + x[-2]) / (12.0 * h);
            d.d2[j] = (-x[2] + 16.0 * x[1] - 30.0 * x[0] + 16.0 * x[-1] - x[-2]) / (12.0 * h2);
            if (third)
                d.d3[j] = (-x[3] + 8.0 * x[2] - 13.0 * x[1] + 13.0 * x[-1] - 8.0 * x[-2] + x[-3]) / (8.0 * h3);
        }
    }
    return d;
}

/// Pointwise right-hand sides on a grid.
template <class T>
struct Kernel {
    Kind kind;
    double sigma, p, m, h;
    bool singular;

    bool third() const { return kind == Kind::MKDV1 || kind == Kind::MKDV2 || kind == Kind::MKDVH; }

    T point(const T& u, const T& ur, const T& urr, const T& urrr, double r) const
    {
        const double ri = r > 0.0 ? 1.0 / r : 0.0;
        const T lap = r > 0.0 ? urr + m * ri * ur : (1.0 + m) * urr;
        const cplx I(0.0, 1.0);
        if constexpr (std::is_same_v<T, cplx>) {
            const double a2 = abs2(u);
            const double ap = powr(a2, p / 2.0);
            switch (kind) {
                case Kind::NLS: return -I * (lap + sigma * ap * u);
                case Kind::DNLS: return -I * lap + sigma * ap * (ur + m / (p + 2.0) * ri * u);
                case Kind::DNLSH: {
                    const T cross = a2 == 0.0 ? T(0.0) : powr(a2, p / 2.0 - 1.0) * u * u * conj_of(ur);
                    return -I * (lap + m * (m - 2.0) / 4.0 * ri * ri * u) +
                           sigma * ((p / 2.0 + 1.0) * ap * ur + p / 2.0 * cross + m / 2.0 * ap * ri * u);
                }
                default: break;
            }
        } else {
            const double up = std::pow(u, p);
            switch (kind) {
                case Kind::NLW: return lap + sigma * up;
                case Kind::MKDV1:
                case Kind::MKDV2:
                case Kind::MKDVH: {
                    T base = urrr + m * ri * urr - m * ri * ri * ur + sigma * (p + 1.0) * up * ur;
                    const T tail = m * ri * (lap + sigma * up * u);
                    if (kind == Kind::MKDV2) base += tail;
                    if (kind == Kind::MKDVH) base += 0.5 * tail;
                    return base;
                }
                default: break;
            }
        }
        throw std::logic_error("equation kind does not match the field type");
    }

    /// F(u) at every node; node N is pinned by the Dirichlet condition.
    std::vector<T> apply(const std::vector<T>& u, int order) const
    {
        const int n = static_cast<int>(u.size()) - 1;
        Derivs<T> d = derivatives(u, h, order, third());
        std::vector<T> f(u.size());
        const T zero{};
        for (int j = singular ? 1 : 0; j < n; ++j)
            f[j] = point(u[j], d.d1[j], d.d2[j], third() ? d.d3[j] : zero, j * h);
        if (singular) f[0] = (4.0 * f[1] - f[2]) / 3.0;
        f[n] = zero;
        return f;
    }
};

template <class T>
struct Stepper {
    Kernel<T> k;
    bool second_order;
    int order;

    void rhs(const std::vector<T>& u, const std::vector<T>& v, std::vector<T>& du, std::vector<T>& dv) const
    {
        if (second_order) {
            du = v;
            du.back() = T{};
            dv = k.apply(u, order);
        } else {
            du = k.apply(u, order);
        }
    }

    void step(std::vector<T>& u, std::vector<T>& v, double dt) const
    {
        const std::size_t n = u.size();
        std::vector<T> k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v, tu(n), tv(v.size());
        auto stage = [&](const std::vector<T>& du, const std::vector<T>& dv, double f) {
            for (std::size_t i = 0; i < n; ++i) tu[i] = u[i] + f * du[i];
            for (std::size_t i = 0; i < v.size(); ++i) tv[i] = v[i] + f * dv[i];
        };
        rhs(u, v, k1u, k1v);
        stage(k1u, k1v, dt / 2);
        rhs(tu, tv, k2u, k2v);
        stage(k2u, k2v, dt / 2);
        rhs(tu, tv, k3u, k3v);
        stage(k3u, k3v, dt);
        rhs(tu, tv, k4u, k4v);
        for (std::size_t i = 0; i < n; ++i) u[i] += dt / 6 * (k1u[i] + 2.0 * k2u[i] + 2.0 * k3u[i] + k4u[i]);
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] += dt / 6 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
    }
};

template <class T>
std::vector<T> to_typed(const Field& f)
{
    std::vector<T> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = from_cplx<T>(f[i]);
    return out;
}

template <class T>
Field to_field(const std::vector<T>& f)
{
    return Field(f.begin(), f.end());
}

template <class T>
bool finite_below(const std::vector<T>& u, double threshold)
{
    for (const T& x : u) {
        const double a = std::abs(x);
        if (!std::isfinite(a) || a > threshold) return false;
    }
    return true;
}

template <class T>
Kernel<T> make_kernel(const RadialProblem& pb)
{
    const RunParams& rp = pb.params();
    return {kind_of(rp.equation), double(rp.sigma), rp.p, rp.m, pb.grid().dr(), pb.singular_origin()};
}

template <class T>
Trajectory integrate_typed(const RadialProblem& pb, const SolverState& s0, double T_final, const StepPolicy& policy,
                           int samples)
{
    Stepper<T> st{make_kernel<T>(pb), pb.eq_class() == EqClass::WEa, pb.params().spatial_order};
    std::vector<T> u = to_typed<T>(s0.u), v = to_typed<T>(s0.ut);
    if (st.second_order && v.size() != u.size()) v.assign(u.size(), T{});

    const double dt0 = pb.step_size(policy);
    long per_sample = std::max<long>(1, static_cast<long>(std::ceil(T_final / dt0 / samples)));
    long total = per_sample * samples;
    const double dt = T_final > 0.0 ? T_final / total : 0.0;

    Trajectory tr;
    auto record = [&](double t) {
        SolverState s;
        s.time = t;
        s.u = to_field(u);
        if (st.second_order) s.ut = to_field(v);
        s.dt = dt;
        tr.samples.push_back(std::move(s));
    };
    record(s0.time);
    if (T_final <= 0.0) return tr;
    for (long n = 1; n <= total; ++n) {
        st.step(u, v, dt);
        tr.steps = n;
        const double t = s0.time + n * dt;
        if (!finite_below(u, policy.blowup_threshold)) {
            tr.blowup = true;
            tr.blowup_time = t;
            record(t);
            return tr;
        }
        if (n % per_sample == 0) record(t);
    }
    return tr;
}

/// u and its t-derivatives (levels) with finite-difference r-derivatives.
struct JetTable {
    std::map<std::pair<int, int>, Field> a;

    cplx at(const JetVar& jv, int j) const
    {
        auto it = a.find({jv.nt, jv.nr});
        if (it == a.end()) throw std::domain_error("jet " + jv.name() + " not available numerically");
        cplx z = it->second[j];
        return jv.dep == Dep::Ubar ? std::conj(z) : z;
    }
};

void add_level(JetTable& tab, int nt, const Field& f, double h, int max_nr)
{
    tab.a[{nt, 0}] = f;
    if (max_nr == 0) return;
    Derivs<cplx> d = derivatives(f, h, 4, max_nr >= 3);
    tab.a[{nt, 1}] = d.d1;
    if (max_nr >= 2) tab.a[{nt, 2}] = d.d2;
    if (max_nr >= 3) tab.a[{nt, 3}] = d.d3;
}

JetTable jet_table(const RadialProblem& pb, const SolverState& s, const std::vector<JetVar>& jets)
{
    int max_nt = 0;
    std::map<int, int> max_nr;
    for (const JetVar& jv : jets) {
        if (jv.dep != Dep::U && jv.dep != Dep::Ubar)
            throw std::domain_error("jet " + jv.name() + " has no numeric value");
        if (jv.nr > 3) throw std::domain_error("jet " + jv.name() + " exceeds third r-derivative");
        max_nt = std::max(max_nt, jv.nt);
        max_nr[jv.nt] = std::max(max_nr[jv.nt], jv.nr);
    }
    const bool wea = pb.eq_class() == EqClass::WEa;
    if (max_nt > (wea ? 2 : 1)) throw std::domain_error("time derivative order too high for numeric evaluation");
    JetTable tab;
    const double h = pb.grid().dr();
    add_level(tab, 0, s.u, h, max_nr[0]);
    if (max_nt >= 1) {
        auto [du, dv] = pb.spatial_rhs(s);
        add_level(tab, 1, du, h, max_nr[1]);
        if (max_nt >= 2) add_level(tab, 2, dv, h, max_nr[2]);
    }
    return tab;
}

EvalPoint point_at(const JetTable& tab, const std::vector<JetVar>& jets, const std::map<Var, double>& params, double t,
                   double r, int j)
{
    EvalPoint pt;
    pt.t = t;
    pt.r = r;
    pt.params = params;
    for (const JetVar& jv : jets) pt.jets[jv] = tab.at(jv, j);
    return pt;
}

std::vector<cplx> cubic_resample(const Field& u, double lambda, double amp)
{
    const int n = static_cast<int>(u.size()) - 1;
    constexpr int g = 3;
    Field e = extend(u, g);
    Field out(u.size());
    for (int j = 0; j <= n; ++j) {
        const double s = j / lambda;
        if (s > n) continue;
        const int i = std::min(static_cast<int>(std::floor(s)), n - 1);
        const double f = s - i;
        const cplx* x = &e[i + g];
        const double w0 = -f * (f - 1) * (f - 2) / 6, w1 = (f + 1) * (f - 1) * (f - 2) / 2,
                     w2 = -(f + 1) * f * (f - 2) / 2, w3 = (f + 1) * f * (f - 1) / 6;
        out[j] = amp * (w0 * x[-1] + w1 * x[0] + w2 * x[1] + w3 * x[2]);
    }
    return out;
}

double parse_number(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        try {
            NormalForm nf = parse_nf(v);
            cplx z = eval_numeric(nf, {});
            if (z.imag() != 0.0) throw std::invalid_argument("");
            return z.real();
        } catch (const std::exception&) {
            throw std::invalid_argument("config key '" + key + "': not a number: " + v);
        }
    }
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

// ---------------------------------------------------------------------------

Grid::Grid(double R, int n, double m_) : R_outer(R), N(n), m(m_)
{
    if (N < 16) throw std::invalid_argument("grid needs N >= 16");
    if (!(R_outer > 0.0)) throw std::invalid_argument("grid needs R_outer > 0");
}

std::vector<double> Grid::weights() const
{
    std::vector<double> w(N + 1);
    const double h = dr();
    for (int j = 0; j <= N; ++j) w[j] = std::pow(r(j), m) * h;
    w[0] *= 0.5;
    w[N] *= 0.5;
    return w;
}

bool SolverState::finite() const
{
    auto ok = [](const Field& f) {
        return std::all_of(f.begin(), f.end(), [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
    };
    return ok(u) && ok(ut);
}

double SolverState::max_abs() const
{
    double m = 0.0;
    for (cplx z : u) m = std::max(m, std::abs(z));
    return m;
}

RadialProblem::RadialProblem(RunParams params, Grid grid) : params_(std::move(params)), grid_(grid)
{
    kind_of(params_.equation);
    if (grid_.m != params_.m) throw std::invalid_argument("grid m differs from run m");
    if (params_.sigma != 1 && params_.sigma != -1) throw std::invalid_argument("sigma must be +1 or -1");
    if (params_.spatial_order != 2 && params_.spatial_order != 4) throw std::invalid_argument("spatial_order must be 2 or 4");
    EquationSpec eq = Catalog::instance().get_equation(params_.equation).eq;
    cls_ = eq.cls;
    complex_ = eq.complex;
}

bool RadialProblem::singular_origin() const
{
    Kind k = kind_of(params_.equation);
    return params_.m != 0.0 && k != Kind::NLW && k != Kind::NLS;
}

std::map<Var, double> RadialProblem::eval_params() const
{
    return {{Var::P, params_.p}, {Var::M, params_.m}, {Var::Sigma, double(params_.sigma)}};
}

SolverState RadialProblem::initial_state(const NormalForm& u0, const std::optional<NormalForm>& ut0) const
{
    SolverState s;
    s.u.assign(grid_.N + 1, 0.0);
    EvalPoint pt;
    pt.params = eval_params();
    for (int j = 0; j < grid_.N; ++j) {
        pt.r = grid_.r(j);
        s.u[j] = eval_numeric(u0, pt);
    }
    if (cls_ == EqClass::WEa) {
        s.ut.assign(grid_.N + 1, 0.0);
        if (ut0)
            for (int j = 0; j < grid_.N; ++j) {
                pt.r = grid_.r(j);
                s.ut[j] = eval_numeric(*ut0, pt);
            }
    }
    if (!complex_) {
        for (cplx& z : s.u) z = z.real();
        for (cplx& z : s.ut) z = z.real();
    }
    return s;
}

std::pair<Field, Field> RadialProblem::spatial_rhs(const SolverState& s) const
{
    if (complex_) {
        Kernel<cplx> k = make_kernel<cplx>(*this);
        return {k.apply(s.u, params_.spatial_order), {}};
    }
    Kernel<double> k = make_kernel<double>(*this);
    if (cls_ == EqClass::WEa) {
        Field du = s.ut;
        if (!du.empty()) du.back() = 0.0;
        return {du, to_field(k.apply(to_typed<double>(s.u), params_.spatial_order))};
    }
    return {to_field(k.apply(to_typed<double>(s.u), params_.spatial_order)), {}};
}

double RadialProblem::step_size(const StepPolicy& policy) const
{
    const double h = grid_.dr();
    return cls_ == EqClass::WEc ? policy.c * h * h * h : policy.c * h * h;
}

Trajectory RadialProblem::integrate(const SolverState& s0, double T_final, const StepPolicy& policy, int samples) const
{
    if (samples < 1) throw std::invalid_argument("samples must be positive");
    if (!s0.finite()) throw std::invalid_argument("initial state is not finite");
    return complex_ ? integrate_typed<cplx>(*this, s0, T_final, policy, samples)
                    : integrate_typed<double>(*this, s0, T_final, policy, samples);
}

EvalPoint RadialProblem::eval_point(const SolverState& s, int j, const std::vector<JetVar>& jets) const
{
    return point_at(jet_table(*this, s, jets), jets, eval_params(), s.time, grid_.r(j), j);
}

std::complex<double> RadialProblem::conserved_quantity(const SolverState& s, const ConsLaw& law) const
{
    const std::vector<JetVar> jets = collect_jets(law.psi_t);
    const JetTable tab = jet_table(*this, s, jets);
    const auto params = eval_params();
    const int n = grid_.N;
    auto g = [&](int j) { return eval_numeric(law.psi_t, point_at(tab, jets, params, s.time, grid_.r(j), j)) *
                                 std::pow(grid_.r(j), grid_.m); };
    int start = 0;
    cplx g0 = 0.0;
    try {
        g0 = g(0);
        if (!std::isfinite(std::abs(g0))) start = 1;
    } catch (const std::domain_error&) {
        start = 1;
    }
    if (start == 1) {
        const double a1 = std::abs(g(1)), a2 = std::abs(g(2));
        if (a1 > 1e-300 && a1 >= 2.0 * a2) throw std::domain_error("density of " + law.id + " is not integrable at r = 0");
    }
    const double h = grid_.dr();
    cplx acc = 0.5 * ((start == 0 ? g0 : g(start)) + g(n));
    for (int j = start + 1; j < n; ++j) acc += g(j);
    return acc * h;
}

std::complex<double> RadialProblem::boundary_flux(const SolverState& s, const ConsLaw& law) const
{
    const std::vector<JetVar> jets = collect_jets(law.psi_r);
    const JetTable tab = jet_table(*this, s, jets);
    const int n = grid_.N;
    return eval_numeric(law.psi_r, point_at(tab, jets, eval_params(), s.time, grid_.r(n), n)) *
           std::pow(grid_.R_outer, grid_.m);
}

std::vector<DriftRecord> RadialProblem::monitor_drift(const Trajectory& tr, const std::vector<ConsLaw>& laws) const
{
    std::map<Var, cplx> vals;
    for (const auto& [v, x] : eval_params()) vals[v] = x;
    for (const ConsLaw& law : laws)
        for (const auto& [v, c] : law.side) {
            if (v != Var::M && v != Var::P && v != Var::Sigma) continue;
            const cplx want = c.eval(vals);
            if (std::abs(want - vals[v]) > 1e-12 * std::max(1.0, std::abs(want)))
                throw std::invalid_argument(law.id + " needs " + side_condition_str({{v, c}}) + ", run has " +
                                            var_name(v) + " = " + std::to_string(vals[v].real()));
        }
    std::vector<DriftRecord> out;
    for (const ConsLaw& law : laws) {
        DriftRecord d;
        d.law = law.id;
        for (const SolverState& s : tr.samples) {
            if (!s.finite()) break;
            d.times.push_back(s.time);
            d.values.push_back(conserved_quantity(s, law));
            d.boundary_flux.push_back(boundary_flux(s, law));
        }
        double worst = 0.0;
        for (cplx c : d.values) worst = std::max(worst, std::abs(c - d.values.front()));
        d.drift = d.values.empty() ? 0.0 : worst / std::max(std::abs(d.values.front()), DriftRecord::floor);
        out.push_back(std::move(d));
    }
    return out;
}

std::pair<double, double> RadialProblem::scaling_weights() const
{
    VectorField xs = Catalog::instance().generators(params_.equation).at("X_scal");
    EvalPoint pt;
    pt.t = 1.0;
    pt.r = 1.0;
    pt.params = eval_params();
    pt.jets[{Dep::U, 0, 0}] = 1.0;
    pt.jets[{Dep::Ubar, 0, 0}] = 1.0;
    const double xi = eval_numeric(xs.xi, pt).real();
    return {eval_numeric(xs.tau, pt).real() / xi, eval_numeric(xs.eta, pt).real() / xi};
}

double RadialProblem::scaling_orbit_check(const Trajectory& tr, double lambda, std::size_t k) const
{
    if (!(lambda >= 0.5 && lambda <= 2.0)) throw std::invalid_argument("lambda must lie in [1/2, 2]");
    if (k < 2 || k + 2 >= tr.samples.size()) throw std::invalid_argument("scaling check needs samples k-2..k+2");
    const double tau = tr.samples[k + 1].time - tr.samples[k].time;
    for (std::size_t i = k - 2; i < k + 2; ++i)
        if (std::abs(tr.samples[i + 1].time - tr.samples[i].time - tau) > 1e-9 * tau)
            throw std::invalid_argument("scaling check needs equally spaced samples");
    auto [b, c] = scaling_weights();
    const double amp = std::pow(lambda, c);
    const double dts = std::pow(lambda, b) * tau;
    std::vector<Field> f;
    for (std::size_t i = k - 2; i <= k + 2; ++i) f.push_back(cubic_resample(tr.samples[i].u, lambda, amp));

    const int n = grid_.N;
    Field lhs(n + 1), rhs;
    if (cls_ == EqClass::WEa) {
        for (int j = 0; j <= n; ++j)
            lhs[j] = (-f[0][j] + 16.0 * f[1][j] - 30.0 * f[2][j] + 16.0 * f[3][j] - f[4][j]) / (12.0 * dts * dts);
    } else {
        for (int j = 0; j <= n; ++j) lhs[j] = (f[0][j] - 8.0 * f[1][j] + 8.0 * f[3][j] - f[4][j]) / (12.0 * dts);
    }
    if (complex_) {
        rhs = make_kernel<cplx>(*this).apply(f[2], 4);
    } else {
        rhs = to_field(make_kernel<double>(*this).apply(to_typed<double>(f[2]), 4));
    }
    double worst = 0.0;
    for (int j = 2; j <= n - 3; ++j) worst = std::max(worst, std::abs(lhs[j] - rhs[j]));
    return worst;
}

// ---------------------------------------------------------------------------

RunConfig parse_run_config(const std::string& text)
{
    RunConfig cfg;
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("config line without '=': " + line);
        std::string key = trim(line.substr(0, eq));
        if (kv.count(key)) throw std::invalid_argument("config key '" + key + "' repeated");
        kv[key] = trim(line.substr(eq + 1));
    }
    static const std::vector<std::string> known{"equation", "sigma",   "p",        "m",       "N",
                                                "R_outer",  "dt_factor", "T_final", "initial_data", "initial_velocity",
                                                "monitors", "samples", "spatial_order"};
    for (const auto& [k, v] : kv)
        if (std::find(known.begin(), known.end(), k) == known.end())
            throw std::invalid_argument("config key '" + k + "' unknown");
    for (const char* req : {"equation", "initial_data"})
        if (!kv.count(req)) throw std::invalid_argument(std::string("config key '") + req + "' missing");

    cfg.params.equation = kv["equation"];
    kind_of(cfg.params.equation);
    if (kv.count("sigma")) {
        const std::string& s = kv["sigma"];
        if (s == "+" || s == "plus" || s == "+1" || s == "1" || s == "focusing") cfg.params.sigma = 1;
        else if (s == "-" || s == "minus" || s == "-1" || s == "defocusing") cfg.params.sigma = -1;
        else throw std::invalid_argument("config key 'sigma': expected +1 or -1, got " + s);
    }
    if (kv.count("p")) cfg.params.p = parse_number("p", kv["p"]);
    if (kv.count("m")) cfg.params.m = parse_number("m", kv["m"]);
    if (kv.count("N")) {
        double n = parse_number("N", kv["N"]);
        if (n != std::floor(n) || n < 16) throw std::invalid_argument("config key 'N': integer >= 16 required");
        cfg.N = static_cast<int>(n);
    }
    if (kv.count("R_outer")) cfg.R_outer = parse_number("R_outer", kv["R_outer"]);
    if (kv.count("dt_factor")) cfg.dt_factor = parse_number("dt_factor", kv["dt_factor"]);
    if (!(cfg.dt_factor > 0.0 && cfg.dt_factor <= 0.25))
        throw std::invalid_argument("config key 'dt_factor': must lie in (0, 0.25]");
    if (kv.count("T_final")) cfg.T_final = parse_number("T_final", kv["T_final"]);
    if (!(cfg.T_final >= 0.0)) throw std::invalid_argument("config key 'T_final': must be non-negative");
    if (kv.count("samples")) cfg.samples = static_cast<int>(parse_number("samples", kv["samples"]));
    if (cfg.samples < 1) throw std::invalid_argument("config key 'samples': must be positive");
    if (kv.count("spatial_order")) {
        double o = parse_number("spatial_order", kv["spatial_order"]);
        if (o != 2 && o != 4) throw std::invalid_argument("config key 'spatial_order': 2 or 4");
        cfg.params.spatial_order = static_cast<int>(o);
    }
    cfg.initial_data = kv["initial_data"];
    if (kv.count("initial_velocity")) cfg.initial_velocity = kv["initial_velocity"];
    if (kv.count("monitors")) {
        std::string s = kv["monitors"];
        if (s.size() < 2 || s.front() != '[' || s.back() != ']')
            throw std::invalid_argument("config key 'monitors': expected [id, id, ...]");
        std::istringstream ls(s.substr(1, s.size() - 2));
        std::string id;
        while (std::getline(ls, id, ',')) {
            id = trim(id);
            if (!id.empty()) cfg.monitors.push_back(id);
        }
    }
    return cfg;
}

ConsLaw monitor_law(const std::string& id)
{
    const Catalog& cat = Catalog::instance();
    std::string row_id = id;
    bool corrected = false;
    if (auto c = id.find(':'); c != std::string::npos) {
        if (id.substr(c + 1) != "corrected") throw std::invalid_argument("unknown law qualifier in '" + id + "'");
        row_id = id.substr(0, c);
        corrected = true;
    }
    const CatalogRow& row = cat.row(row_id);
    if (!row.has("psi_t")) throw std::invalid_argument(row_id + " is not a conservation law");
    if (!corrected) return cat.law(row);
    auto law = cat.corrected_law(row);
    if (!law) throw std::invalid_argument(row_id + " has no corrected variant");
    return *law;
}

RunResult run(const RunConfig& cfg)
{
    RunResult res;
    res.config = cfg;
    RadialProblem pb(cfg.params, Grid(cfg.R_outer, cfg.N, cfg.params.m));
    std::vector<ConsLaw> laws;
    for (const std::string& id : cfg.monitors) laws.push_back(monitor_law(id));
    NormalForm u0 = parse_nf(cfg.initial_data);
    std::optional<NormalForm> v0;
    if (!cfg.initial_velocity.empty()) v0 = parse_nf(cfg.initial_velocity);
    StepPolicy policy;
    policy.c = cfg.dt_factor;
    res.trajectory = pb.integrate(pb.initial_state(u0, v0), cfg.T_final, policy, cfg.samples);
    res.drift = pb.monitor_drift(res.trajectory, laws);
    for (std::size_t i = 0; i < res.drift.size(); ++i) res.drift[i].law = cfg.monitors[i];
    return res;
}

std::string to_csv(const RunResult& r)
{
    std::ostringstream out;
    out.precision(17);
    bool any_imag = false;
    for (const DriftRecord& d : r.drift)
        for (cplx c : d.values) any_imag |= c.imag() != 0.0;
    out << "t";
    for (const DriftRecord& d : r.drift) {
        out << ",C_" << d.law;
        if (any_imag) out << ",C_" << d.law << "_im";
    }
    for (const DriftRecord& d : r.drift) out << ",boundary_flux_" << d.law;
    out << "\n";
    std::size_t rows = r.drift.empty() ? r.trajectory.samples.size() : r.drift.front().times.size();
    for (std::size_t i = 0; i < rows; ++i) {
        out << r.trajectory.samples[i].time;
        for (const DriftRecord& d : r.drift) {
            out << "," << d.values[i].real();
            if (any_imag) out << "," << d.values[i].imag();
        }
        for (const DriftRecord& d : r.drift) out << "," << std::abs(d.boundary_flux[i]);
        out << "\n";
    }
    return out.str();
}

std::string summary_json(const RunResult& r)
{
    nlohmann::ordered_json j;
    std::ostringstream v;
    if (r.trajectory.blowup) {
        v.precision(6);
        v << "blowup(" << r.trajectory.blowup_time << ")";
    } else {
        v << "completed";
    }
    j["verdict"] = v.str();
    if (r.trajectory.blowup) j["blowup_time"] = r.trajectory.blowup_time;
    const RunConfig& c = r.config;
    j["equation"] = c.params.equation;
    j["sigma"] = c.params.sigma;
    j["p"] = c.params.p;
    j["m"] = c.params.m;
    j["N"] = c.N;
    j["R_outer"] = c.R_outer;
    j["T_final"] = c.T_final;
    j["spatial_order"] = c.params.spatial_order;
    j["steps"] = r.trajectory.steps;
    nlohmann::ordered_json drift = nlohmann::ordered_json::object(), flux = nlohmann::ordered_json::object();
    for (const DriftRecord& d : r.drift) {
        drift[d.law] = d.drift;
        double fmax = 0.0;
        for (cplx f : d.boundary_flux) fmax = std::max(fmax, std::abs(f));
        flux[d.law] = fmax;
    }
    j["drift"] = drift;
    j["max_boundary_flux"] = flux;
    return j.dump(2);
}

}  // namespace semiwave
