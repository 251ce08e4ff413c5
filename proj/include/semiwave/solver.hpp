#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semiwave/catalog.hpp"

namespace semiwave {

using Field = std::vector<std::complex<double>>;

/// Nodes r_j = j*dr, j = 0..N, dr = R_outer/N.
struct Grid {
    double R_outer = 8.0;
    int N = 512;
    double m = 0.0;

    /// Throws std::invalid_argument for N < 16 or R_outer <= 0.
    Grid(double R_outer, int N, double m);
    double dr() const { return R_outer / N; }
    double r(int j) const { return j * dr(); }
    /// Trapezoid weights r_j^m dr.
    std::vector<double> weights() const;
};

struct RunParams {
    std::string equation = "NLS";
    int sigma = -1;
    double p = 2.0;
    double m = 0.0;
    /// Central differences of order 2, or 4 (five-point stencils).
    int spatial_order = 2;
};

struct SolverState {
    double time = 0.0;
    Field u;
    /// u_t, WEa only.
    Field ut;
    double dt = 0.0;

    bool finite() const;
    double max_abs() const;
};

struct StepPolicy {
    /// dt = c*dr^2 (c*dr^3 for WEc).
    double c = 0.25;
    double blowup_threshold = 1e6;
};

struct Trajectory {
    std::vector<SolverState> samples;
    bool blowup = false;
    double blowup_time = 0.0;
    long steps = 0;
};

struct DriftRecord {
    std::string law;
    std::vector<double> times;
    std::vector<std::complex<double>> values;
    /// r^m psi_r at R_outer for each sample.
    std::vector<std::complex<double>> boundary_flux;
    double drift = 0.0;
    static constexpr double floor = 1e-12;
};

/// One catalog equation discretized on a grid.
class RadialProblem {
public:
    /// Throws std::invalid_argument for an unknown equation or a grid whose m
    /// differs from params.m.
    RadialProblem(RunParams params, Grid grid);

    const RunParams& params() const { return params_; }
    const Grid& grid() const { return grid_; }
    EqClass eq_class() const { return cls_; }
    bool is_complex() const { return complex_; }
    /// Terms singular at r = 0 beyond m r^-1 u_r; u_t(0) is then extrapolated.
    bool singular_origin() const;

    /// u (and u_t for WEa) from expressions in r; u(R_outer) is set to 0.
    SolverState initial_state(const NormalForm& u0, const std::optional<NormalForm>& ut0 = std::nullopt) const;

    /// Time derivatives {u_t, u_tt} for WEa, {u_t, empty} otherwise.
    std::pair<Field, Field> spatial_rhs(const SolverState& s) const;

    double step_size(const StepPolicy& policy) const;
    /// RK4 to T_final, keeping `samples` + 1 equally spaced states.
    Trajectory integrate(const SolverState& s0, double T_final, const StepPolicy& policy = {}, int samples = 20) const;

    /// Trapezoid quadrature of psi_t r^m. Throws std::domain_error when
    /// psi_t is not integrable at r = 0.
    std::complex<double> conserved_quantity(const SolverState& s, const ConsLaw& law) const;
    /// r^m psi_r at R_outer.
    std::complex<double> boundary_flux(const SolverState& s, const ConsLaw& law) const;
    /// Throws std::invalid_argument when a law's side condition disagrees with the run.
    std::vector<DriftRecord> monitor_drift(const Trajectory& tr, const std::vector<ConsLaw>& laws) const;

    /// Max-norm PDE residual of the scaled solution lambda^c u(lambda^-b t,
    /// lambda^-1 r) at the time of sample k, measured with fourth-order
    /// differences. Needs samples k-2..k+2 equally spaced. Throws
    /// std::invalid_argument for lambda outside [1/2, 2].
    double scaling_orbit_check(const Trajectory& tr, double lambda, std::size_t k) const;
    /// (b, c) of the scaling generator b t d/dt + r d/dr + c u d/du.
    std::pair<double, double> scaling_weights() const;

    /// Jet values at node j from finite differences (t-derivatives from the rhs).
    EvalPoint eval_point(const SolverState& s, int j, const std::vector<JetVar>& jets) const;

private:
    RunParams params_;
    Grid grid_;
    EqClass cls_;
    bool complex_;
    std::map<Var, double> eval_params() const;
};

struct RunConfig {
    RunParams params;
    int N = 512;
    double R_outer = 8.0;
    double dt_factor = 0.25;
    double T_final = 1.0;
    int samples = 20;
    std::string initial_data;
    std::string initial_velocity;
    std::vector<std::string> monitors;
};

/// key = value lines; '#' starts a comment. Throws std::invalid_argument
/// naming the offending key.
RunConfig parse_run_config(const std::string& text);

/// "T11.row2" or "T11.row5:corrected".
ConsLaw monitor_law(const std::string& id);

struct RunResult {
    RunConfig config;
    Trajectory trajectory;
    std::vector<DriftRecord> drift;
    bool completed() const { return !trajectory.blowup; }
};

RunResult run(const RunConfig& cfg);
/// t, C_<law>..., boundary_flux_<law>... (real parts; imaginary parts in
/// extra columns for complex-valued quantities).
std::string to_csv(const RunResult& r);
/// {"verdict": "completed" | "blowup(t*)", "blowup_time", "drift": {law: value}, ...}
std::string summary_json(const RunResult& r);

}  // namespace semiwave
