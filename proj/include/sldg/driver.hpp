#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sldg/dg_field.hpp"
#include "sldg/diagnostics.hpp"
#include "sldg/fields.hpp"
#include "sldg/geometry.hpp"
#include "sldg/rkei.hpp"
#include "sldg/sldg.hpp"

namespace sldg {

enum class Scenario { VlasovPoisson, GuidingCenter, Burgers, LinearAdvection };

std::string scenario_name(Scenario s);

struct ScenarioConfig {
    Scenario scenario = Scenario::VlasovPoisson;
    /// Named initial condition; see initial_condition().
    std::string initial = "landau";
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    int nx = 32, ny = 32;
    int degree = 1;
    UpstreamMode mode = UpstreamMode::Quad;
    std::string tableau = "CF2";
    double cfl = 1.0;
    double cfl_min = 1.0, cfl_max = 1.0;
    double t_final = 1.0;
    bool limiter = false;
    bool adaptive = false;
    double delta_max = 0.01;
    double delta_min = 0.0005;
    int max_restarts = 3;
    int trace_substeps = 1;

    // Initial-condition parameters.
    double alpha = 0.5;        // Landau perturbation amplitude
    double wavenumber = 0.5;   // Landau / Kelvin-Helmholtz wavenumber
    double perturbation = 0.015;
    double velocity_x = 1.0, velocity_y = 1.0;  // linear advection

    [[nodiscard]] Mesh2D mesh() const { return {x_min, x_max, y_min, y_max, nx, ny}; }
};

/// Domain, initial condition and limiter defaults of a scenario.
ScenarioConfig default_config(Scenario s);

/// Throws ValidationError naming the offending key.
void validate(const ScenarioConfig& cfg);

/// Pointwise initial data of a config. Names: landau (VP); stationary,
/// kelvin_helmholtz (guiding center); sine, shock, riemann (Burgers; sine and
/// shock share u0 = 0.5 + sin(pi x)); sine (linear advection).
ScalarFunction initial_condition(const ScenarioConfig& cfg);

/// Exact solution at time t where one is known: linear advection, the
/// stationary guiding-center state, smooth Burgers data before the shock.
std::optional<ScalarFunction> exact_solution(const ScenarioConfig& cfg, double t);

/// dt = cfl / (a/dx + b/dy). Throws ZeroSpeed when a = b = 0.
double compute_dt(double cfl, double a, double b, double dx, double dy);

enum class Decision { Continue, RestartLower, RestartHigher };

struct ControllerResult {
    Decision decision = Decision::Continue;
    double cfl = 0.0;
};

/// theta > delta_max: lower the CFL by one (floored at cfl_min); theta <
/// delta_min: raise it by one (capped at cfl_max). A restart that would not
/// change the CFL degenerates to Continue.
ControllerResult adaptive_controller(double theta, double cfl, double delta_max, double delta_min, double cfl_min,
                                     double cfl_max);

/// Result of one time step.
struct StepOutcome {
    DGField u;
    double dt = 0.0;
    double cfl = 0.0;
    /// Area deviation measured on the step's first exponential.
    double theta = 0.0;
    /// Number of restarts taken before this step was accepted.
    int restarts = 0;
    bool accepted = true;
    int exponentials = 0;
    int field_solves = 0;
};

/// Time integrator for one scenario. Holds the current state, time and CFL.
class Solver {
public:
    explicit Solver(ScenarioConfig cfg);
    Solver(ScenarioConfig cfg, DGField initial);

    [[nodiscard]] const ScenarioConfig& config() const { return cfg_; }
    [[nodiscard]] const DGField& state() const { return u_; }
    [[nodiscard]] double time() const { return t_; }
    [[nodiscard]] double cfl() const { return cfl_; }
    [[nodiscard]] bool done() const;

    /// Frozen transport field of a state (scenario specific).
    [[nodiscard]] FrozenField generator(const DGField& u) const;

    /// Time step for the current state at a given CFL, clipped to t_final.
    [[nodiscard]] double time_step(double cfl) const;

    /// One RKEI step of size dt from the current state, without touching
    /// the solver (no limiter, no controller).
    [[nodiscard]] StepOutcome attempt(double dt) const;

    /// Advances by one accepted step (controller, restarts, limiter).
    const StepOutcome& advance();

    /// Diagnostics of the current state.
    [[nodiscard]] DiagnosticsRecord diagnostics() const;

    /// Replaces the state (e.g. after a velocity reflection) and resets time.
    void reset(DGField u, double t = 0.0);

private:
    ScenarioConfig cfg_;
    RKEITableau tableau_;
    DGField u_;
    FrozenField current_field_;
    ElectricField1D current_e_;
    double t_ = 0.0;
    double cfl_ = 1.0;
    StepOutcome last_;

    void refresh_field();
};

struct RunResult {
    std::vector<DiagnosticsRecord> records;
    DGField final_state;
    int steps = 0;
};

/// Runs to t_final, calling `on_step` after each accepted step (may be empty).
RunResult run(const ScenarioConfig& cfg, const std::function<void(const Solver&, const StepOutcome&)>& on_step = {});

/// Domain-averaged error norms: L1 = int|e| / |Omega|, L2 = sqrt(int e^2 / |Omega|).
struct ErrorNorms {
    double l1 = 0.0, l2 = 0.0, linf = 0.0;
};

ErrorNorms domain_errors(const DGField& u, const ScalarFunction& reference);
ErrorNorms domain_errors(const DGField& u, const DGField& reference);

/// Forward to T, reflect v, forward to T again; errors against the reflected
/// projected initial state.
ErrorNorms reversibility_harness(const ScenarioConfig& cfg, double T);

enum class Reference { Exact, Reverse, SelfCFL };

struct RefinementRow {
    int nx = 0, ny = 0;
    double cfl = 0.0;
    ErrorNorms errors;
    /// log ratios against the previous row (NaN for the first).
    double order_l1 = 0.0, order_l2 = 0.0, order_linf = 0.0;
};

/// Mesh refinement (meshes non-empty) or CFL refinement (cfls non-empty)
/// with errors against the chosen reference.
std::vector<RefinementRow> refinement_study(const ScenarioConfig& base, const std::vector<std::pair<int, int>>& meshes,
                                           const std::vector<double>& cfls, Reference reference,
                                           double reference_cfl = 0.1);

/// log(e1 / e2) / log(h1 / h2).
double observed_order(double e1, double e2, double h1, double h2);

}  // namespace sldg
