#include "sldg/driver.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

#include "sldg/error.hpp"

namespace sldg {

namespace {

constexpr double kPi = std::numbers::pi;

// Smooth Burgers solution u = u0(x - u t) by Newton, before the shock.
double burgers_characteristic(double x, double t) {
    double u = 0.5 + std::sin(kPi * x);
    for (int it = 0; it < 50; ++it) {
        const double s = kPi * (x - u * t);
        const double g = u - 0.5 - std::sin(s);
        const double dg = 1.0 + kPi * t * std::cos(s);
        const double du = g / dg;
        u -= du;
        if (std::abs(du) < 1e-15) break;
    }
    return u;
}

}  // namespace

std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::VlasovPoisson: return "vp";
        case Scenario::GuidingCenter: return "gc";
        case Scenario::Burgers: return "burgers";
        case Scenario::LinearAdvection: return "advection";
    }
    return "?";
}

ScenarioConfig default_config(Scenario s) {
    ScenarioConfig c;
    c.scenario = s;
    switch (s) {
        case Scenario::VlasovPoisson:
            c.initial = "landau";
            c.x_min = 0.0;
            c.x_max = 4.0 * kPi;
            c.y_min = -2.0 * kPi;
            c.y_max = 2.0 * kPi;
            c.limiter = true;
            break;
        case Scenario::GuidingCenter:
            c.initial = "stationary";
            c.x_max = 2.0 * kPi;
            c.y_max = 2.0 * kPi;
            break;
        case Scenario::Burgers:
            c.initial = "sine";
            c.x_min = -1.0;
            c.x_max = 1.0;
            c.ny = 1;
            break;
        case Scenario::LinearAdvection:
            c.initial = "sine";
            break;
    }
    return c;
}

void validate(const ScenarioConfig& c) {
    if (c.nx < 1) throw ValidationError("nx", "must be positive");
    if (c.ny < 1) throw ValidationError("ny", "must be positive");
    if (c.scenario == Scenario::Burgers && c.ny != 1) throw ValidationError("ny", "burgers runs on one row of cells");
    if (c.degree < 1 || c.degree > 2) throw ValidationError("k", "must be 1 or 2");
    if (!(c.x_max > c.x_min)) throw ValidationError("x_max", "must exceed x_min");
    if (!(c.y_max > c.y_min)) throw ValidationError("y_max", "must exceed y_min");
    if (!(c.t_final > 0.0)) throw ValidationError("T", "must be positive");
    if (!(c.cfl > 0.0)) throw ValidationError("cfl", "must be positive");
    if (c.trace_substeps < 1) throw ValidationError("trace_substeps", "must be positive");
    if (c.max_restarts < 0) throw ValidationError("max_restarts", "must be non-negative");
    try {
        (void)builtin_tableau(c.tableau);
    } catch (const UnknownTableau&) {
        throw ValidationError("tableau", "unknown tableau '" + c.tableau + "'");
    }
    if (c.adaptive) {
        if (!(c.cfl_min > 0.0)) throw ValidationError("cfl_min", "must be positive");
        if (c.cfl_min > c.cfl || c.cfl > c.cfl_max) throw ValidationError("cfl", "need cfl_min <= cfl <= cfl_max");
        if (!(c.delta_min < c.delta_max)) throw ValidationError("delta_min", "must be below delta_max");
    }
    (void)initial_condition(c);
}

ScalarFunction initial_condition(const ScenarioConfig& c) {
    const std::string& n = c.initial;
    switch (c.scenario) {
        case Scenario::VlasovPoisson:
            if (n == "landau") {
                const double a = c.alpha, k = c.wavenumber;
                return [a, k](double x, double v) {
                    return (1.0 + a * std::cos(k * x)) * std::exp(-0.5 * v * v) / std::sqrt(2.0 * kPi);
                };
            }
            break;
        case Scenario::GuidingCenter:
            if (n == "stationary") return [](double x, double y) { return -2.0 * std::sin(x) * std::sin(y); };
            if (n == "kelvin_helmholtz") {
                const double eps = c.perturbation, k = c.wavenumber;
                return [eps, k](double x, double y) { return std::sin(y) + eps * std::cos(k * x); };
            }
            break;
        case Scenario::Burgers:
            if (n == "sine" || n == "shock") return [](double x, double) { return 0.5 + std::sin(kPi * x); };
            if (n == "riemann") return [](double x, double) { return x < 0.0 ? 1.0 : 0.0; };
            break;
        case Scenario::LinearAdvection:
            if (n == "sine") {
                const double x0 = c.x_min, y0 = c.y_min;
                const double wx = 2.0 * kPi / (c.x_max - c.x_min), wy = 2.0 * kPi / (c.y_max - c.y_min);
                return [=](double x, double y) { return 1.0 + std::sin(wx * (x - x0)) * std::sin(wy * (y - y0)); };
            }
            break;
    }
    throw ValidationError("initial", "unknown initial condition '" + n + "' for " + scenario_name(c.scenario));
}

std::optional<ScalarFunction> exact_solution(const ScenarioConfig& c, double t) {
    switch (c.scenario) {
        case Scenario::LinearAdvection: {
            const auto u0 = initial_condition(c);
            const double sx = c.velocity_x * t, sy = c.velocity_y * t;
            return ScalarFunction([u0, sx, sy](double x, double y) { return u0(x - sx, y - sy); });
        }
        case Scenario::GuidingCenter:
            if (c.initial == "stationary") return initial_condition(c);
            break;
        case Scenario::Burgers:
            if ((c.initial == "sine" || c.initial == "shock") && t < 1.0 / kPi)
                return ScalarFunction([t](double x, double) { return burgers_characteristic(x, t); });
            break;
        case Scenario::VlasovPoisson: break;
    }
    return std::nullopt;
}

double compute_dt(double cfl, double a, double b, double dx, double dy) {
    const double rate = std::abs(a) / dx + std::abs(b) / dy;
    if (rate == 0.0) throw ZeroSpeed();
    return cfl / rate;
}

ControllerResult adaptive_controller(double theta, double cfl, double delta_max, double delta_min, double cfl_min,
                                     double cfl_max) {
    if (theta > delta_max) {
        const double c = std::max(cfl - 1.0, cfl_min);
        if (c < cfl) return {Decision::RestartLower, c};
    } else if (theta < delta_min) {
        const double c = std::min(cfl + 1.0, cfl_max);
        if (c > cfl) return {Decision::RestartHigher, c};
    }
    return {Decision::Continue, cfl};
}

Solver::Solver(ScenarioConfig cfg) : Solver(cfg, project_l2(initial_condition(cfg), cfg.mesh(), cfg.degree)) {}

Solver::Solver(ScenarioConfig cfg, DGField initial)
    : cfg_(std::move(cfg)), tableau_(builtin_tableau(cfg_.tableau)), u_(std::move(initial)), cfl_(cfg_.cfl) {
    validate(cfg_);
    if (!(u_.mesh() == cfg_.mesh())) throw MeshMismatch("initial state does not live on the configured mesh");
    // The projected initial data can dip below zero in the tails.
    if (cfg_.limiter) u_ = pp_limiter(u_);
    refresh_field();
}

bool Solver::done() const { return t_ >= cfg_.t_final; }

FrozenField Solver::generator(const DGField& u) const {
    switch (cfg_.scenario) {
        case Scenario::VlasovPoisson: return electric_field_1d(u);
        case Scenario::GuidingCenter: return electric_field_2d(u);
        case Scenario::Burgers: return burgers_field(u);
        case Scenario::LinearAdvection: return FrozenField::constant(u.mesh(), cfg_.velocity_x, cfg_.velocity_y);
    }
    return FrozenField::zero(u.mesh());
}

void Solver::refresh_field() {
    if (cfg_.scenario == Scenario::VlasovPoisson)
        current_field_ = electric_field_1d(u_, &current_e_);
    else
        current_field_ = generator(u_);
}

double Solver::time_step(double cfl) const {
    const auto m = u_.mesh();
    double a = 0.0, b = 0.0;
    switch (cfg_.scenario) {
        case Scenario::VlasovPoisson:
            a = std::max(std::abs(m.y_min), std::abs(m.y_max));
            b = current_e_.max_abs();
            break;
        case Scenario::Burgers:
            // max |f'(u)| = max |u| = 2 max |P|
            a = 2.0 * current_field_.max_speed().first;
            break;
        case Scenario::GuidingCenter: std::tie(a, b) = current_field_.max_speed(); break;
        case Scenario::LinearAdvection:
            a = cfg_.velocity_x;
            b = cfg_.velocity_y;
            break;
    }
    const double remaining = cfg_.t_final - t_;
    double dt;
    try {
        dt = compute_dt(cfl, a, b, m.dx(), m.dy());
    } catch (const ZeroSpeed&) {
        return remaining;
    }
    if (dt >= remaining * (1.0 - 1e-12)) return remaining;
    return dt;
}

StepOutcome Solver::attempt(double dt) const {
    StepOutcome out;
    out.dt = dt;
    SldgOptions opts;
    opts.trace.substeps = cfg_.trace_substeps;
    bool first = true;
    auto gen = [&](const DGField& u) {
        ++out.field_solves;
        // Stage 1 is u^n itself, whose field is already cached.
        if (first && u.coeffs() == u_.coeffs()) {
            first = false;
            return current_field_;
        }
        first = false;
        return generator(u);
    };
    auto combine = [](std::span<const double> w, std::span<const FrozenField* const> g) {
        return combine_frozen(w, g);
    };
    auto propagate = [&](const DGField& u, const FrozenField& f, double h, int i) {
        ++out.exponentials;
        StepStats st;
        DGField r;
        try {
            r = sldg_linear_step(u, f, h, cfg_.mode, opts, &st);
        } catch (Error& e) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "step at t=%.6g, dt=%.6g, exponential %d", t_, dt, i + 1);
            e.add_context(buf);
            throw;
        }
        if (i == 0) out.theta = st.theta;
        // Intermediate states feed further remaps, which only keep cell
        // averages non-negative for non-negative input.
        if (cfg_.limiter) r = pp_limiter(r);
        return r;
    };
    out.u = rkei_step(u_, dt, tableau_, gen, combine, propagate);
    return out;
}

const StepOutcome& Solver::advance() {
    double cfl = cfl_;
    int restarts = 0;
    while (true) {
        const double dt = time_step(cfl);
        StepOutcome out;
        try {
            out = attempt(dt);
        } catch (const DegenerateCell&) {
            if (!cfg_.adaptive || cfl <= cfg_.cfl_min || restarts >= cfg_.max_restarts) throw;
            cfl = std::max(cfl - 1.0, cfg_.cfl_min);
            ++restarts;
            continue;
        }
        const auto& c = out.u.coeffs();
        if (const auto bad = std::find_if_not(c.begin(), c.end(), [](double x) { return std::isfinite(x); });
            bad != c.end()) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "non-finite solution after the step at t=%.6g, dt=%.6g", t_, dt);
            throw NonFiniteState(buf, (bad - c.begin()) / out.u.dim());
        }
        if (cfg_.adaptive && restarts < cfg_.max_restarts) {
            const auto ctrl =
                adaptive_controller(out.theta, cfl, cfg_.delta_max, cfg_.delta_min, cfg_.cfl_min, cfg_.cfl_max);
            // A step clipped to t_final would not get longer at a higher CFL.
            const bool clipped = dt == cfg_.t_final - t_;
            if (ctrl.decision == Decision::RestartLower || (ctrl.decision == Decision::RestartHigher && !clipped)) {
                cfl = ctrl.cfl;
                ++restarts;
                continue;
            }
        }
        out.cfl = cfl;
        out.restarts = restarts;
        cfl_ = cfl;
        u_ = out.u;
        t_ = (dt == cfg_.t_final - t_) ? cfg_.t_final : t_ + dt;
        refresh_field();
        last_ = std::move(out);
        return last_;
    }
}

DiagnosticsRecord Solver::diagnostics() const {
    DiagnosticsRecord r;
    switch (cfg_.scenario) {
        case Scenario::VlasovPoisson: r = vp_diagnostics(u_, current_e_); break;
        case Scenario::GuidingCenter: r = gc_diagnostics(u_, current_field_); break;
        default: r = scalar_diagnostics(u_); break;
    }
    r.t = t_;
    r.cfl = cfl_;
    return r;
}

void Solver::reset(DGField u, double t) {
    if (!(u.mesh() == cfg_.mesh())) throw MeshMismatch("reset: state on a different mesh");
    u_ = std::move(u);
    t_ = t;
    cfl_ = cfg_.cfl;
    refresh_field();
}

RunResult run(const ScenarioConfig& cfg, const std::function<void(const Solver&, const StepOutcome&)>& on_step) {
    Solver s(cfg);
    RunResult res;
    res.records.push_back(s.diagnostics());
    while (!s.done()) {
        const auto& out = s.advance();
        ++res.steps;
        auto r = s.diagnostics();
        r.theta = out.theta;
        fill_deviations(r, res.records.front());
        res.records.push_back(r);
        if (on_step) on_step(s, out);
    }
    res.final_state = s.state();
    return res;
}

ErrorNorms domain_errors(const DGField& u, const ScalarFunction& reference) {
    const double area = u.mesh().area();
    return {error_norm(u, reference, Norm::L1) / area, error_norm(u, reference, Norm::L2) / std::sqrt(area),
            error_norm(u, reference, Norm::Linf)};
}

ErrorNorms domain_errors(const DGField& u, const DGField& reference) {
    const double area = u.mesh().area();
    return {error_norm(u, reference, Norm::L1) / area, error_norm(u, reference, Norm::L2) / std::sqrt(area),
            error_norm(u, reference, Norm::Linf)};
}

ErrorNorms reversibility_harness(const ScenarioConfig& cfg, double T) {
    ScenarioConfig c = cfg;
    const DGField u0 = project_l2(initial_condition(c), c.mesh(), c.degree);
    if (T <= 0.0) return domain_errors(reflect_y(u0), reflect_y(u0));
    c.t_final = T;
    Solver s(c, u0);
    while (!s.done()) s.advance();
    s.reset(reflect_y(s.state()));
    while (!s.done()) s.advance();
    return domain_errors(s.state(), reflect_y(u0));
}

double observed_order(double e1, double e2, double h1, double h2) { return std::log(e1 / e2) / std::log(h1 / h2); }

namespace {

DGField run_to_end(const ScenarioConfig& c) {
    Solver s(c);
    while (!s.done()) s.advance();
    return s.state();
}

ErrorNorms error_of(const ScenarioConfig& c, Reference ref, double reference_cfl) {
    switch (ref) {
        case Reference::Exact: {
            const auto ex = exact_solution(c, c.t_final);
            if (!ex) throw ValidationError("reference", "no exact solution for this scenario");
            return domain_errors(run_to_end(c), *ex);
        }
        case Reference::Reverse: return reversibility_harness(c, c.t_final);
        case Reference::SelfCFL: {
            ScenarioConfig fine = c;
            fine.cfl = reference_cfl;
            fine.adaptive = false;
            return domain_errors(run_to_end(c), run_to_end(fine));
        }
    }
    return {};
}

}  // namespace

std::vector<RefinementRow> refinement_study(const ScenarioConfig& base, const std::vector<std::pair<int, int>>& meshes,
                                           const std::vector<double>& cfls, Reference reference,
                                           double reference_cfl) {
    std::vector<RefinementRow> rows;
    std::vector<double> h;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (!meshes.empty()) {
        for (const auto& [nx, ny] : meshes) {
            ScenarioConfig c = base;
            c.nx = nx;
            c.ny = ny;
            RefinementRow r{nx, ny, c.cfl, error_of(c, reference, reference_cfl)};
            rows.push_back(r);
            h.push_back(c.mesh().dx());
        }
    } else {
        std::optional<DGField> fine;
        if (reference == Reference::SelfCFL) {
            ScenarioConfig f = base;
            f.cfl = reference_cfl;
            f.adaptive = false;
            fine = run_to_end(f);
        }
        for (double cfl : cfls) {
            ScenarioConfig c = base;
            c.cfl = cfl;
            RefinementRow r{c.nx, c.ny, cfl, {}};
            r.errors = fine ? domain_errors(run_to_end(c), *fine) : error_of(c, reference, reference_cfl);
            rows.push_back(r);
            h.push_back(cfl);
        }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == 0) {
            rows[i].order_l1 = rows[i].order_l2 = rows[i].order_linf = nan;
            continue;
        }
        const auto& p = rows[i - 1].errors;
        const auto& e = rows[i].errors;
        rows[i].order_l1 = observed_order(p.l1, e.l1, h[i - 1], h[i]);
        rows[i].order_l2 = observed_order(p.l2, e.l2, h[i - 1], h[i]);
        rows[i].order_linf = observed_order(p.linf, e.linf, h[i - 1], h[i]);
    }
    return rows;
}

}  // namespace sldg
