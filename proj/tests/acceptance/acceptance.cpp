// Acceptance checks A1-A11. One PASS/FAIL line per criterion; the exit code is
// nonzero when any selected criterion fails.
//
//   acceptance [--only A1,A5] [--extended]
//
// A8 takes hours and only runs with --extended.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../common/ode_problems.hpp"
#include "../common/oracles.hpp"
#include "CLI11.hpp"
#include "sldg/diagnostics.hpp"
#include "sldg/driver.hpp"
#include "sldg/error.hpp"
#include "sldg/geometry.hpp"
#include "sldg/rkei.hpp"
#include "sldg/sldg.hpp"

using namespace sldg;
using std::numbers::pi;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void check(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
};

void Verdict::check(bool ok, const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    if (!detail.empty()) detail += "; ";
    detail += buf;
    if (!ok) {
        detail += " [x]";
        pass = false;
    }
}

bool within_factor(double value, double target, double factor) {
    return value >= target / factor && value <= target * factor;
}

double log2_ratio(double a, double b) { return std::log2(a / b); }

ScenarioConfig vp(int n, int k, const std::string& tableau, double cfl, double T) {
    auto c = default_config(Scenario::VlasovPoisson);
    c.nx = c.ny = n;
    c.degree = k;
    c.mode = k == 2 ? UpstreamMode::QuadCurved : UpstreamMode::Quad;
    c.tableau = tableau;
    c.cfl = c.cfl_min = c.cfl_max = cfl;
    c.t_final = T;
    return c;
}

// ---------------------------------------------------------------------------

Verdict a1() {
    Verdict v;
    struct Case {
        int k;
        double order, tol, paper64;
    };
    for (const Case cs : {Case{1, 2.0, 0.25, 1.50e-4}, Case{2, 3.0, 0.3, 4.39e-6}}) {
        const auto e32 = reversibility_harness(vp(32, cs.k, "CF3C03", 0.1, 0.5), 0.5);
        const auto e64 = reversibility_harness(vp(64, cs.k, "CF3C03", 0.1, 0.5), 0.5);
        const double p = log2_ratio(e32.l1, e64.l1);
        v.check(std::abs(p - cs.order) <= cs.tol, "k=%d L1 order %.2f", cs.k, p);
        v.check(within_factor(e64.l1, cs.paper64, 3.0), "k=%d L1(64^2) %.3e vs %.2e", cs.k, e64.l1, cs.paper64);
    }
    return v;
}

Verdict a2() {
    Verdict v;
    auto c = default_config(Scenario::GuidingCenter);
    c.tableau = "CF3C03";
    c.cfl = c.cfl_min = c.cfl_max = 1.0;
    c.t_final = 1.0;
    struct Case {
        int k;
        double order, tol, paper40;
    };
    for (const Case cs : {Case{1, 1.93, 0.3, 3.66e-3}, Case{2, 3.0, 0.3, 2.73e-4}}) {
        c.degree = cs.k;
        c.mode = cs.k == 2 ? UpstreamMode::QuadCurved : UpstreamMode::Quad;
        const auto rows = refinement_study(c, {{20, 20}, {40, 40}}, {}, Reference::Exact);
        v.check(std::abs(rows[1].order_l1 - cs.order) <= cs.tol, "k=%d L1 order %.2f", cs.k, rows[1].order_l1);
        v.check(within_factor(rows[1].errors.l1, cs.paper40, 3.0), "k=%d L1(40^2) %.3e vs %.2e", cs.k,
                rows[1].errors.l1, cs.paper40);
        if (cs.k == 2)
            v.check(std::abs(rows[1].order_linf - 2.0) <= 0.3, "k=2 Linf order %.2f", rows[1].order_linf);
    }
    return v;
}

Verdict a3() {
    Verdict v;
    const std::vector<double> dts = {0.0125, 0.00625, 0.003125};
    ode::Vec y0(1);
    y0 << 1.0;
    ode::Vec z0(2);
    z0 << 1.0, 0.5;
    const ode::Vec zref = ode::coupled_reference(z0, 1.0);
    for (const auto& name : builtin_tableau_names()) {
        const auto tab = builtin_tableau(name);
        std::vector<double> e1, e2;
        for (double dt : dts) {
            const ode::Vec y = ode::integrate(tab, y0, 0.5, static_cast<int>(std::lround(0.5 / dt)),
                                              ode::riccati_generator);
            e1.push_back(std::abs(y(0) - 2.0));
            const ode::Vec z = ode::integrate(tab, z0, 1.0, static_cast<int>(std::lround(1.0 / dt)),
                                              ode::coupled_generator);
            e2.push_back((z - zref).norm());
        }
        const double p1 = ode::fitted_order(dts, e1), p2 = ode::fitted_order(dts, e2);
        const int want = ode::expected_order(name);
        v.check(std::abs(p1 - want) <= 0.2 && std::abs(p2 - want) <= 0.2, "%s %.2f/%.2f", name.c_str(), p1, p2);
    }
    return v;
}

Verdict a4() {
    Verdict v;
    struct Case {
        const char* tableau;
        double order, tol;
    };
    const std::vector<double> cfls = {8, 4, 2};
    for (const Case cs : {Case{"CF2", 2.0, 0.4}, Case{"CF3G", 3.0, 0.5}}) {
        const auto rows = refinement_study(vp(64, 2, cs.tableau, 8, 5.0), {}, cfls, Reference::SelfCFL, 0.1);
        std::vector<double> errs;
        for (const auto& r : rows) errs.push_back(r.errors.l1);
        const double slope = ode::fitted_order(cfls, errs);
        v.check(std::abs(slope - cs.order) <= cs.tol, "%s slope %.2f (L1 %.2e %.2e %.2e)", cs.tableau, slope,
                errs[0], errs[1], errs[2]);
    }
    return v;
}

// Long strong-Landau run shared by A5 and A6.
struct LongVp {
    double max_dev_mass = 0.0, max_dev_l1 = 0.0, min_sample = 0.0;
    int steps = 0;
};

const LongVp& long_vp() {
    static const LongVp r = [] {
        LongVp out;
        out.min_sample = sampled_minimum(Solver(vp(64, 2, "CF3G", 10, 40.0)).state());
        auto res = run(vp(64, 2, "CF3G", 10, 40.0), [&](const Solver& s, const StepOutcome&) {
            out.min_sample = std::min(out.min_sample, sampled_minimum(s.state()));
        });
        for (const auto& rec : res.records) {
            out.max_dev_mass = std::max(out.max_dev_mass, std::abs(rec.dev_mass));
            out.max_dev_l1 = std::max(out.max_dev_l1, std::abs(rec.dev_l1));
        }
        out.steps = res.steps;
        return out;
    }();
    return r;
}

double max_mass_deviation(const ScenarioConfig& c) {
    double m = 0.0;
    for (const auto& r : run(c).records) m = std::max(m, std::abs(r.dev_mass));
    return m;
}

Verdict a5() {
    Verdict v;
    auto gc = default_config(Scenario::GuidingCenter);
    gc.initial = "kelvin_helmholtz";
    gc.x_max = 4 * pi;
    gc.nx = gc.ny = 32;
    gc.degree = 2;
    gc.mode = UpstreamMode::QuadCurved;
    gc.tableau = "CF3C03";
    gc.cfl = gc.cfl_min = gc.cfl_max = 5;
    gc.t_final = 5;
    auto bu = default_config(Scenario::Burgers);
    bu.nx = 80;
    bu.tableau = "CF2";
    bu.cfl = bu.cfl_min = bu.cfl_max = 1.2;
    bu.t_final = 0.5 / pi;
    auto ad = default_config(Scenario::LinearAdvection);
    ad.nx = ad.ny = 32;
    ad.degree = 2;
    ad.mode = UpstreamMode::QuadCurved;
    ad.tableau = "CF3C09";
    ad.cfl = ad.cfl_min = ad.cfl_max = 3;
    ad.t_final = 1;
    const std::pair<const char*, ScenarioConfig> cases[] = {
        {"vp", vp(32, 1, "CF3C03", 5, 5)}, {"gc", gc}, {"burgers", bu}, {"advection", ad}};
    for (const auto& [name, c] : cases) {
        const double d = max_mass_deviation(c);
        v.check(d <= 1e-12, "%s mass %.1e", name, d);
    }
    const auto& lv = long_vp();
    v.check(lv.max_dev_mass <= 1e-12, "vp 64^2 T=40 mass %.1e", lv.max_dev_mass);
    v.check(lv.max_dev_l1 <= 1e-6, "vp 64^2 T=40 CFL 10 L1 %.2e", lv.max_dev_l1);
    return v;
}

Verdict a6() {
    Verdict v;
    const auto& lv = long_vp();
    v.check(lv.min_sample >= -1e-12, "min sample over %d steps %.2e", lv.steps, lv.min_sample);

    // Averages survive the limiter on fields with negative dips.
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    double worst = 0.0;
    for (int k : {1, 2}) {
        DGField u(Mesh2D(0, 1, 0, 1, 24, 24), k);
        for (std::size_t e = 0; e < u.mesh().num_cells(); ++e) {
            auto c = u.cell(e);
            c[0] = std::pow(10.0, 3.0 * (d(rng) - 1.0));
            for (std::size_t i = 1; i < c.size(); ++i) c[i] = 2.0 * c[0] * d(rng);
        }
        const DGField w = pp_limiter(u);
        for (std::size_t e = 0; e < u.mesh().num_cells(); ++e)
            worst = std::max(worst, std::abs(w.average(e) - u.average(e)) / u.average(e));
        v.check(sampled_minimum(w) >= -1e-12, "k=%d limited min %.1e", k, sampled_minimum(w));
    }
    v.check(worst <= 1e-14, "average drift %.1e", worst);
    return v;
}

Verdict a7() {
    Verdict v;
    auto smooth = [](int n, int k, const char* tableau, double cfl) {
        auto c = default_config(Scenario::Burgers);
        c.nx = n;
        c.degree = k;
        c.mode = k == 2 ? UpstreamMode::QuadCurved : UpstreamMode::Quad;
        c.tableau = tableau;
        c.cfl = c.cfl_min = c.cfl_max = cfl;
        c.t_final = 0.5 / pi;
        return c;
    };
    const auto rows = refinement_study(smooth(40, 1, "CF2", 1.2), {{40, 1}, {80, 1}, {160, 1}}, {}, Reference::Exact);
    v.check(std::abs(rows[1].order_l1 - 2.0) <= 0.25 && std::abs(rows[2].order_l1 - 2.0) <= 0.25,
            "k=1 orders %.2f %.2f", rows[1].order_l1, rows[2].order_l1);
    v.check(within_factor(rows[1].errors.l1, 4.73e-4, 2.0), "k=1 L1(80) %.3e", rows[1].errors.l1);
    const auto c2 = smooth(80, 2, "CF3G", 0.7);
    const auto r2 = run(c2);
    const double e2 = domain_errors(r2.final_state, *exact_solution(c2, c2.t_final)).l1;
    v.check(within_factor(e2, 1.70e-5, 2.0), "k=2 L1(80) %.3e", e2);

    // Discontinuous data: P1 at CFL 0.5. P2 needs CFL 0.2 here; those runs
    // and the P2 blow-up at 0.5 are reported for information only.
    struct Case {
        int k;
        const char* tableau;
        double cfl;
        bool counted;
    };
    for (const char* initial : {"shock", "riemann"}) {
        for (const Case cs : {Case{1, "CF2", 0.5, true}, Case{1, "CF3G", 0.5, true}, Case{2, "CF3G", 0.2, false}}) {
            auto c = smooth(80, cs.k, cs.tableau, cs.cfl);
            c.initial = initial;
            c.t_final = std::string(initial) == "shock" ? 1.5 / pi : 0.5;
            double mass = 0.0, peak = 0.0, growth = -1.0;
            bool finite = true;
            try {
                const auto r = run(c);
                for (const auto& rec : r.records) {
                    mass = std::max(mass, std::abs(rec.dev_mass));
                    growth = std::max(growth, rec.dev_l2);
                }
                for (double x : r.final_state.coeffs()) finite = finite && std::isfinite(x);
                for (std::size_t e = 0; e < r.final_state.mesh().num_cells(); ++e)
                    peak = std::max(peak, std::abs(r.final_state.average(e)));
            } catch (const Error& e) {
                v.check(!cs.counted, "%s P%d %s: %s", initial, cs.k, cs.tableau, e.what());
                continue;
            }
            // Stable: finite with the L2 norm bounded near its initial value. The
            // unlimited schemes overshoot at the shock (L2 up a few 1e-3 while
            // the shock crosses a cell); an unstable run grows geometrically.
            const bool ok = finite && growth <= 0.1 && mass <= 1e-12;
            v.check(ok || !cs.counted, "%s%s P%d %s CFL %.1f mass %.1e L2 growth %.1e max avg %.2f",
                    cs.counted ? "" : "note: ", initial, cs.k, cs.tableau, cs.cfl, mass, growth, peak);
        }
    }
    {
        auto c = smooth(80, 2, "CF3G", 0.5);
        c.initial = "riemann";
        c.t_final = 0.5;
        Solver sol(c);
        const double l0 = modal_l2(sol.state());
        int steps = 0;
        while (!sol.done() && modal_l2(sol.state()) <= 10 * l0 && steps < 2000) {
            sol.advance();
            ++steps;
        }
        v.check(true, "note: riemann P2 CF3G CFL 0.5 L2 x%.1e after %d steps", modal_l2(sol.state()) / l0, steps);
    }
    return v;
}

// Forward/backward cycling of weak Landau damping; returns the slope of the
// L1 error between t1 and t2 (t counts both directions).
double cycling_slope(int n, double t1, double t2) {
    auto c = vp(n, 1, "CF3C03", 0.5, 0.2);
    c.alpha = 0.01;
    Solver s(c);
    const DGField u0 = s.state();
    double e1 = 0.0, t = 0.0;
    const int cycles = static_cast<int>(std::lround(t2 / 0.4));
    for (int i = 1; i <= cycles; ++i) {
        for (int half = 0; half < 2; ++half) {
            while (!s.done()) s.advance();
            s.reset(reflect_y(s.state()));
        }
        t = 0.4 * i;
        if (std::abs(t - t1) < 1e-9) e1 = domain_errors(s.state(), u0).l1;
    }
    const double e2 = domain_errors(s.state(), u0).l1;
    return (e2 - e1) / (t2 - t1);
}

Verdict a8() {
    Verdict v;
    const double s20 = cycling_slope(20, 2000, 3000);
    const double s30 = cycling_slope(30, 3000, 5000);
    const double p = std::log(s20 / s30) / std::log(1.5);
    v.check(std::abs(p - 2.8) <= 0.4, "slopes %.3e %.3e order %.2f", s20, s30, p);
    return v;
}

Verdict a9() {
    Verdict v;
    const Mesh2D m(0, 1, 0, 1, 10, 10);
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> pos(0.3, 0.7);
    std::uniform_real_distribution<double> d(-3, 3);
    double area_err = 0.0, green_err = 0.0, trip_err = 0.0;
    auto poly = [&](int ix, int iy, double x, double y) {
        const double xi = (x - m.x_center(ix)) / m.dx(), eta = (y - m.y_center(iy)) / m.dy();
        const double a = 0.3 + 0.1 * ix - 0.05 * iy;
        return a - 0.7 * xi + 1.3 * xi * eta * eta + a * xi * xi * xi * eta - 0.8 * eta * eta * eta * eta;
    };
    for (int n = 0; n < 10000; ++n) {
        const auto corners = oracle::random_quad(rng, pos(rng), pos(rng), m.dx());
        const auto c = build_quad(corners, m.cell_area());
        double s = 0.0;
        for (const auto& [l, a] : green_integral_by_cell(c, m, [](int, int, double, double) { return 1.0; })) s += a;
        area_err = std::max(area_err, std::abs(s - cell_area(c)) / cell_area(c));

        const oracle::Polygon pg(corners.begin(), corners.end());
        double total = 0.0, ref = 0.0;
        for (const auto& [l, val] : green_integral_by_cell(c, m, poly)) {
            const auto [ix, iy] = m.cell_of(l);
            const auto piece = oracle::clip_box(pg, m.x_line(ix), m.x_line(ix + 1), m.y_line(iy), m.y_line(iy + 1));
            total += val;
            ref += oracle::integrate_polygon(piece, [&](double x, double y) { return poly(ix, iy, x, y); });
        }
        green_err = std::max(green_err, std::abs(total - ref) / std::max(std::abs(ref), cell_area(c)));

        const Point p1{d(rng), d(rng)};
        const Point p3{p1.x + 1 + std::abs(d(rng)), p1.y + d(rng)};
        const Point p2 = 0.5 * (p1 + p3) + Point{0.1 * d(rng), 0.1 * d(rng)};
        const ParabolicEdge e(p1, p2, p3);
        for (const Point p : {p1, p2, p3}) {
            const Point r = e.reverse(e.forward(p));
            trip_err = std::max({trip_err, std::abs(r.x - p.x), std::abs(r.y - p.y)});
        }
        const Point f1 = e.forward(p1), f3 = e.forward(p3);
        trip_err = std::max({trip_err, std::abs(f1.x + 1), std::abs(f1.y), std::abs(f3.x - 1), std::abs(f3.y)});
    }
    v.check(area_err <= 1e-12, "partition of unity %.1e", area_err);
    v.check(green_err <= 1e-12, "Green vs fan quadrature %.1e", green_err);
    v.check(trip_err <= 1e-12, "parabolic round trip %.1e", trip_err);
    return v;
}

Verdict a10() {
    Verdict v;
    const double dM = 0.01, dm = 0.0005;
    auto is = [](ControllerResult r, Decision d, double cfl) { return r.decision == d && r.cfl == cfl; };
    v.check(is(adaptive_controller(0.02, 5, dM, dm, 1, 10), Decision::RestartLower, 4), "theta>dM lowers");
    v.check(is(adaptive_controller(0.0001, 5, dM, dm, 1, 10), Decision::RestartHigher, 6), "theta<dm raises");
    v.check(is(adaptive_controller(0.005, 5, dM, dm, 1, 10), Decision::Continue, 5), "between continues");
    v.check(is(adaptive_controller(0.02, 1, dM, dm, 1, 10), Decision::Continue, 1), "floor");
    v.check(is(adaptive_controller(0.02, 1.5, dM, dm, 1, 10), Decision::RestartLower, 1), "clamped to floor");
    v.check(is(adaptive_controller(0.0001, 10, dM, dm, 1, 10), Decision::Continue, 10), "cap");
    v.check(is(adaptive_controller(0.0001, 9.5, dM, dm, 1, 10), Decision::RestartHigher, 10), "clamped to cap");

    // A replayed lower-CFL step is bit-identical to a fresh step at that CFL.
    auto c = vp(16, 1, "CF2", 3, 1.0);
    c.adaptive = true;
    c.cfl_min = 1;
    c.cfl_max = 3;
    c.delta_max = 1e-300;
    c.delta_min = 0;
    Solver a(c);
    const auto out = a.advance();
    auto fresh = vp(16, 1, "CF2", out.cfl, 1.0);
    Solver b(fresh);
    b.advance();
    v.check(out.restarts == 2 && a.state() == b.state() && a.time() == b.time(),
            "replay after %d restarts to CFL %g identical", out.restarts, out.cfl);
    return v;
}

Verdict a11() {
    Verdict v;
    auto c = default_config(Scenario::GuidingCenter);
    c.initial = "kelvin_helmholtz";
    c.perturbation = 0.015;
    c.wavenumber = 0.5;
    c.x_max = 4 * pi;
    c.nx = c.ny = 64;
    c.degree = 2;
    c.mode = UpstreamMode::QuadCurved;
    c.tableau = "CF3C03";
    c.cfl = c.cfl_min = c.cfl_max = 5;
    c.t_final = 20;
    RunResult r;
    try {
        r = run(c);
    } catch (const Error& e) {
        v.check(false, "%s", e.what());
        return v;
    }
    double mass = 0.0, energy = 0.0, enstrophy = 0.0;
    for (const auto& rec : r.records) {
        mass = std::max(mass, std::abs(rec.dev_mass));
        energy = std::max(energy, std::abs(rec.dev_energy));
        enstrophy = std::max(enstrophy, std::abs(rec.dev_secondary));
    }
    v.check(true, "%d steps to T=20", r.steps);
    v.check(mass <= 1e-12, "mass %.1e", mass);
    v.check(energy <= 0.1, "energy %.2e", energy);
    v.check(enstrophy <= 0.1, "enstrophy %.2e", enstrophy);
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria A1-A11"};
    bool extended = false;
    std::string only;
    app.add_flag("--extended", extended, "also run A8 (hours)");
    app.add_option("--only", only, "comma separated subset, e.g. A1,A9");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Verdict()>>> all = {
        {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4},  {"A5", a5},  {"A6", a6},
        {"A7", a7}, {"A8", a8}, {"A9", a9}, {"A10", a10}, {"A11", a11}};
    std::vector<std::string> selected;
    if (!only.empty()) {
        std::stringstream ss(only);
        std::string id;
        while (std::getline(ss, id, ',')) selected.push_back(id);
    }
    auto wanted = [&](const std::string& id) {
        if (!selected.empty()) return std::find(selected.begin(), selected.end(), id) != selected.end();
        return id != "A8" || extended;
    };

    int failures = 0;
    for (const auto& [id, fn] : all) {
        if (!wanted(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = fn();
        } catch (const std::exception& e) {
            v.check(false, "error: %s", e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%-4s %s  %s  (%.0f s)\n", id.c_str(), v.pass ? "PASS" : "FAIL", v.detail.c_str(), secs);
        std::fflush(stdout);
        if (!v.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
