#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sldg/config.hpp"
#include "sldg/error.hpp"

using namespace sldg;
namespace fs = std::filesystem;

namespace {

std::string dump_name(int step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "dump_%06d.txt", step);
    return buf;
}

int cmd_run(const RunManifest& m) {
    const fs::path out = m.out_dir;
    fs::create_directories(out);
    const auto& c = m.config;
    std::printf("%s %dx%d k=%d %s cfl=%g T=%g\n", scenario_name(c.scenario).c_str(), c.nx, c.ny, c.degree,
                c.tableau.c_str(), c.cfl, c.t_final);
    int step = 0;
    auto res = run(c, [&](const Solver& s, const StepOutcome&) {
        ++step;
        if (m.dump_every > 0 && step % m.dump_every == 0) write_dump_file(s.state(), out / dump_name(step));
    });
    write_timeseries(res.records, out / "timeseries.csv");
    write_dump_file(res.final_state, out / "final.txt");
    const auto& last = res.records.back();
    std::printf("steps %d  t=%.6g  dev_mass=%.3e  dev_L1=%.3e  dev_L2=%.3e  dev_energy=%.3e\n", res.steps, last.t,
                last.dev_mass, last.dev_l1, last.dev_l2, last.dev_energy);
    if (auto exact = exact_solution(c, last.t)) {
        const auto e = domain_errors(res.final_state, *exact);
        std::printf("error vs exact: L1 %.4e  L2 %.4e  Linf %.4e\n", e.l1, e.l2, e.linf);
    }
    std::printf("wrote %s\n", out.string().c_str());
    return 0;
}

int cmd_convergence(const RunManifest& m) {
    const auto& cv = m.convergence;
    if (cv.meshes.empty() == cv.cfls.empty())
        throw ValidationError("meshes", "give exactly one of [convergence] meshes or cfls");
    if (cv.meshes.size() + cv.cfls.size() < 2) throw ValidationError("meshes", "need at least two resolutions");
    const auto rows = refinement_study(m.config, cv.meshes, cv.cfls, cv.reference, cv.reference_cfl);
    fs::create_directories(m.out_dir);
    write_convergence(rows, fs::path(m.out_dir) / "convergence.csv");
    std::printf("%6s %6s %8s %12s %6s %12s %6s %12s %6s\n", "nx", "ny", "cfl", "L1", "ord", "L2", "ord", "Linf",
                "ord");
    for (const auto& r : rows)
        std::printf("%6d %6d %8.3g %12.4e %6.2f %12.4e %6.2f %12.4e %6.2f\n", r.nx, r.ny, r.cfl, r.errors.l1,
                    r.order_l1, r.errors.l2, r.order_l2, r.errors.linf, r.order_linf);
    return 0;
}

int cmd_reverse(const RunManifest& m) {
    const auto& c = m.config;
    if (c.scenario != Scenario::VlasovPoisson) throw ValidationError("scenario", "reverse needs the vp scenario");
    const auto e = reversibility_harness(c, c.t_final);
    fs::create_directories(m.out_dir);
    const fs::path p = fs::path(m.out_dir) / "reverse.csv";
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("cannot open " + p.string() + " for writing");
    char buf[256];
    std::snprintf(buf, sizeof buf, "nx,ny,k,cfl,T,L1,L2,Linf\n%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", c.nx, c.ny,
                  c.degree, c.cfl, c.t_final, e.l1, e.l2, e.linf);
    f << buf;
    if (!f) throw Error("error while writing " + p.string());
    std::printf("reversibility %dx%d k=%d cfl=%g T=%g: L1 %.4e  L2 %.4e  Linf %.4e\n", c.nx, c.ny, c.degree, c.cfl,
                c.t_final, e.l1, e.l2, e.linf);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semi-Lagrangian DG transport solver"};
    app.require_subcommand(1);
    std::string config_path, out_dir;
    std::vector<std::string> overrides;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "INI configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (overrides [output] dir)");
        sub->add_option("--override", overrides, "key=value or section.key=value")->take_all();
    };
    auto* run_cmd = app.add_subcommand("run", "single simulation: time series and dumps");
    auto* conv_cmd = app.add_subcommand("convergence", "mesh or CFL refinement table");
    auto* rev_cmd = app.add_subcommand("reverse", "Vlasov-Poisson reversibility error");
    for (auto* s : {run_cmd, conv_cmd, rev_cmd}) add_common(s);
    CLI11_PARSE(app, argc, argv);

    try {
        RunManifest m = load_config(config_path, overrides);
        if (!out_dir.empty()) m.out_dir = out_dir;
        if (run_cmd->parsed()) return cmd_run(m);
        if (conv_cmd->parsed()) return cmd_convergence(m);
        return cmd_reverse(m);
    } catch (const ParseError& e) {
        std::fprintf(stderr, "%s: %s\n", config_path.c_str(), e.what());
        return 2;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "invalid configuration: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
