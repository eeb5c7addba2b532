#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "sldg/diagnostics.hpp"
#include "sldg/driver.hpp"

namespace sldg {

/// Settings of the `convergence` command.
struct ConvergenceSettings {
    std::vector<std::pair<int, int>> meshes;
    std::vector<double> cfls;
    Reference reference = Reference::Exact;
    double reference_cfl = 0.1;
};

struct RunManifest {
    ScenarioConfig config;
    std::filesystem::path out_dir = "out";
    /// Write a solution dump every N steps (0: final state only).
    int dump_every = 0;
    /// Reserved; the solver is deterministic and does not draw random numbers.
    unsigned long seed = 0;
    ConvergenceSettings convergence;
};

/// Parses INI text:
///
///   [scenario]  scenario, initial, alpha, wavenumber, perturbation,
///               velocity_x, velocity_y, limiter
///   [mesh]      nx, ny, k, mode, x_min, x_max, y_min, y_max
///   [time]      tableau, cfl, cfl_min, cfl_max, T, adaptive, delta_max,
///               delta_min, max_restarts, trace_substeps
///   [output]    dir, dump_every, seed
///   [convergence] meshes, cfls, reference, reference_cfl
///
/// `#` and `;` start comments. Required: scenario, nx, ny (except burgers),
/// k, tableau, cfl, T. Everything else defaults per scenario.
/// Throws ParseError (bad syntax, unknown key) or ValidationError.
RunManifest parse_config(const std::string& text);

/// Applies "key=value" or "section.key=value" on top of the config text.
RunManifest parse_config(const std::string& text, const std::vector<std::string>& overrides);

RunManifest load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

inline constexpr const char* kTimeseriesHeader =
    "t,mass,L1,L2,energy,entropy_or_enstrophy,theta,cfl,dev_mass,dev_L1,dev_L2,dev_energy,dev_entropy";

void write_timeseries(const std::vector<DiagnosticsRecord>& records, const std::filesystem::path& path);
std::vector<DiagnosticsRecord> read_timeseries(const std::filesystem::path& path);

void write_convergence(const std::vector<RefinementRow>& rows, const std::filesystem::path& path);

void write_dump_file(const DGField& field, const std::filesystem::path& path);
DGField read_dump_file(const std::filesystem::path& path);

}  // namespace sldg
