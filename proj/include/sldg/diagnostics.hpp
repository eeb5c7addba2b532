#pragma once

#include "sldg/dg_field.hpp"
#include "sldg/fields.hpp"

namespace sldg {

/// Conserved quantities of one snapshot plus their deviation from t = 0.
/// `secondary` is the entropy for Vlasov-Poisson and the enstrophy for the
/// guiding-center model.
struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
    double energy = 0.0;
    double secondary = 0.0;
    double theta = 0.0;
    double cfl = 0.0;

    double dev_mass = 0.0;
    double dev_l1 = 0.0;
    double dev_l2 = 0.0;
    double dev_energy = 0.0;
    double dev_secondary = 0.0;
};

inline constexpr double kEntropyFloor = 1e-14;

/// L1 = int |f| (quadrature), L2 from the modal coefficients, energy
/// int f v^2 + int E^2 (both exact), entropy int f log(max(f, 1e-14)).
DiagnosticsRecord vp_diagnostics(const DGField& f, const ElectricField1D& E);

/// mass, L1, L2 of rho, energy ||E_perp||^2 and enstrophy ||rho||^2.
DiagnosticsRecord gc_diagnostics(const DGField& rho, const FrozenField& e_perp);

/// Plain scalar transport: mass, L1, L2, energy int u^2 / 2.
DiagnosticsRecord scalar_diagnostics(const DGField& u);

/// L2 norm from the modal coefficients (orthogonal basis).
double modal_l2(const DGField& u);

struct Deviation {
    double value = 0.0;
    /// Baseline was zero: `value` is the absolute deviation.
    bool absolute = false;
};

/// (q - q0) / |q0|, or q - q0 when q0 = 0.
Deviation relative_deviation(double q, double q0);

/// Fills the dev_* fields of `r` against `base`. The mass deviation is taken
/// relative to the initial L1 norm when the initial mass is round-off zero.
void fill_deviations(DiagnosticsRecord& r, const DiagnosticsRecord& base);

}  // namespace sldg
