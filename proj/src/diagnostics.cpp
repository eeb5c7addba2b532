#include "sldg/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "sldg/basis.hpp"
#include "sldg/quadrature.hpp"

namespace sldg {

double modal_l2(const DGField& u) {
    double s = 0.0;
    for (std::size_t e = 0; e < u.num_cells(); ++e) {
        const auto c = u.cell(e);
        for (std::size_t m = 0; m < c.size(); ++m) s += c[m] * c[m] * kBasisNorms[m];
    }
    return std::sqrt(s * u.mesh().cell_area());
}

namespace {

double integrate_abs(const DGField& u) {
    return error_norm(u, [](double, double) { return 0.0; }, Norm::L1);
}

double entropy(const DGField& f) {
    const auto q = QuadratureRule::tensor(f.degree() + 3);
    double s = 0.0;
    for (std::size_t e = 0; e < f.num_cells(); ++e) {
        for (std::size_t g = 0; g < q.size(); ++g) {
            const double v = f.local_value(e, q.xi[g], q.eta[g]);
            s += q.weights[g] * v * std::log(std::max(v, kEntropyFloor));
        }
    }
    return s * f.mesh().cell_area();
}

}  // namespace

DiagnosticsRecord vp_diagnostics(const DGField& f, const ElectricField1D& E) {
    const auto& m = f.mesh();
    DiagnosticsRecord r;
    r.mass = total_mass(f);
    r.l1 = integrate_abs(f);
    r.l2 = modal_l2(f);
    // int f v^2 per cell with v = v_c + eta dv.
    double kinetic = 0.0;
    const double dv = m.dy();
    for (int iy = 0; iy < m.ny; ++iy) {
        const double vc = m.y_center(iy);
        for (int ix = 0; ix < m.nx; ++ix) {
            const auto c = f.cell(m.index(ix, iy));
            const double c5 = f.degree() >= 2 ? c[5] : 0.0;
            const double eta2 = c[0] / 12.0 + c5 / 180.0;
            kinetic += vc * vc * c[0] + 2.0 * vc * dv * c[2] / 12.0 + dv * dv * eta2;
        }
    }
    r.energy = kinetic * m.cell_area() + E.l2_norm_squared();
    r.secondary = entropy(f);
    return r;
}

DiagnosticsRecord gc_diagnostics(const DGField& rho, const FrozenField& e_perp) {
    DiagnosticsRecord r;
    r.mass = total_mass(rho);
    r.l1 = integrate_abs(rho);
    r.l2 = modal_l2(rho);
    r.energy = e_perp.l2_norm_squared();
    r.secondary = r.l2 * r.l2;
    return r;
}

DiagnosticsRecord scalar_diagnostics(const DGField& u) {
    DiagnosticsRecord r;
    r.mass = total_mass(u);
    r.l1 = integrate_abs(u);
    r.l2 = modal_l2(u);
    r.energy = 0.5 * r.l2 * r.l2;
    return r;
}

Deviation relative_deviation(double q, double q0) {
    if (q0 == 0.0) return {q - q0, true};
    return {(q - q0) / std::abs(q0), false};
}

void fill_deviations(DiagnosticsRecord& r, const DiagnosticsRecord& base) {
    // Zero-mean data (guiding-center rho) has a round-off sized mass; scale by
    // the L1 norm instead so the deviation stays meaningful.
    if (std::abs(base.mass) < 1e-12 * base.l1)
        r.dev_mass = (r.mass - base.mass) / base.l1;
    else
        r.dev_mass = relative_deviation(r.mass, base.mass).value;
    r.dev_l1 = relative_deviation(r.l1, base.l1).value;
    r.dev_l2 = relative_deviation(r.l2, base.l2).value;
    r.dev_energy = relative_deviation(r.energy, base.energy).value;
    r.dev_secondary = relative_deviation(r.secondary, base.secondary).value;
}

}  // namespace sldg
