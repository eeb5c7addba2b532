#pragma once

#include <array>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "sldg/dg_field.hpp"
#include "sldg/mesh.hpp"

namespace sldg {

using VectorFunction = std::function<Point(double, double)>;

/// Velocity field P frozen at some stage solution. The polynomial part is a
/// pair of per-element polynomials of total degree <= 3 in the local
/// coordinates (xi, eta) of the element, stored as monomial coefficients.
/// On top of it: a constant velocity, a shear term adding `shear * y` to the
/// x-velocity (the phase-space transport v d/dx of Vlasov-Poisson), and
/// optional closed-form terms used by tests and linear advection.
///
/// Evaluation wraps points periodically and averages the one-sided values of
/// the polynomial part on element interfaces (up to four cells at corners).
class FrozenField {
public:
    FrozenField() = default;
    FrozenField(const Mesh2D& mesh, int degree);

    static FrozenField zero(const Mesh2D& mesh);
    static FrozenField constant(const Mesh2D& mesh, double vx, double vy);
    static FrozenField analytic(const Mesh2D& mesh, VectorFunction f);

    [[nodiscard]] const Mesh2D& mesh() const { return mesh_; }
    [[nodiscard]] int degree() const { return degree_; }
    [[nodiscard]] int num_coeffs() const { return nm_; }

    [[nodiscard]] std::span<double> px(std::size_t e) { return {px_.data() + e * nm_, static_cast<std::size_t>(nm_)}; }
    [[nodiscard]] std::span<double> py(std::size_t e) { return {py_.data() + e * nm_, static_cast<std::size_t>(nm_)}; }
    [[nodiscard]] std::span<const double> px(std::size_t e) const {
        return {px_.data() + e * nm_, static_cast<std::size_t>(nm_)};
    }
    [[nodiscard]] std::span<const double> py(std::size_t e) const {
        return {py_.data() + e * nm_, static_cast<std::size_t>(nm_)};
    }

    double shear = 0.0;
    /// When positive, the shear profile is made periodic in y: it equals y
    /// except within `shear_taper` of the y boundary, where it runs linearly
    /// to the mid value (y_min + y_max) / 2 on the boundary itself.
    double shear_taper = 0.0;
    Point drift{};

    /// The y factor of the shear term at y.
    [[nodiscard]] double shear_profile(double y) const;

    [[nodiscard]] Point velocity(double x, double y) const;

    /// Velocity of one element's polynomial part at local coordinates.
    [[nodiscard]] Point local_velocity(std::size_t e, double xi, double eta) const;

    /// Maximum |P_x| and |P_y| sampled on an equispaced grid of degree + 2
    /// points per direction in every element (edges included).
    [[nodiscard]] std::pair<double, double> max_speed() const;

    /// Exact integral of |P|^2 of the polynomial part over the domain.
    [[nodiscard]] double l2_norm_squared() const;

    /// this += s * other. Polynomial coefficients are combined directly; the
    /// result has the larger of the two degrees.
    FrozenField& axpy(double s, const FrozenField& other);

private:
    void raise_degree(int degree);

    Mesh2D mesh_;
    int degree_ = 0;
    int nm_ = 1;
    std::vector<double> px_, py_;
    std::vector<std::pair<double, VectorFunction>> analytic_;
};

/// sum_i coeffs[i] * fields[i]. Throws MeshMismatch for different meshes.
FrozenField combine_frozen(std::span<const double> coeffs, std::span<const FrozenField* const> fields);

/// Per-x-cell charge density rho(x) = int f dv - 1 of a phase-space DG field,
/// as monomials r0 + r1 xi + r2 xi^2 in the local x coordinate.
struct ChargeDensity1D {
    double x_min = 0.0, x_max = 1.0;
    int nx = 1;
    std::vector<std::array<double, 3>> coeffs;

    [[nodiscard]] double dx() const { return (x_max - x_min) / nx; }
    [[nodiscard]] double value(double x) const;
    [[nodiscard]] double integral() const;
};

ChargeDensity1D charge_density(const DGField& f);

/// Periodic electric field E with dE/dx = rho and zero mean, as monomials
/// e0 + e1 xi + e2 xi^2 + e3 xi^3 per x-cell (continuous across cells).
struct ElectricField1D {
    double x_min = 0.0, x_max = 1.0;
    int nx = 1;
    std::vector<std::array<double, 4>> coeffs;
    /// Mean of rho removed before integrating (solvability).
    double removed_mean = 0.0;

    [[nodiscard]] double dx() const { return (x_max - x_min) / nx; }
    [[nodiscard]] double value(double x) const;
    [[nodiscard]] double integral() const;
    [[nodiscard]] double l2_norm_squared() const;
    [[nodiscard]] double max_abs() const;
};

ElectricField1D solve_poisson_1d(const ChargeDensity1D& rho);

/// Vlasov-Poisson transport field (v, E(x)) on the phase-space mesh.
FrozenField vlasov_field(const ElectricField1D& E, const Mesh2D& phase_mesh);

/// Convenience: charge density, field solve and transport field in one go.
FrozenField electric_field_1d(const DGField& f, ElectricField1D* field_out = nullptr);

/// Guiding-center drift E_perp = (-Phi_y, Phi_x) with -Laplace(Phi) = rho.
/// rho is sampled on a uniform lattice of k + 2 midpoints per element and
/// direction, the Poisson problem is solved by FFT, and each component is
/// fitted per element by least squares to a polynomial of degree k + 1.
FrozenField electric_field_2d(const DGField& rho);

/// Burgers transport field P(u) = u / 2 (u is a 1D field on a ny = 1 mesh).
FrozenField burgers_field(const DGField& u);

}  // namespace sldg
