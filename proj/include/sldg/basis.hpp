#pragma once

#include <array>
#include <cassert>
#include <span>

namespace sldg {

/// Number of monomials xi^a eta^b with a + b <= degree.
constexpr int num_monomials(int degree) { return (degree + 1) * (degree + 2) / 2; }

/// Dimension of the DG space P^k on one element.
constexpr int basis_dim(int k) { return num_monomials(k); }

inline constexpr int kMaxPolyDegree = 3;
inline constexpr int kMaxMonomials = num_monomials(kMaxPolyDegree);

/// Monomials up to `degree`, ordered by total degree and then by decreasing
/// power of xi: 1, xi, eta, xi^2, xi*eta, eta^2, xi^3, ...
inline void monomials(int degree, double xi, double eta, double* out) {
    out[0] = 1.0;
    if (degree == 0) return;
    out[1] = xi;
    out[2] = eta;
    if (degree == 1) return;
    out[3] = xi * xi;
    out[4] = xi * eta;
    out[5] = eta * eta;
    if (degree == 2) return;
    out[6] = out[3] * xi;
    out[7] = out[3] * eta;
    out[8] = out[5] * xi;
    out[9] = out[5] * eta;
}

/// Scaled Legendre modal basis on an element, in local coordinates
/// xi = (x - x_c)/dx, eta = (y - y_c)/dy, both in [-1/2, 1/2]:
///   {1, xi, eta, xi^2 - 1/12, xi*eta, eta^2 - 1/12}.
/// The first coefficient of any expansion is therefore the cell average.
inline void basis_values(int k, double xi, double eta, double* out) {
    monomials(k, xi, eta, out);
    if (k >= 2) {
        out[3] -= 1.0 / 12.0;
        out[5] -= 1.0 / 12.0;
    }
}

/// Reference-cell integral of the squared basis function (area factor
/// excluded): 1, 1/12, 1/12, 1/180, 1/144, 1/180.
inline constexpr std::array<double, 6> kBasisNorms = {1.0,         1.0 / 12.0,  1.0 / 12.0,
                                                      1.0 / 180.0, 1.0 / 144.0, 1.0 / 180.0};

/// Modal coefficients -> monomial coefficients in (xi, eta).
inline void modal_to_monomial(int k, std::span<const double> modal, double* mono) {
    const int n = basis_dim(k);
    for (int i = 0; i < n; ++i) mono[i] = modal[i];
    if (k >= 2) mono[0] -= (modal[3] + modal[5]) / 12.0;
}

/// Evaluates sum_i coeffs[i] * monomial_i(xi, eta) for a polynomial of the
/// given total degree.
inline double eval_monomial(int degree, const double* coeffs, double xi, double eta) {
    double m[kMaxMonomials];
    monomials(degree, xi, eta, m);
    double s = 0.0;
    for (int i = 0; i < num_monomials(degree); ++i) s += coeffs[i] * m[i];
    return s;
}

}  // namespace sldg
