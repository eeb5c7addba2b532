#pragma once

#include <span>
#include <vector>

namespace sldg {

/// Gauss-Legendre rule on the reference interval [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    [[nodiscard]] int size() const { return static_cast<int>(nodes.size()); }
};

/// Cached n-point Gauss-Legendre rule, 1 <= n <= 32. Exact for polynomials
/// of degree 2n-1.
const GaussRule& gauss_legendre(int n);

/// Tensor Gauss rule mapped to the unit reference cell [-1/2, 1/2]^2.
/// Weights sum to 1, so multiplying by the element area gives the physical
/// integral.
struct QuadratureRule {
    std::vector<double> xi;
    std::vector<double> eta;
    std::vector<double> weights;

    static QuadratureRule tensor(int points_per_direction);

    [[nodiscard]] std::size_t size() const { return weights.size(); }
};

}  // namespace sldg
