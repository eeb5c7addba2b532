#include "sldg/quadrature.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace sldg {

namespace {

GaussRule compute_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton on P_n starting from the Chebyshev-like guess; symmetric pairs.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    static constexpr int kMax = 32;
    if (n < 1 || n > kMax) throw std::invalid_argument("gauss_legendre: unsupported point count");
    static std::array<GaussRule, kMax + 1> cache;
    static std::array<std::once_flag, kMax + 1> flags;
    std::call_once(flags[n], [n] { cache[n] = compute_rule(n); });
    return cache[n];
}

QuadratureRule QuadratureRule::tensor(int points_per_direction) {
    const auto& g = gauss_legendre(points_per_direction);
    QuadratureRule q;
    for (int j = 0; j < g.size(); ++j) {
        for (int i = 0; i < g.size(); ++i) {
            q.xi.push_back(0.5 * g.nodes[i]);
            q.eta.push_back(0.5 * g.nodes[j]);
            q.weights.push_back(0.25 * g.weights[i] * g.weights[j]);
        }
    }
    return q;
}

}  // namespace sldg
