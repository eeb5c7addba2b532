#include <gtest/gtest.h>

#include <cmath>

#include "sldg/basis.hpp"
#include "sldg/quadrature.hpp"

using namespace sldg;

TEST(GaussLegendre, IntegratesPolynomialsUpToDegree2nMinus1) {
    for (int n = 1; n <= 10; ++n) {
        const auto& g = gauss_legendre(n);
        for (int p = 0; p <= 2 * n - 1; ++p) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.nodes[i], p);
            const double exact = (p % 2 == 0) ? 2.0 / (p + 1) : 0.0;
            EXPECT_NEAR(s, exact, 1e-14) << "n=" << n << " p=" << p;
        }
    }
}

TEST(GaussLegendre, NodesAreSymmetric) {
    const auto& g = gauss_legendre(7);
    for (int i = 0; i < 7; ++i) {
        EXPECT_EQ(g.nodes[i], -g.nodes[6 - i]);
        EXPECT_EQ(g.weights[i], g.weights[6 - i]);
    }
    EXPECT_EQ(g.nodes[3], 0.0);
}

TEST(GaussLegendre, RejectsUnsupportedCounts) {
    EXPECT_THROW(gauss_legendre(0), std::invalid_argument);
    EXPECT_THROW(gauss_legendre(33), std::invalid_argument);
}

TEST(TensorRule, WeightsSumToOne) {
    for (int n = 1; n <= 6; ++n) {
        const auto q = QuadratureRule::tensor(n);
        double s = 0.0;
        for (double w : q.weights) s += w;
        EXPECT_NEAR(s, 1.0, 1e-15);
        EXPECT_EQ(q.size(), static_cast<std::size_t>(n * n));
    }
}

TEST(Basis, GramMatrixIsDiagonalWithAnalyticNorms) {
    const auto q = QuadratureRule::tensor(4);
    double b[kMaxMonomials];
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            double s = 0.0;
            for (std::size_t g = 0; g < q.size(); ++g) {
                basis_values(2, q.xi[g], q.eta[g], b);
                s += q.weights[g] * b[i] * b[j];
            }
            EXPECT_NEAR(s, i == j ? kBasisNorms[i] : 0.0, 1e-15) << i << "," << j;
        }
    }
    // Explicit check of one entry: int (xi^2 - 1/12)^2 over the reference cell.
    EXPECT_DOUBLE_EQ(kBasisNorms[3], 1.0 / 80.0 - 2.0 / 144.0 + 1.0 / 144.0);
}

TEST(Basis, ModalToMonomialAgreesWithEvaluation) {
    const double modal[6] = {0.3, -1.2, 0.7, 2.5, -0.4, 1.1};
    double mono[6];
    modal_to_monomial(2, modal, mono);
    double b[kMaxMonomials];
    for (double xi : {-0.5, -0.1, 0.3}) {
        for (double eta : {-0.4, 0.0, 0.5}) {
            basis_values(2, xi, eta, b);
            double v = 0.0;
            for (int i = 0; i < 6; ++i) v += modal[i] * b[i];
            EXPECT_NEAR(eval_monomial(2, mono, xi, eta), v, 1e-15);
        }
    }
}
