#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "sldg/error.hpp"

namespace sldg {

/// Commutator-free exponential integrator. Each row is one exponential: a
/// vector of coefficients over the stages whose generators are combined.
/// Rows of a stage (and of the final update) are applied in list order.
struct RKEITableau {
    std::string name;
    int stages = 1;
    std::vector<double> c;
    /// stage_rows[r]: exponentials producing stage r from the step's initial
    /// state; empty for stage 0.
    std::vector<std::vector<std::vector<double>>> stage_rows;
    std::vector<std::vector<double>> final_rows;

    /// Collapsed Butcher coefficients: sums over the exponential rows.
    [[nodiscard]] double a(int i, int k) const;
    [[nodiscard]] double b(int k) const;
    /// Exponentials per step.
    [[nodiscard]] int num_exponentials() const;
    /// Stages whose generator is referenced by some later row.
    [[nodiscard]] std::vector<bool> needed_generators() const;
};

/// CF1, CF2, CF2L, CF3, CF3G, CF3C09, CF3C03. Throws UnknownTableau.
RKEITableau builtin_tableau(const std::string& name);
const std::vector<std::string>& builtin_tableau_names();

/// One step of the integrator.
///   generator(state)              -> Gen, the frozen generator of a stage
///   combine(coeffs, gens)         -> Gen, sum of coeffs[i] * *gens[i]
///   propagate(state, gen, dt, i)  -> State, exp(dt * gen) applied to state;
///                                    i counts exponentials within the step
/// Errors derived from sldg::Error get the stage / exponential prefixed.
template <class State, class GenFn, class CombineFn, class PropFn>
State rkei_step(const State& y0, double dt, const RKEITableau& tab, GenFn&& generator, CombineFn&& combine,
                PropFn&& propagate) {
    using Gen = std::decay_t<decltype(generator(y0))>;
    const auto needed = tab.needed_generators();
    std::vector<Gen> gens(tab.stages);
    int exp_index = 0;

    auto apply = [&](State y, const std::vector<double>& row, const std::string& where) {
        std::vector<double> coeffs;
        std::vector<const Gen*> used;
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (row[k] != 0.0) {
                coeffs.push_back(row[k]);
                used.push_back(&gens[k]);
            }
        }
        try {
            const Gen g = combine(std::span<const double>(coeffs), std::span<const Gen* const>(used));
            y = propagate(y, g, dt, exp_index);
        } catch (Error& e) {
            e.add_context(where + ", exponential " + std::to_string(exp_index + 1));
            throw;
        }
        ++exp_index;
        return y;
    };

    for (int r = 0; r < tab.stages; ++r) {
        State y = y0;
        for (const auto& row : tab.stage_rows[r]) y = apply(std::move(y), row, "stage " + std::to_string(r + 1));
        if (needed[r]) {
            try {
                gens[r] = generator(y);
            } catch (Error& e) {
                e.add_context("generator of stage " + std::to_string(r + 1));
                throw;
            }
        }
    }
    State y = y0;
    for (const auto& row : tab.final_rows) y = apply(std::move(y), row, "final update");
    return y;
}

/// exp(A) by scaling and squaring with a Taylor polynomial.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& A);

}  // namespace sldg
