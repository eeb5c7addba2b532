#include "sldg/rkei.hpp"

#include <cmath>

namespace sldg {

double RKEITableau::a(int i, int k) const {
    double s = 0.0;
    for (const auto& row : stage_rows[i]) s += k < static_cast<int>(row.size()) ? row[k] : 0.0;
    return s;
}

double RKEITableau::b(int k) const {
    double s = 0.0;
    for (const auto& row : final_rows) s += k < static_cast<int>(row.size()) ? row[k] : 0.0;
    return s;
}

int RKEITableau::num_exponentials() const {
    int n = static_cast<int>(final_rows.size());
    for (const auto& rows : stage_rows) n += static_cast<int>(rows.size());
    return n;
}

std::vector<bool> RKEITableau::needed_generators() const {
    std::vector<bool> used(stages, false);
    auto mark = [&](const std::vector<double>& row) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (row[k] != 0.0) used[k] = true;
        }
    };
    for (const auto& rows : stage_rows) {
        for (const auto& row : rows) mark(row);
    }
    for (const auto& row : final_rows) mark(row);
    return used;
}

const std::vector<std::string>& builtin_tableau_names() {
    static const std::vector<std::string> names = {"CF1", "CF2", "CF2L", "CF3", "CF3G", "CF3C09", "CF3C03"};
    return names;
}

RKEITableau builtin_tableau(const std::string& name) {
    RKEITableau t;
    t.name = name;
    if (name == "CF1") {
        t.stages = 1;
        t.c = {0.0};
        t.stage_rows = {{}};
        t.final_rows = {{1.0}};
    } else if (name == "CF2") {
        t.stages = 2;
        t.c = {0.0, 0.5};
        t.stage_rows = {{}, {{0.5}}};
        t.final_rows = {{0.0, 1.0}};
    } else if (name == "CF2L") {
        const double g = (2.0 - std::sqrt(2.0)) / 2.0;
        const double d = -2.0 * std::sqrt(2.0) / 3.0;
        t.stages = 3;
        t.c = {0.0, g, 1.0};
        t.stage_rows = {{}, {{g}}, {{d, 1.0 - d}}};
        t.final_rows = {{0.0, 1.0 - g, g}};
    } else if (name == "CF3" || name == "CF3C09") {
        const double g = (3.0 + std::sqrt(3.0)) / 6.0;
        t.stages = 3;
        t.c = {0.0, g, 1.0 - g};
        t.stage_rows = {{}, {{g}}, {{g - 1.0, 2.0 * (1.0 - g)}}};
        if (name == "CF3") {
            const double phi = 1.0 / (6.0 * (2.0 * g - 1.0));
            t.final_rows = {{0.0, 0.5 - phi, 0.5 + phi}, {0.0, phi, -phi}};
        } else {
            const double alpha = 0.5;
            const double beta = 1.0 / 6.0;
            const double sigma = (alpha + beta * (1.0 - 2.0 * g) - 1.0 / 3.0) / (1.0 - 2.0 * g);
            t.final_rows = {{alpha, beta, sigma}, {-alpha, 0.5 - beta, 0.5 - sigma}};
        }
    } else if (name == "CF3G") {
        t.stages = 3;
        t.c = {0.0, 0.5, 1.0};
        t.stage_rows = {{}, {{0.5}}, {{-1.0, 2.0}}};
        t.final_rows = {{1.0 / 12.0, 1.0 / 3.0, -1.0 / 4.0}, {1.0 / 12.0, 1.0 / 3.0, 5.0 / 12.0}};
    } else if (name == "CF3C03") {
        t.stages = 3;
        t.c = {0.0, 1.0 / 3.0, 2.0 / 3.0};
        t.stage_rows = {{}, {{1.0 / 3.0}}, {{0.0, 2.0 / 3.0}}};
        t.final_rows = {{1.0 / 3.0, 0.0, 0.0}, {-1.0 / 12.0, 0.0, 3.0 / 4.0}};
    } else {
        throw UnknownTableau(name);
    }
    return t;
}

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& A) {
    const Eigen::Index n = A.rows();
    const double norm = A.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const Eigen::MatrixXd B = A / std::ldexp(1.0, squarings);
    // With ||B|| <= 1/2 the Taylor tail after 20 terms is below 1e-25.
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd sum = term;
    for (int j = 1; j <= 20; ++j) {
        term = term * B / static_cast<double>(j);
        sum += term;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

}  // namespace sldg
