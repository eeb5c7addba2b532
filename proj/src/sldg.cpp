#include "sldg/sldg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <span>
#include <exception>
#include <stdexcept>

#include "sldg/basis.hpp"
#include "sldg/error.hpp"

namespace sldg {

namespace {

int floor_div(int i, int n) { return i >= 0 ? i / n : -((-i + n - 1) / n); }

// Butcher's six-stage fifth-order method.
constexpr double kA[6][5] = {
    {0, 0, 0, 0, 0},
    {1.0 / 4, 0, 0, 0, 0},
    {1.0 / 8, 1.0 / 8, 0, 0, 0},
    {0, -1.0 / 2, 1, 0, 0},
    {3.0 / 16, 0, 0, 9.0 / 16, 0},
    {-3.0 / 7, 2.0 / 7, 12.0 / 7, -12.0 / 7, 8.0 / 7},
};
constexpr double kB[6] = {7.0 / 90, 0, 32.0 / 90, 12.0 / 90, 32.0 / 90, 7.0 / 90};

Point rk5_backward(Point p, const FrozenField& field, double dt, int substeps) {
    const double h = dt / substeps;
    Point k[6];
    for (int s = 0; s < substeps; ++s) {
        for (int i = 0; i < 6; ++i) {
            Point q = p;
            for (int j = 0; j < i; ++j) q = q + (h * kA[i][j]) * k[j];
            const Point v = field.velocity(q.x, q.y);
            k[i] = {-v.x, -v.y};
        }
        for (int i = 0; i < 6; ++i) p = p + (h * kB[i]) * k[i];
    }
    return p;
}

double snap_to_line(double x, double lo, double h, double tol) {
    const double line = lo + std::round((x - lo) / h) * h;
    return std::abs(x - line) <= tol ? line : x;
}

}  // namespace

Point TraceResult::origin(int i, int j) const {
    return {mesh.x_min + (i * mesh.dx()) / refine, mesh.y_min + (j * mesh.dy()) / refine};
}

Point TraceResult::node(int i, int j) const {
    const int w = width();
    const int h = height();
    const int pi = floor_div(i, w);
    const int pj = floor_div(j, h);
    const Point p = points[static_cast<std::size_t>(j - pj * h) * w + (i - pi * w)];
    return {p.x + pi * mesh.lx(), p.y + pj * mesh.ly()};
}

std::array<Point, 4> TraceResult::corners(int ix, int iy) const {
    const int r = refine;
    return {node(r * ix, r * iy), node(r * ix + r, r * iy), node(r * ix + r, r * iy + r), node(r * ix, r * iy + r)};
}

std::array<Point, 9> TraceResult::nine(int ix, int iy) const {
    if (refine != 2) throw std::logic_error("TraceResult::nine needs a refined lattice");
    std::array<Point, 9> p;
    for (int b = 0; b < 3; ++b) {
        for (int a = 0; a < 3; ++a) p[b * 3 + a] = node(2 * ix + a, 2 * iy + b);
    }
    return p;
}

TraceResult trace_backward(const FrozenField& field, double dt, int refine, const TraceOptions& opts) {
    TraceResult tr;
    tr.mesh = field.mesh();
    tr.refine = refine;
    const int w = tr.width();
    const int h = tr.height();
    tr.points.resize(static_cast<std::size_t>(w) * h);
    const auto& m = tr.mesh;
    const double tol = opts.snap * std::min(m.dx(), m.dy());
#pragma omp parallel for schedule(static)
    for (int j = 0; j < h; ++j) {
        for (int i = 0; i < w; ++i) {
            Point p = tr.origin(i, j);
            if (dt != 0.0) {
                p = rk5_backward(p, field, dt, opts.substeps);
                p.x = snap_to_line(p.x, m.x_min, m.dx(), tol);
                p.y = snap_to_line(p.y, m.y_min, m.dy(), tol);
            }
            tr.points[static_cast<std::size_t>(j) * w + i] = p;
        }
    }
    return tr;
}

std::vector<Point> trace_points(const std::vector<Point>& points, const FrozenField& field, double dt, int substeps) {
    std::vector<Point> out;
    out.reserve(points.size());
    for (const Point& p : points) out.push_back(rk5_backward(p, field, dt, substeps));
    return out;
}

double TestFunctionStar::value(int m, double x, double y) const {
    double mono[kMaxMonomials];
    monomials(degree, (x - center.x) / dx, (y - center.y) / dy, mono);
    double s = 0.0;
    for (int n = 0; n < num_monomials(degree); ++n) s += coeffs[m][n] * mono[n];
    return s;
}

TestFunctionStar reconstruct_test_function(int k, const std::vector<Point>& traced, const std::vector<Point>& local,
                                           Point center, double dx, double dy, std::ptrdiff_t element) {
    const int nm = basis_dim(k);
    const int nq = static_cast<int>(traced.size());
    if (nq < nm || local.size() != traced.size()) throw std::invalid_argument("reconstruct_test_function: too few points");
    TestFunctionStar psi;
    psi.degree = k;
    psi.center = center;
    psi.dx = dx;
    psi.dy = dy;

    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 9, 6> V(nq, nm);
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 9, 6> B(nq, nm);
    double row[kMaxMonomials];
    for (int q = 0; q < nq; ++q) {
        monomials(k, (traced[q].x - center.x) / dx, (traced[q].y - center.y) / dy, row);
        for (int n = 0; n < nm; ++n) V(q, n) = row[n];
        basis_values(k, local[q].x, local[q].y, row);
        for (int n = 0; n < nm; ++n) B(q, n) = row[n];
    }
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 6, 6> N = V.transpose() * V;
    Eigen::LLT<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 6, 6>> llt(N);
    if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-13)) {
        throw SingularFit("least-squares test function fit is rank deficient", element);
    }
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 6, 6> C = llt.solve(V.transpose() * B);
    for (int m = 0; m < nm; ++m) {
        for (int n = 0; n < nm; ++n) psi.coeffs[m][n] = C(n, m);
    }
    // The constant is reproduced exactly; pin it so that mass is exact.
    for (int n = 0; n < nm; ++n) psi.coeffs[0][n] = n == 0 ? 1.0 : 0.0;
    return psi;
}

UpstreamCell upstream_cell(const TraceResult& trace, int ix, int iy, UpstreamMode mode, double area_tol) {
    const auto& m = trace.mesh;
    const auto e = static_cast<std::ptrdiff_t>(m.index(ix, iy));
    if (mode == UpstreamMode::QuadCurved) {
        return build_quad_curved(trace.nine(ix, iy), m.cell_area(), area_tol, 1e-12 * std::min(m.dx(), m.dy()), e);
    }
    return build_quad(trace.corners(ix, iy), m.cell_area(), area_tol, e);
}

double area_deviation(const TraceResult& trace, UpstreamMode mode) {
    const auto& m = trace.mesh;
    double theta = 0.0;
    for (int iy = 0; iy < m.ny; ++iy) {
        for (int ix = 0; ix < m.nx; ++ix) {
            const double a = cell_area(upstream_cell(trace, ix, iy, mode));
            theta = std::max(theta, std::abs(a - m.cell_area()) / m.cell_area());
        }
    }
    return theta;
}

DGField sldg_linear_step(const DGField& u, const FrozenField& field, double dt, UpstreamMode mode,
                         const SldgOptions& opts, StepStats* stats) {
    const auto& mesh = u.mesh();
    if (!(mesh == field.mesh())) throw MeshMismatch("sldg_linear_step: field and solution on different meshes");
    const int k = u.degree();
    if (mode == UpstreamMode::QuadCurved && k != 2) {
        throw std::invalid_argument("quadratic-curved upstream cells need degree 2");
    }
    const int refine = k == 2 ? 2 : 1;
    const TraceResult trace = trace_backward(field, dt, refine, opts.trace);

    GreenRule rule;
    rule.antiderivative_points = k + 1;
    rule.edge_points = mode == UpstreamMode::QuadCurved ? 2 * k + 2 : k + 1;

    std::vector<Point> local;
    if (refine == 1) {
        local = {{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}};
    } else {
        for (int b = 0; b < 3; ++b) {
            for (int a = 0; a < 3; ++a) local.push_back({0.5 * (a - 1), 0.5 * (b - 1)});
        }
    }

    const int nm = basis_dim(k);
    const double dx = mesh.dx();
    const double dy = mesh.dy();
    const double area = mesh.cell_area();
    DGField out(mesh, k);
    double theta = 0.0;
    std::exception_ptr failure;
    const int ncells = static_cast<int>(mesh.num_cells());

#pragma omp parallel
    {
        std::vector<GreenNode> nodes;
        std::vector<Point> traced(local.size());
        double local_theta = 0.0;
#pragma omp for schedule(dynamic, 16)
        for (int e = 0; e < ncells; ++e) {
            try {
                const auto [ix, iy] = mesh.cell_of(static_cast<std::size_t>(e));
                const UpstreamCell cell = upstream_cell(trace, ix, iy, mode, opts.area_tol);
                local_theta = std::max(local_theta, std::abs(cell_area(cell) - area) / area);

                Point center;
                if (refine == 1) {
                    // Lattice order, not cell.corners: build_quad may have reversed those.
                    const auto c = trace.corners(ix, iy);
                    for (int q = 0; q < 4; ++q) {
                        traced[q] = c[q];
                        center = center + 0.25 * c[q];
                    }
                } else {
                    const auto p = trace.nine(ix, iy);
                    for (int q = 0; q < 9; ++q) traced[q] = p[q];
                    center = p[4];
                }
                const TestFunctionStar psi = reconstruct_test_function(k, traced, local, center, dx, dy, e);

                green_nodes(cell, mesh, rule, nodes);
                double moments[6] = {0, 0, 0, 0, 0, 0};
                double bu[kMaxMonomials], mono[kMaxMonomials];
                for (const GreenNode& g : nodes) {
                    const std::size_t l = mesh.index(mesh.fold_x(g.ix), mesh.fold_y(g.iy));
                    const double xi = (g.x - mesh.x_line(g.ix)) / dx - 0.5;
                    const double eta = (g.y - mesh.y_line(g.iy)) / dy - 0.5;
                    basis_values(k, xi, eta, bu);
                    const auto c = u.cell(l);
                    double val = 0.0;
                    for (int n = 0; n < nm; ++n) val += c[n] * bu[n];
                    monomials(k, (g.x - center.x) / dx, (g.y - center.y) / dy, mono);
                    const double wv = g.w * val;
                    for (int n = 0; n < nm; ++n) moments[n] += wv * mono[n];
                }
                auto target = out.cell(static_cast<std::size_t>(e));
                for (int mi = 0; mi < nm; ++mi) {
                    double s = 0.0;
                    for (int n = 0; n < nm; ++n) s += psi.coeffs[mi][n] * moments[n];
                    target[mi] = s / (area * kBasisNorms[mi]);
                }
            } catch (...) {
#pragma omp critical(sldg_failure)
                if (!failure) failure = std::current_exception();
            }
        }
#pragma omp critical(sldg_theta)
        theta = std::max(theta, local_theta);
    }
    if (failure) std::rethrow_exception(failure);
    if (stats) stats->theta = theta;
    return out;
}

namespace {

template <class F>
void for_each_sample(int k, F&& f) {
    const int n = k + 2;
    for (int q = 0; q < n; ++q) {
        for (int p = 0; p < n; ++p) f(-0.5 + static_cast<double>(p) / (n - 1), -0.5 + static_cast<double>(q) / (n - 1));
    }
}

// Exact minimum of a quadratic element polynomial over [-1/2, 1/2]^2: corners,
// edge vertices and the interior critical point.
double quadratic_minimum(std::span<const double> c) {
    // u = a + b xi + d eta + p xi^2 + q xi eta + r eta^2
    const double p = c[3], q = c[4], r = c[5];
    const double a = c[0] - p / 12.0 - r / 12.0, b = c[1], d = c[2];
    auto val = [&](double x, double y) { return a + b * x + d * y + p * x * x + q * x * y + r * y * y; };
    double m = INFINITY;
    auto consider = [&](double x, double y) {
        if (std::abs(x) <= 0.5 && std::abs(y) <= 0.5) m = std::min(m, val(x, y));
    };
    for (double s : {-0.5, 0.5}) {
        for (double t : {-0.5, 0.5}) consider(s, t);
        // xi = s: r y^2 + (d + q s) y; eta = s: p x^2 + (b + q s) x
        if (r != 0.0) consider(s, -(d + q * s) / (2.0 * r));
        if (p != 0.0) consider(-(b + q * s) / (2.0 * p), s);
    }
    const double det = 4.0 * p * r - q * q;
    if (det != 0.0) consider((q * d - 2.0 * r * b) / det, (q * b - 2.0 * p * d) / det);
    return m;
}

}  // namespace

double sampled_minimum(const DGField& u) {
    double m = INFINITY;
    for (std::size_t e = 0; e < u.num_cells(); ++e) {
        for_each_sample(u.degree(), [&](double xi, double eta) { m = std::min(m, u.local_value(e, xi, eta)); });
    }
    return m;
}

DGField pp_limiter(const DGField& u) {
    DGField out = u;
    for (std::size_t e = 0; e < u.num_cells(); ++e) {
        const double avg = u.average(e);
        if (avg < -1e-13) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "negative cell average %.3e", avg);
            throw NegativeAverage(buf, static_cast<std::ptrdiff_t>(e));
        }
        double mn = INFINITY;
        for_each_sample(u.degree(), [&](double xi, double eta) { mn = std::min(mn, u.local_value(e, xi, eta)); });
        // Quadratics can dip below zero between the samples; remapping such a
        // cell can then produce a negative average.
        if (u.degree() == 2) mn = std::min(mn, quadratic_minimum(u.cell(e)));
        if (mn >= 0.0) continue;
        const double theta = std::min(std::abs(avg / (mn - avg)), 1.0);
        auto c = out.cell(e);
        for (std::size_t i = 1; i < c.size(); ++i) c[i] *= theta;
    }
    return out;
}

}  // namespace sldg
