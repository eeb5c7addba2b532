#pragma once

#include <array>
#include <vector>

#include "sldg/dg_field.hpp"
#include "sldg/fields.hpp"
#include "sldg/geometry.hpp"

namespace sldg {

/// Backward-traced node lattice of a mesh. The lattice has `refine` nodes per
/// element and direction (1: corners, 2: corners, edge midpoints, centers) and
/// is periodic, so only refine*nx by refine*ny nodes are stored. Nodes with
/// indices outside that range are the stored ones shifted by whole periods.
struct TraceResult {
    Mesh2D mesh;
    int refine = 1;
    std::vector<Point> points;

    [[nodiscard]] int width() const { return refine * mesh.nx; }
    [[nodiscard]] int height() const { return refine * mesh.ny; }

    /// Traced position of lattice node (i, j), any integers.
    [[nodiscard]] Point node(int i, int j) const;
    /// Untraced position of lattice node (i, j).
    [[nodiscard]] Point origin(int i, int j) const;

    /// Traced corners of element (ix, iy), lattice order (ll, lr, ur, ul).
    [[nodiscard]] std::array<Point, 4> corners(int ix, int iy) const;
    /// Traced 3x3 lattice of element (ix, iy), index b*3+a. Needs refine = 2.
    [[nodiscard]] std::array<Point, 9> nine(int ix, int iy) const;
};

struct TraceOptions {
    int substeps = 1;
    /// Traced coordinates closer than snap * min(dx, dy) to a grid line are
    /// moved onto it.
    double snap = 1e-12;
};

/// Solves dX/ds = -P(X) over [0, dt] from every lattice node with the
/// six-stage fifth-order Runge-Kutta method of Butcher.
TraceResult trace_backward(const FrozenField& field, double dt, int refine, const TraceOptions& opts = {});

/// Traces arbitrary points (same integrator, no snapping).
std::vector<Point> trace_points(const std::vector<Point>& points, const FrozenField& field, double dt, int substeps = 1);

/// Least-squares pullback of the element basis: row m holds the monomial
/// coefficients (in X = (x - center.x)/dx, Y = (y - center.y)/dy) of the
/// polynomial of degree k closest to basis function m at the traced points.
struct TestFunctionStar {
    int degree = 1;
    Point center;
    double dx = 1.0, dy = 1.0;
    std::array<std::array<double, 6>, 6> coeffs{};

    [[nodiscard]] double value(int m, double x, double y) const;
};

/// `traced` and `local` are matching lists (4 or 9 entries) of upstream
/// positions and the local coordinates of the nodes they came from. Throws
/// SingularFit when the normal equations are rank deficient.
TestFunctionStar reconstruct_test_function(int k, const std::vector<Point>& traced, const std::vector<Point>& local,
                                           Point center, double dx, double dy, std::ptrdiff_t element = -1);

struct SldgOptions {
    TraceOptions trace;
    /// Relative tolerance for collapsed upstream cells.
    double area_tol = 1e-12;
};

struct StepStats {
    /// Largest relative area deviation of the upstream cells.
    double theta = 0.0;
};

/// One conservative SLDG step for u_t + div(P u) = 0 with P frozen.
DGField sldg_linear_step(const DGField& u, const FrozenField& field, double dt, UpstreamMode mode,
                         const SldgOptions& opts = {}, StepStats* stats = nullptr);

/// Upstream cell of element (ix, iy) built from a trace.
UpstreamCell upstream_cell(const TraceResult& trace, int ix, int iy, UpstreamMode mode, double area_tol = 1e-12);

/// max_j |area(A_j*) - area(A_j)| / area(A_j) over all elements.
double area_deviation(const TraceResult& trace, UpstreamMode mode);

/// Positivity-preserving rescaling about the cell average, with the minimum
/// taken over (k+2)^2 equispaced points per element (edges included) and,
/// for k = 2, the exact minimum of the quadratic on the cell.
DGField pp_limiter(const DGField& u);

/// Minimum of u over the limiter's sample points.
double sampled_minimum(const DGField& u);

}  // namespace sldg
