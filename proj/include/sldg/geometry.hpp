#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "sldg/mesh.hpp"

namespace sldg {

/// Edge of an upstream cell as a parametric quadratic over t in [-1, 1]:
/// x(t) = x2 t^2 + x1 t + x0, y(t) likewise. Straight edges have x2 = y2 = 0.
/// `from` and `to` are the traced endpoints (t = -1 and t = +1) kept verbatim
/// so that grid-line classification of vertices is exact.
struct EdgeCurve {
    Point from;
    Point to;
    double x2 = 0.0, x1 = 0.0, x0 = 0.0;
    double y2 = 0.0, y1 = 0.0, y0 = 0.0;

    [[nodiscard]] Point at(double t) const { return {(x2 * t + x1) * t + x0, (y2 * t + y1) * t + y0}; }
    [[nodiscard]] double dxdt(double t) const { return 2.0 * x2 * t + x1; }
    [[nodiscard]] double dydt(double t) const { return 2.0 * y2 * t + y1; }
    [[nodiscard]] bool curved() const { return x2 != 0.0 || y2 != 0.0; }

    static EdgeCurve straight(Point a, Point b);
};

/// Parabola through three traced points, built in the rotated local frame
/// where the endpoints sit at (-1, 0) and (1, 0):
///   xi  = a x + b y + c,   eta = b x - a y + d.
struct ParabolicEdge {
    Point p1, p2, p3;
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    double xi2 = 0.0, eta2 = 0.0;
    /// eta = kappa (xi^2 - 1) in the local frame.
    double kappa = 0.0;

    /// Throws DegenerateEdge for coincident endpoints and DegenerateCell when
    /// the midpoint projects onto an endpoint (|xi2| = 1).
    ParabolicEdge(Point first, Point middle, Point last, double snap_tol = 0.0);

    [[nodiscard]] Point forward(Point p) const { return {a * p.x + b * p.y + c, b * p.x - a * p.y + d}; }
    [[nodiscard]] Point reverse(Point q) const;
    [[nodiscard]] EdgeCurve curve() const;
};

enum class UpstreamMode { Quad, QuadCurved };

/// Traced image A_j* of an Eulerian element, with counter-clockwise edges.
/// Quad cells carry 4 corners; curved cells also carry the edge midpoints and
/// the center in `points` (lattice order: index b*3+a for node (a, b) of the
/// 3x3 element lattice, a along x).
struct UpstreamCell {
    UpstreamMode kind = UpstreamMode::Quad;
    std::ptrdiff_t owner = -1;
    std::array<Point, 4> corners{};
    std::array<EdgeCurve, 4> edges{};
    std::array<Point, 9> points{};
};

/// Signed area of the corner polygon (shoelace).
double polygon_area(const std::array<Point, 4>& v);

/// Quad from four traced corners in lattice order (lower-left, lower-right,
/// upper-right, upper-left). Reverses to counter-clockwise if needed. Throws
/// DegenerateCell for |area| <= area_tol * reference_area or a
/// self-intersecting boundary.
UpstreamCell build_quad(const std::array<Point, 4>& corners, double reference_area = 1.0,
                        double area_tol = 1e-12, std::ptrdiff_t owner = -1);

/// Quadratic-curved quad from nine traced points in 3x3 lattice order. Each
/// side is the parabola through its two corners and its midpoint.
UpstreamCell build_quad_curved(const std::array<Point, 9>& points, double reference_area = 1.0,
                               double area_tol = 1e-12, double snap_tol = 0.0, std::ptrdiff_t owner = -1);

/// Exact area enclosed by the (quadratic) edges: the integral of x dy.
double cell_area(const UpstreamCell& cell);

/// Real roots of q2 t^2 + q1 t + q0 = 0 strictly inside (-1 + tol, 1 - tol),
/// sorted. Falls back to the linear equation when q2 is negligible.
int roots_in_interval(double q2, double q1, double q0, double out[2], double tol = 1e-12);

/// Cell of the unwrapped grid that contains (x, y), with points on a grid
/// line assigned to the cell to their right / above. Uses the same
/// comparisons as the clipping kernel, so the two never disagree.
int grid_column(const Mesh2D& mesh, double x);
int grid_row(const Mesh2D& mesh, double y);

/// One piece of the Green's-theorem boundary decomposition.
struct Segment {
    enum class Kind { Outer, Inner };
    enum class Axis { Vertical, Horizontal };

    Kind kind = Kind::Outer;
    // Outer: edge index and parameter sub-interval; owner in unwrapped indices.
    int edge = -1;
    double t0 = 0.0, t1 = 0.0;
    int owner_ix = 0, owner_iy = 0;
    // Inner: grid line and its portion inside the cell; `winding` is the
    // multiplicity (1 for simple counter-clockwise cells). The cell before
    // the line (left / below) and after it (right / above), unwrapped.
    Axis axis = Axis::Vertical;
    int line = 0;
    double s0 = 0.0, s1 = 0.0;
    int winding = 0;
    int before_ix = 0, before_iy = 0;
    int after_ix = 0, after_iy = 0;
    // Inner piece that runs along an edge of the cell lying on the grid line.
    // It carries the weight of that edge under the half-open cell convention.
    bool on_boundary = false;
};

struct ClipResult {
    std::vector<Segment> segments;
    /// Folded background-element indices with positive overlap area, sorted.
    std::vector<std::size_t> overlap;
};

/// Splits the boundary of the cell along the (unwrapped) grid lines and finds
/// the grid-line pieces inside it. Inner horizontal segments are reported for
/// completeness; they carry no weight in the integrals below.
ClipResult clip(const UpstreamCell& cell, const Mesh2D& mesh);

/// Quadrature node of the Green's-theorem decomposition. For P = 0 and
/// Q_l(x, y) = int_{x_l^left}^x p_l(s, y) ds, the integral of p_l over
/// A* n A_l is the sum of w * p_l(x, y) over the nodes tagged with l
/// (unwrapped cell indices ix, iy).
struct GreenNode {
    int ix, iy;
    double x, y, w;
};

/// `antiderivative_points` Gauss points along x inside Q (exact for
/// integrands of degree 2n-1 in x); `edge_points` along each segment.
struct GreenRule {
    int antiderivative_points = 3;
    int edge_points = 3;
};

/// Fills `out` (cleared first) with the quadrature nodes of the cell.
void green_nodes(const UpstreamCell& cell, const Mesh2D& mesh, const GreenRule& rule, std::vector<GreenNode>& out);

/// Per-background-cell polynomial integrand family, p(ix, iy, x, y) with
/// unwrapped indices.
using CellIntegrand = std::function<double(int ix, int iy, double x, double y)>;

/// Sum over l of the integral of p_l over A* n A_l.
double green_integral(const UpstreamCell& cell, const Mesh2D& mesh, const CellIntegrand& p,
                      const GreenRule& rule = {});

/// The same integral split by folded background element.
std::vector<std::pair<std::size_t, double>> green_integral_by_cell(const UpstreamCell& cell, const Mesh2D& mesh,
                                                                   const CellIntegrand& p,
                                                                   const GreenRule& rule = {});

}  // namespace sldg
