#include "sldg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sldg/error.hpp"
#include "sldg/quadrature.hpp"

namespace sldg {

EdgeCurve EdgeCurve::straight(Point a, Point b) {
    EdgeCurve e;
    e.from = a;
    e.to = b;
    e.x1 = 0.5 * (b.x - a.x);
    e.y1 = 0.5 * (b.y - a.y);
    e.x0 = 0.5 * (a.x + b.x);
    e.y0 = 0.5 * (a.y + b.y);
    return e;
}

ParabolicEdge::ParabolicEdge(Point first, Point middle, Point last, double snap_tol)
    : p1(first), p2(middle), p3(last) {
    const double dx = p1.x - p3.x;
    const double dy = p1.y - p3.y;
    const double D = dx * dx + dy * dy;
    if (!(D > 0.0)) throw DegenerateEdge("upstream edge with coincident endpoints", -1);
    a = 2.0 * (p3.x - p1.x) / D;
    b = 2.0 * (p3.y - p1.y) / D;
    c = (p1.x * p1.x - p3.x * p3.x + p1.y * p1.y - p3.y * p3.y) / D;
    d = 2.0 * (p3.x * p1.y - p1.x * p3.y) / D;
    const Point m = forward(p2);
    xi2 = m.x;
    eta2 = m.y;
    const double denom = xi2 * xi2 - 1.0;
    if (std::abs(denom) < 1e-8) throw DegenerateCell("upstream edge midpoint projects onto an endpoint", -1);
    // Physical deviation of the midpoint from the chord is |eta2| * |chord| / 2.
    kappa = (std::abs(eta2) * 0.5 * std::sqrt(D) <= snap_tol) ? 0.0 : eta2 / denom;
}

Point ParabolicEdge::reverse(Point q) const {
    const double s = a * a + b * b;
    const double u = q.x - c;
    const double v = q.y - d;
    return {(a * u + b * v) / s, (b * u - a * v) / s};
}

EdgeCurve ParabolicEdge::curve() const {
    EdgeCurve e;
    e.from = p1;
    e.to = p3;
    const double hx = 0.5 * (p3.x - p1.x);
    const double hy = 0.5 * (p3.y - p1.y);
    const double mx = 0.5 * (p1.x + p3.x);
    const double my = 0.5 * (p1.y + p3.y);
    e.x2 = hy * kappa;
    e.x1 = hx;
    e.x0 = mx - hy * kappa;
    e.y2 = -hx * kappa;
    e.y1 = hy;
    e.y0 = my + hx * kappa;
    return e;
}

double polygon_area(const std::array<Point, 4>& v) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        const Point& p = v[i];
        const Point& q = v[(i + 1) % 4];
        s += p.x * q.y - q.x * p.y;
    }
    return 0.5 * s;
}

namespace {

double cross(Point o, Point a, Point b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

bool segments_cross(Point p1, Point p2, Point q1, Point q2) {
    const double d1 = cross(q1, q2, p1);
    const double d2 = cross(q1, q2, p2);
    const double d3 = cross(p1, p2, q1);
    const double d4 = cross(p1, p2, q2);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool self_intersecting(const std::array<Point, 4>& c) {
    return segments_cross(c[0], c[1], c[2], c[3]) || segments_cross(c[1], c[2], c[3], c[0]);
}

EdgeCurve reversed(const EdgeCurve& e) {
    EdgeCurve r = e;
    std::swap(r.from, r.to);
    r.x1 = -e.x1;
    r.y1 = -e.y1;
    return r;
}

void orient_ccw(UpstreamCell& cell) {
    std::array<EdgeCurve, 4> edges;
    std::array<Point, 4> corners;
    for (int i = 0; i < 4; ++i) {
        edges[i] = reversed(cell.edges[3 - i]);
        corners[i] = cell.corners[(4 - i) % 4];
    }
    cell.edges = edges;
    cell.corners = corners;
}

constexpr int kCornerNodes[4] = {0, 2, 8, 6};
constexpr int kMidNodes[4] = {1, 5, 7, 3};

}  // namespace

double cell_area(const UpstreamCell& cell) {
    // int_{-1}^{1} x(t) y'(t) dt in closed form (odd powers vanish).
    double s = 0.0;
    for (const auto& e : cell.edges) s += (2.0 / 3.0) * (e.x2 * e.y1 + 2.0 * e.x1 * e.y2) + 2.0 * e.x0 * e.y1;
    return s;
}

UpstreamCell build_quad(const std::array<Point, 4>& corners, double reference_area, double area_tol,
                        std::ptrdiff_t owner) {
    UpstreamCell cell;
    cell.kind = UpstreamMode::Quad;
    cell.owner = owner;
    cell.corners = corners;
    for (int i = 0; i < 4; ++i) cell.edges[i] = EdgeCurve::straight(corners[i], corners[(i + 1) % 4]);
    const double area = polygon_area(corners);
    if (std::abs(area) <= area_tol * reference_area) throw DegenerateCell("collapsed upstream cell", owner);
    if (self_intersecting(corners)) throw DegenerateCell("self-intersecting upstream cell", owner);
    if (area < 0) orient_ccw(cell);
    for (int i = 0; i < 4; ++i) cell.points[kCornerNodes[i]] = corners[i];
    return cell;
}

UpstreamCell build_quad_curved(const std::array<Point, 9>& points, double reference_area, double area_tol,
                               double snap_tol, std::ptrdiff_t owner) {
    UpstreamCell cell;
    cell.kind = UpstreamMode::QuadCurved;
    cell.owner = owner;
    cell.points = points;
    for (int i = 0; i < 4; ++i) cell.corners[i] = points[kCornerNodes[i]];
    try {
        for (int i = 0; i < 4; ++i) {
            const ParabolicEdge pe(points[kCornerNodes[i]], points[kMidNodes[i]], points[kCornerNodes[(i + 1) % 4]],
                                   snap_tol);
            cell.edges[i] = pe.curve();
        }
    } catch (const DegenerateEdge& e) {
        throw DegenerateEdge("upstream edge with coincident endpoints", owner);
    } catch (const DegenerateCell& e) {
        throw DegenerateCell("upstream edge midpoint projects onto an endpoint", owner);
    }
    const double area = cell_area(cell);
    if (std::abs(area) <= area_tol * reference_area) throw DegenerateCell("collapsed upstream cell", owner);
    if (self_intersecting(cell.corners)) throw DegenerateCell("self-intersecting upstream cell", owner);
    if (area < 0) orient_ccw(cell);
    return cell;
}

int roots_in_interval(double q2, double q1, double q0, double out[2], double tol) {
    const double lo = -1.0 + tol;
    const double hi = 1.0 - tol;
    int n = 0;
    auto keep = [&](double t) {
        if (t > lo && t < hi) out[n++] = t;
    };
    if (q2 == 0.0 || std::abs(q2) <= 1e-14 * std::abs(q1)) {
        if (q1 != 0.0) keep(-q0 / q1);
        return n;
    }
    const double disc = q1 * q1 - 4.0 * q2 * q0;
    if (disc < 0.0) return 0;
    if (disc == 0.0) {
        keep(-q1 / (2.0 * q2));
        return n;
    }
    const double q = -0.5 * (q1 + std::copysign(std::sqrt(disc), q1));
    double r1 = q / q2;
    double r2 = q0 / q;
    if (r1 > r2) std::swap(r1, r2);
    keep(r1);
    keep(r2);
    return n;
}

int grid_column(const Mesh2D& mesh, double x) {
    int i = mesh.column_of(x);
    while (x < mesh.x_line(i)) --i;
    while (!(x < mesh.x_line(i + 1))) ++i;
    return i;
}

int grid_row(const Mesh2D& mesh, double y) {
    int j = mesh.row_of(y);
    while (y < mesh.y_line(j)) --j;
    while (!(y < mesh.y_line(j + 1))) ++j;
    return j;
}

namespace {

struct Cut {
    double t;
    Segment::Axis axis;
    int line;
};

struct Crossing {
    double pos;
    int sign;
};

void edge_range(const EdgeCurve& e, double& xmin, double& xmax, double& ymin, double& ymax) {
    auto take = [&](Point p) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    };
    take(e.from);
    take(e.to);
    if (e.x2 != 0.0) {
        const double t = -e.x1 / (2.0 * e.x2);
        if (t > -1.0 && t < 1.0) take(e.at(t));
    }
    if (e.y2 != 0.0) {
        const double t = -e.y1 / (2.0 * e.y2);
        if (t > -1.0 && t < 1.0) take(e.at(t));
    }
}

double coord(Point p, Segment::Axis axis) { return axis == Segment::Axis::Vertical ? p.x : p.y; }
double other(Point p, Segment::Axis axis) { return axis == Segment::Axis::Vertical ? p.y : p.x; }

// Everything the segment search needs, computed once per cell.
struct Decomposition {
    int i_lo, i_hi, j_lo, j_hi;
    std::array<std::vector<Cut>, 4> cuts;
};

void find_cuts(const UpstreamCell& cell, const Mesh2D& mesh, Decomposition& dec) {
    double xmin = cell.edges[0].from.x, xmax = xmin, ymin = cell.edges[0].from.y, ymax = ymin;
    for (const auto& e : cell.edges) edge_range(e, xmin, xmax, ymin, ymax);
    dec.i_lo = grid_column(mesh, xmin);
    dec.i_hi = grid_column(mesh, xmax);
    dec.j_lo = grid_row(mesh, ymin);
    dec.j_hi = grid_row(mesh, ymax);
    double r[2];
    for (int k = 0; k < 4; ++k) {
        const auto& e = cell.edges[k];
        auto& cuts = dec.cuts[k];
        cuts.clear();
        for (int i = dec.i_lo + 1; i <= dec.i_hi; ++i) {
            const int n = roots_in_interval(e.x2, e.x1, e.x0 - mesh.x_line(i), r);
            for (int m = 0; m < n; ++m) cuts.push_back({r[m], Segment::Axis::Vertical, i});
        }
        for (int j = dec.j_lo + 1; j <= dec.j_hi; ++j) {
            const int n = roots_in_interval(e.y2, e.y1, e.y0 - mesh.y_line(j), r);
            for (int m = 0; m < n; ++m) cuts.push_back({r[m], Segment::Axis::Horizontal, j});
        }
        std::sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) { return a.t < b.t; });
    }
}

void outer_segments(const UpstreamCell& cell, const Mesh2D& mesh, const Decomposition& dec,
                    std::vector<Segment>& out) {
    for (int k = 0; k < 4; ++k) {
        const auto& e = cell.edges[k];
        double t0 = -1.0;
        const auto& cuts = dec.cuts[k];
        for (std::size_t c = 0; c <= cuts.size(); ++c) {
            const double t1 = c < cuts.size() ? cuts[c].t : 1.0;
            if (t1 > t0) {
                Segment s;
                s.kind = Segment::Kind::Outer;
                s.edge = k;
                s.t0 = t0;
                s.t1 = t1;
                const Point m = e.at(0.5 * (t0 + t1));
                s.owner_ix = grid_column(mesh, m.x);
                s.owner_iy = grid_row(mesh, m.y);
                out.push_back(s);
            }
            t0 = t1;
        }
    }
}

// Crossings of the boundary with one grid line. A boundary point is "before"
// the line when its coordinate is strictly smaller; the state is sampled at
// every vertex and inside every piece between roots, and each change of state
// is a crossing at the breakpoint separating the two samples.
void line_crossings(const UpstreamCell& cell, const Decomposition& dec, Segment::Axis axis, int line, double value,
                    std::vector<Crossing>& out) {
    out.clear();
    struct Sample {
        bool before;
        double pos;  // coordinate along the line of the breakpoint preceding this sample
    };
    Sample samples[64];
    std::vector<Sample> spill;
    int ns = 0;
    auto push = [&](Sample s) {
        if (ns < 64) {
            samples[ns++] = s;
        } else {
            spill.push_back(s);
        }
    };
    double roots[16];
    for (int k = 0; k < 4; ++k) {
        const auto& e = cell.edges[k];
        push({coord(e.from, axis) < value, other(e.from, axis)});
        int nr = 0;
        for (const auto& c : dec.cuts[k]) {
            if (c.axis == axis && c.line == line && nr < 16) roots[nr++] = c.t;
        }
        double t0 = -1.0;
        for (int r = 0; r <= nr; ++r) {
            const double t1 = r < nr ? roots[r] : 1.0;
            const Point mid = e.at(0.5 * (t0 + t1));
            const double pos = r == 0 ? other(e.from, axis) : other(e.at(t0), axis);
            push({coord(mid, axis) < value, pos});
            t0 = t1;
        }
    }
    std::vector<Sample> all(samples, samples + ns);
    all.insert(all.end(), spill.begin(), spill.end());
    const std::size_t n = all.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Sample& prev = all[(i + n - 1) % n];
        const Sample& cur = all[i];
        if (prev.before != cur.before) {
            // Vertical line: leaving the left side means the boundary moves in +x,
            // so the interior lies above. Horizontal line: entering from below
            // means the boundary moves in +y, the interior lies to the left.
            int sign = prev.before ? 1 : -1;
            if (axis == Segment::Axis::Horizontal) sign = -sign;
            out.push_back({cur.pos, sign});
        }
    }
    std::sort(out.begin(), out.end(), [](const Crossing& a, const Crossing& b) { return a.pos < b.pos; });
}

bool lies_on_edge(const UpstreamCell& cell, Segment::Axis axis, double value, double pos) {
    for (const auto& e : cell.edges) {
        const bool flat = axis == Segment::Axis::Vertical ? (e.x2 == 0.0 && e.x1 == 0.0) : (e.y2 == 0.0 && e.y1 == 0.0);
        if (!flat || coord(e.from, axis) != value || coord(e.to, axis) != value) continue;
        const double a = other(e.from, axis);
        const double b = other(e.to, axis);
        if (pos >= std::min(a, b) && pos <= std::max(a, b)) return true;
    }
    return false;
}

void inner_segments(const UpstreamCell& cell, const Mesh2D& mesh, const Decomposition& dec, Segment::Axis axis,
                    bool mark_boundary, std::vector<Segment>& out) {
    const bool vertical = axis == Segment::Axis::Vertical;
    const int lo = vertical ? dec.i_lo : dec.j_lo;
    const int hi = vertical ? dec.i_hi : dec.j_hi;
    std::vector<Crossing> crossings;
    for (int line = lo + 1; line <= hi; ++line) {
        const double value = vertical ? mesh.x_line(line) : mesh.y_line(line);
        line_crossings(cell, dec, axis, line, value, crossings);
        int w = 0;
        for (std::size_t c = 0; c + 1 < crossings.size(); ++c) {
            w += crossings[c].sign;
            const double a = crossings[c].pos;
            const double b = crossings[c + 1].pos;
            if (w == 0 || !(b > a)) continue;
            // Split at the perpendicular grid lines.
            int k = vertical ? grid_row(mesh, a) : grid_column(mesh, a);
            double s0 = a;
            while (s0 < b) {
                const double next = vertical ? mesh.y_line(k + 1) : mesh.x_line(k + 1);
                const double s1 = std::min(next, b);
                if (s1 > s0) {
                    Segment s;
                    s.kind = Segment::Kind::Inner;
                    s.axis = axis;
                    s.line = line;
                    s.s0 = s0;
                    s.s1 = s1;
                    s.winding = w;
                    const int across = vertical ? grid_row(mesh, 0.5 * (s0 + s1)) : grid_column(mesh, 0.5 * (s0 + s1));
                    if (vertical) {
                        s.before_ix = line - 1;
                        s.after_ix = line;
                        s.before_iy = s.after_iy = across;
                    } else {
                        s.before_iy = line - 1;
                        s.after_iy = line;
                        s.before_ix = s.after_ix = across;
                    }
                    if (mark_boundary) s.on_boundary = lies_on_edge(cell, axis, value, 0.5 * (s0 + s1));
                    out.push_back(s);
                }
                s0 = s1;
                ++k;
            }
        }
    }
}

}  // namespace

ClipResult clip(const UpstreamCell& cell, const Mesh2D& mesh) {
    Decomposition dec;
    find_cuts(cell, mesh, dec);
    ClipResult res;
    outer_segments(cell, mesh, dec, res.segments);
    inner_segments(cell, mesh, dec, Segment::Axis::Vertical, true, res.segments);
    inner_segments(cell, mesh, dec, Segment::Axis::Horizontal, true, res.segments);

    const auto areas = green_integral_by_cell(cell, mesh, [](int, int, double, double) { return 1.0; }, {1, 2});
    const double tol = 1e-13 * mesh.cell_area();
    for (const auto& [l, a] : areas) {
        if (a > tol) res.overlap.push_back(l);
    }
    return res;
}

void green_nodes(const UpstreamCell& cell, const Mesh2D& mesh, const GreenRule& rule, std::vector<GreenNode>& out) {
    out.clear();
    thread_local Decomposition dec;
    thread_local std::vector<Segment> segs;
    segs.clear();
    find_cuts(cell, mesh, dec);
    outer_segments(cell, mesh, dec, segs);
    inner_segments(cell, mesh, dec, Segment::Axis::Vertical, false, segs);

    const auto& ge = gauss_legendre(rule.edge_points);
    const auto& gs = gauss_legendre(rule.antiderivative_points);

    // Nodes of Q_l(x, y) dy: Gauss in s on [x_l^left, x].
    auto emit = [&](int ix, int iy, double x, double y, double wdy) {
        const double xl = mesh.x_line(ix);
        const double half = 0.5 * (x - xl);
        if (half == 0.0 || wdy == 0.0) return;
        for (int i = 0; i < gs.size(); ++i) {
            out.push_back({ix, iy, xl + half * (1.0 + gs.nodes[i]), y, wdy * half * gs.weights[i]});
        }
    };

    for (const auto& s : segs) {
        if (s.kind == Segment::Kind::Outer) {
            const auto& e = cell.edges[s.edge];
            const double mid = 0.5 * (s.t0 + s.t1);
            const double half = 0.5 * (s.t1 - s.t0);
            if (e.y2 == 0.0 && e.y1 == 0.0) continue;
            for (int g = 0; g < ge.size(); ++g) {
                const double t = mid + half * ge.nodes[g];
                const Point p = e.at(t);
                emit(s.owner_ix, s.owner_iy, p.x, p.y, e.dydt(t) * half * ge.weights[g]);
            }
        } else {
            // Only the cell to the left sees a nonzero Q on the line.
            const double x = mesh.x_line(s.line);
            const double mid = 0.5 * (s.s0 + s.s1);
            const double half = 0.5 * (s.s1 - s.s0);
            for (int g = 0; g < ge.size(); ++g) {
                emit(s.before_ix, s.before_iy, x, mid + half * ge.nodes[g], s.winding * half * ge.weights[g]);
            }
        }
    }
}

double green_integral(const UpstreamCell& cell, const Mesh2D& mesh, const CellIntegrand& p, const GreenRule& rule) {
    std::vector<GreenNode> nodes;
    green_nodes(cell, mesh, rule, nodes);
    double s = 0.0;
    for (const auto& n : nodes) s += n.w * p(n.ix, n.iy, n.x, n.y);
    return s;
}

std::vector<std::pair<std::size_t, double>> green_integral_by_cell(const UpstreamCell& cell, const Mesh2D& mesh,
                                                                   const CellIntegrand& p, const GreenRule& rule) {
    std::vector<GreenNode> nodes;
    green_nodes(cell, mesh, rule, nodes);
    std::map<std::size_t, double> acc;
    for (const auto& n : nodes) acc[mesh.index(mesh.fold_x(n.ix), mesh.fold_y(n.iy))] += n.w * p(n.ix, n.iy, n.x, n.y);
    return {acc.begin(), acc.end()};
}

}  // namespace sldg
