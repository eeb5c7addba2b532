#include "sldg/dg_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sldg/error.hpp"
#include "sldg/quadrature.hpp"
#include "locate.hpp"

namespace sldg {

namespace {

int default_quad(int k, int requested, int minimum) {
    return requested > 0 ? requested : std::max(minimum, k + 3);
}

}  // namespace

DGField::DGField(const Mesh2D& mesh, int degree)
    : mesh_(mesh), degree_(degree), coeffs_(mesh.num_cells() * basis_dim(degree), 0.0) {
    if (degree < 1 || degree > 2) throw std::invalid_argument("DGField: degree must be 1 or 2");
}

double DGField::local_value(std::size_t e, double xi, double eta) const {
    double b[kMaxMonomials];
    basis_values(degree_, xi, eta, b);
    const auto c = cell(e);
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) s += c[i] * b[i];
    return s;
}

double DGField::value(double x, double y, Side side) const {
    const auto lx = detail::locate(x, mesh_.x_min, mesh_.lx(), mesh_.dx(), mesh_.nx, side);
    const auto ly = detail::locate(y, mesh_.y_min, mesh_.ly(), mesh_.dy(), mesh_.ny, side);
    double sum = 0.0;
    for (int a = 0; a < lx.count; ++a) {
        for (int b = 0; b < ly.count; ++b) {
            sum += local_value(mesh_.index(lx.cells[a], ly.cells[b]), lx.local[a], ly.local[b]);
        }
    }
    return sum / (lx.count * ly.count);
}

DGField& DGField::operator+=(const DGField& other) {
    if (!(other.mesh_ == mesh_) || other.degree_ != degree_) throw MeshMismatch("DGField +=: incompatible fields");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

DGField& DGField::operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

DGField project_l2(const ScalarFunction& f, const Mesh2D& mesh, int k, int quad_points) {
    DGField out(mesh, k);
    const auto q = QuadratureRule::tensor(quad_points > 0 ? quad_points : k + 2);
    const int n = out.dim();
    double b[kMaxMonomials];
    for (int iy = 0; iy < mesh.ny; ++iy) {
        for (int ix = 0; ix < mesh.nx; ++ix) {
            auto c = out.cell(mesh.index(ix, iy));
            const double xc = mesh.x_center(ix);
            const double yc = mesh.y_center(iy);
            for (std::size_t g = 0; g < q.size(); ++g) {
                const double v = f(xc + q.xi[g] * mesh.dx(), yc + q.eta[g] * mesh.dy());
                basis_values(k, q.xi[g], q.eta[g], b);
                for (int i = 0; i < n; ++i) c[i] += q.weights[g] * v * b[i];
            }
            for (int i = 0; i < n; ++i) c[i] /= kBasisNorms[i];
        }
    }
    return out;
}

DGField project_l2(const DGField& source, int k) {
    if (k == source.degree()) return source;
    DGField out(source.mesh(), k);
    const int n = std::min(out.dim(), source.dim());
    for (std::size_t e = 0; e < source.num_cells(); ++e) {
        for (int i = 0; i < n; ++i) out.cell(e)[i] = source.cell(e)[i];
    }
    return out;
}

namespace {

template <class Ref>
double norm_impl(const DGField& field, Ref&& ref, Norm p, int quad_points) {
    const auto& mesh = field.mesh();
    const auto q = QuadratureRule::tensor(default_quad(field.degree(), quad_points, 3));
    double acc = 0.0;
    for (int iy = 0; iy < mesh.ny; ++iy) {
        for (int ix = 0; ix < mesh.nx; ++ix) {
            const auto e = mesh.index(ix, iy);
            for (std::size_t g = 0; g < q.size(); ++g) {
                const double d = std::abs(field.local_value(e, q.xi[g], q.eta[g]) - ref(e, ix, iy, q.xi[g], q.eta[g]));
                switch (p) {
                    case Norm::L1: acc += q.weights[g] * d; break;
                    case Norm::L2: acc += q.weights[g] * d * d; break;
                    case Norm::Linf: acc = std::max(acc, d); break;
                }
            }
        }
    }
    switch (p) {
        case Norm::L1: return acc * mesh.cell_area();
        case Norm::L2: return std::sqrt(acc * mesh.cell_area());
        case Norm::Linf: return acc;
    }
    return acc;
}

}  // namespace

double error_norm(const DGField& field, const ScalarFunction& reference, Norm p, int quad_points) {
    const auto& mesh = field.mesh();
    return norm_impl(
        field,
        [&](std::size_t, int ix, int iy, double xi, double eta) {
            return reference(mesh.x_center(ix) + xi * mesh.dx(), mesh.y_center(iy) + eta * mesh.dy());
        },
        p, quad_points);
}

double error_norm(const DGField& field, const DGField& reference, Norm p, int quad_points) {
    if (!(field.mesh() == reference.mesh())) throw MeshMismatch("error_norm: fields on different meshes");
    const int qp = quad_points > 0 ? quad_points : std::max(field.degree(), reference.degree()) + 3;
    return norm_impl(
        field, [&](std::size_t e, int, int, double xi, double eta) { return reference.local_value(e, xi, eta); }, p,
        qp);
}

double total_mass(const DGField& field) {
    double s = 0.0;
    for (std::size_t e = 0; e < field.num_cells(); ++e) s += field.average(e);
    return s * field.mesh().cell_area();
}

DGField reflect_y(const DGField& field) {
    const auto& mesh = field.mesh();
    DGField out(mesh, field.degree());
    // Basis functions odd in eta: eta (2) and xi*eta (4).
    for (int iy = 0; iy < mesh.ny; ++iy) {
        for (int ix = 0; ix < mesh.nx; ++ix) {
            const auto src = field.cell(mesh.index(ix, iy));
            auto dst = out.cell(mesh.index(ix, mesh.ny - 1 - iy));
            for (int i = 0; i < field.dim(); ++i) dst[i] = (i == 2 || i == 4) ? -src[i] : src[i];
        }
    }
    return out;
}

namespace {

void put_number(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

}  // namespace

void write_dump(std::ostream& out, const DGField& field) {
    const auto& m = field.mesh();
    out << "# sldg dgfield v1\n";
    put_number(out, m.x_min);
    out << ' ';
    put_number(out, m.x_max);
    out << ' ';
    put_number(out, m.y_min);
    out << ' ';
    put_number(out, m.y_max);
    out << '\n' << m.nx << ' ' << m.ny << ' ' << field.degree() << '\n';
    for (std::size_t e = 0; e < field.num_cells(); ++e) {
        const auto c = field.cell(e);
        for (int i = 0; i < field.dim(); ++i) {
            if (i) out << ' ';
            put_number(out, c[i]);
        }
        out << '\n';
    }
}

DGField read_dump(std::istream& in) {
    std::string header;
    std::getline(in, header);
    if (header != "# sldg dgfield v1") throw Error("read_dump: bad header");
    double x0, x1, y0, y1;
    int nx, ny, k;
    if (!(in >> x0 >> x1 >> y0 >> y1 >> nx >> ny >> k)) throw Error("read_dump: truncated header");
    DGField f(Mesh2D(x0, x1, y0, y1, nx, ny), k);
    for (auto& c : f.coeffs()) {
        if (!(in >> c)) throw Error("read_dump: truncated coefficient data");
    }
    return f;
}

}  // namespace sldg
