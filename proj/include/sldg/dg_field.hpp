#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "sldg/basis.hpp"
#include "sldg/mesh.hpp"

namespace sldg {

using ScalarFunction = std::function<double(double, double)>;

/// Which one-sided limit to take when a point sits on an element interface.
enum class Side { Lower, Upper, Average };

/// Piecewise polynomial of total degree k on a Mesh2D, stored as modal
/// coefficients in the scaled Legendre basis (see basis.hpp), element by
/// element in mesh index order.
class DGField {
public:
    DGField() = default;
    DGField(const Mesh2D& mesh, int degree);

    [[nodiscard]] const Mesh2D& mesh() const { return mesh_; }
    [[nodiscard]] int degree() const { return degree_; }
    [[nodiscard]] int dim() const { return basis_dim(degree_); }
    [[nodiscard]] std::size_t num_cells() const { return mesh_.num_cells(); }

    [[nodiscard]] std::span<double> cell(std::size_t e) {
        return {coeffs_.data() + e * dim(), static_cast<std::size_t>(dim())};
    }
    [[nodiscard]] std::span<const double> cell(std::size_t e) const {
        return {coeffs_.data() + e * dim(), static_cast<std::size_t>(dim())};
    }
    [[nodiscard]] std::vector<double>& coeffs() { return coeffs_; }
    [[nodiscard]] const std::vector<double>& coeffs() const { return coeffs_; }

    [[nodiscard]] double average(std::size_t e) const { return coeffs_[e * dim()]; }

    /// Value of element e's polynomial at local coordinates in [-1/2, 1/2]^2.
    [[nodiscard]] double local_value(std::size_t e, double xi, double eta) const;

    /// Value at a physical point, wrapped periodically into the domain.
    [[nodiscard]] double value(double x, double y, Side side = Side::Upper) const;

    DGField& operator+=(const DGField& other);
    DGField& operator*=(double s);

    friend bool operator==(const DGField&, const DGField&) = default;

private:
    Mesh2D mesh_;
    int degree_ = 1;
    std::vector<double> coeffs_;
};

/// L2 projection onto the DG space with a tensor Gauss rule of
/// `quad_points` per direction (default k + 2).
DGField project_l2(const ScalarFunction& f, const Mesh2D& mesh, int k, int quad_points = 0);

/// Projection of a DG field (possibly of different degree on the same mesh)
/// onto degree k.
DGField project_l2(const DGField& source, int k);

enum class Norm { L1, L2, Linf };

/// Norm of field - reference over the domain, by tensor Gauss quadrature with
/// at least k + 3 points per direction (L-infinity: max over the nodes).
double error_norm(const DGField& field, const ScalarFunction& reference, Norm p, int quad_points = 0);
double error_norm(const DGField& field, const DGField& reference, Norm p, int quad_points = 0);

/// Integral of the field over the domain (sum of averages times cell area).
double total_mass(const DGField& field);

/// Mirror in y about the middle of the domain: f(x, y) -> f(x, y_min + y_max - y).
DGField reflect_y(const DGField& field);

/// Plain-text dump: magic line, bounds, counts/degree, then one line of
/// modal coefficients per element (%.17g).
void write_dump(std::ostream& out, const DGField& field);
DGField read_dump(std::istream& in);

}  // namespace sldg
