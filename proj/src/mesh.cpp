#include "sldg/mesh.hpp"

#include <stdexcept>

namespace sldg {

Mesh2D::Mesh2D(double x0, double x1, double y0, double y1, int nx_, int ny_)
    : x_min(x0), x_max(x1), y_min(y0), y_max(y1), nx(nx_), ny(ny_) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("Mesh2D: element counts must be positive");
    if (!(x_max > x_min) || !(y_max > y_min)) throw std::invalid_argument("Mesh2D: empty domain");
}

}  // namespace sldg
