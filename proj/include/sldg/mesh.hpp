#pragma once

#include <cmath>
#include <cstddef>
#include <utility>

namespace sldg {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Point a, Point b) = default;
};

/// Uniform, doubly periodic Cartesian mesh. Element (ix, iy) is
/// [x_min + ix*dx, x_min + (ix+1)*dx] x [y_min + iy*dy, ...] and is stored at
/// linear index iy*nx + ix (row-major in y).
struct Mesh2D {
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;
    int nx = 1;
    int ny = 1;

    Mesh2D() = default;
    Mesh2D(double x0, double x1, double y0, double y1, int nx_, int ny_);

    [[nodiscard]] double dx() const { return (x_max - x_min) / nx; }
    [[nodiscard]] double dy() const { return (y_max - y_min) / ny; }
    [[nodiscard]] double lx() const { return x_max - x_min; }
    [[nodiscard]] double ly() const { return y_max - y_min; }
    [[nodiscard]] double area() const { return lx() * ly(); }
    [[nodiscard]] double cell_area() const { return dx() * dy(); }
    [[nodiscard]] std::size_t num_cells() const { return static_cast<std::size_t>(nx) * ny; }

    [[nodiscard]] std::size_t index(int ix, int iy) const {
        return static_cast<std::size_t>(iy) * nx + ix;
    }
    [[nodiscard]] std::pair<int, int> cell_of(std::size_t e) const {
        return {static_cast<int>(e % nx), static_cast<int>(e / nx)};
    }

    /// Grid-line coordinates in unwrapped space (any integer i).
    [[nodiscard]] double x_line(int i) const { return x_min + i * dx(); }
    [[nodiscard]] double y_line(int j) const { return y_min + j * dy(); }
    [[nodiscard]] double x_center(int ix) const { return x_min + (ix + 0.5) * dx(); }
    [[nodiscard]] double y_center(int iy) const { return y_min + (iy + 0.5) * dy(); }

    /// Unwrapped cell column / row containing a coordinate (floor convention:
    /// points on a grid line belong to the cell on their right / top).
    [[nodiscard]] int column_of(double x) const {
        return static_cast<int>(std::floor((x - x_min) / dx()));
    }
    [[nodiscard]] int row_of(double y) const {
        return static_cast<int>(std::floor((y - y_min) / dy()));
    }

    [[nodiscard]] int fold_x(int ix) const { return ((ix % nx) + nx) % nx; }
    [[nodiscard]] int fold_y(int iy) const { return ((iy % ny) + ny) % ny; }

    friend bool operator==(const Mesh2D&, const Mesh2D&) = default;
};

}  // namespace sldg
