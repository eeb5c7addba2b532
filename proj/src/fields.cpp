#include "sldg/fields.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <iostream>
#include <numbers>

#include "locate.hpp"
#include "sldg/basis.hpp"
#include "sldg/error.hpp"
#include "sldg/quadrature.hpp"

namespace sldg {

FrozenField::FrozenField(const Mesh2D& mesh, int degree)
    : mesh_(mesh), degree_(degree), nm_(num_monomials(degree)), px_(mesh.num_cells() * nm_, 0.0),
      py_(mesh.num_cells() * nm_, 0.0) {
    if (degree < 0 || degree > kMaxPolyDegree) throw std::invalid_argument("FrozenField: degree out of range");
}

FrozenField FrozenField::zero(const Mesh2D& mesh) { return FrozenField(mesh, 0); }

FrozenField FrozenField::constant(const Mesh2D& mesh, double vx, double vy) {
    FrozenField f(mesh, 0);
    f.drift = {vx, vy};
    return f;
}

FrozenField FrozenField::analytic(const Mesh2D& mesh, VectorFunction fn) {
    FrozenField f(mesh, 0);
    f.analytic_.emplace_back(1.0, std::move(fn));
    return f;
}

Point FrozenField::local_velocity(std::size_t e, double xi, double eta) const {
    double m[kMaxMonomials];
    monomials(degree_, xi, eta, m);
    const double* cx = px_.data() + e * nm_;
    const double* cy = py_.data() + e * nm_;
    Point v;
    for (int i = 0; i < nm_; ++i) {
        v.x += cx[i] * m[i];
        v.y += cy[i] * m[i];
    }
    return v;
}

double FrozenField::shear_profile(double y) const {
    if (shear_taper <= 0.0) return y;
    const double ly = mesh_.ly();
    const double w = (y - mesh_.y_min) - std::floor((y - mesh_.y_min) / ly) * ly;
    const double mid = 0.5 * (mesh_.y_min + mesh_.y_max);
    if (w < shear_taper) return mid + (mesh_.y_min + shear_taper - mid) * (w / shear_taper);
    if (w > ly - shear_taper) return mid + (mesh_.y_max - shear_taper - mid) * ((ly - w) / shear_taper);
    return mesh_.y_min + w;
}

Point FrozenField::velocity(double x, double y) const {
    Point v = drift;
    if (shear != 0.0) v.x += shear * shear_profile(y);
    if (!px_.empty()) {
        const auto lx = detail::locate(x, mesh_.x_min, mesh_.lx(), mesh_.dx(), mesh_.nx, Side::Average);
        const auto ly = detail::locate(y, mesh_.y_min, mesh_.ly(), mesh_.dy(), mesh_.ny, Side::Average);
        Point s;
        for (int a = 0; a < lx.count; ++a) {
            for (int b = 0; b < ly.count; ++b) {
                s = s + local_velocity(mesh_.index(lx.cells[a], ly.cells[b]), lx.local[a], ly.local[b]);
            }
        }
        v = v + (1.0 / (lx.count * ly.count)) * s;
    }
    for (const auto& [w, f] : analytic_) v = v + w * f(x, y);
    return v;
}

std::pair<double, double> FrozenField::max_speed() const {
    const int n = degree_ + 2;
    double a = 0.0, b = 0.0;
    for (int iy = 0; iy < mesh_.ny; ++iy) {
        for (int ix = 0; ix < mesh_.nx; ++ix) {
            for (int q = 0; q < n; ++q) {
                for (int p = 0; p < n; ++p) {
                    const double x = mesh_.x_line(ix) + mesh_.dx() * p / (n - 1);
                    const double y = mesh_.y_line(iy) + mesh_.dy() * q / (n - 1);
                    const Point v = velocity(x, y);
                    a = std::max(a, std::abs(v.x));
                    b = std::max(b, std::abs(v.y));
                }
            }
        }
    }
    return {a, b};
}

double FrozenField::l2_norm_squared() const {
    const auto q = QuadratureRule::tensor(degree_ + 1);
    double s = 0.0;
    for (std::size_t e = 0; e < mesh_.num_cells(); ++e) {
        for (std::size_t g = 0; g < q.size(); ++g) {
            const Point v = local_velocity(e, q.xi[g], q.eta[g]);
            s += q.weights[g] * (v.x * v.x + v.y * v.y);
        }
    }
    return s * mesh_.cell_area();
}

void FrozenField::raise_degree(int degree) {
    const int nm = num_monomials(degree);
    std::vector<double> px(mesh_.num_cells() * nm, 0.0), py(mesh_.num_cells() * nm, 0.0);
    for (std::size_t e = 0; e < mesh_.num_cells(); ++e) {
        for (int i = 0; i < nm_; ++i) {
            px[e * nm + i] = px_[e * nm_ + i];
            py[e * nm + i] = py_[e * nm_ + i];
        }
    }
    px_.swap(px);
    py_.swap(py);
    degree_ = degree;
    nm_ = nm;
}

FrozenField& FrozenField::axpy(double s, const FrozenField& other) {
    if (!(mesh_ == other.mesh_)) throw MeshMismatch("combine_frozen: fields on different meshes");
    if (other.degree_ > degree_) raise_degree(other.degree_);
    for (std::size_t e = 0; e < mesh_.num_cells(); ++e) {
        for (int i = 0; i < other.nm_; ++i) {
            px_[e * nm_ + i] += s * other.px_[e * other.nm_ + i];
            py_[e * nm_ + i] += s * other.py_[e * other.nm_ + i];
        }
    }
    shear += s * other.shear;
    shear_taper = std::max(shear_taper, other.shear_taper);
    drift = drift + s * other.drift;
    for (const auto& [w, f] : other.analytic_) analytic_.emplace_back(s * w, f);
    return *this;
}

FrozenField combine_frozen(std::span<const double> coeffs, std::span<const FrozenField* const> fields) {
    if (coeffs.size() != fields.size() || fields.empty()) throw std::invalid_argument("combine_frozen: size mismatch");
    FrozenField out(fields[0]->mesh(), 0);
    for (std::size_t i = 0; i < fields.size(); ++i) out.axpy(coeffs[i], *fields[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Vlasov-Poisson

namespace {

int wrap_cell(double x, double x_min, double L, double h, int n, double& xi) {
    double c = std::fmod(x - x_min, L);
    if (c < 0) c += L;
    int i = std::min(static_cast<int>(std::floor(c / h)), n - 1);
    xi = (c - (i + 0.5) * h) / h;
    return i;
}

}  // namespace

double ChargeDensity1D::value(double x) const {
    double xi;
    const int i = wrap_cell(x, x_min, x_max - x_min, dx(), nx, xi);
    const auto& r = coeffs[i];
    return r[0] + xi * (r[1] + xi * r[2]);
}

double ChargeDensity1D::integral() const {
    double s = 0.0;
    for (const auto& r : coeffs) s += r[0] + r[2] / 12.0;
    return s * dx();
}

ChargeDensity1D charge_density(const DGField& f) {
    const auto& m = f.mesh();
    ChargeDensity1D rho;
    rho.x_min = m.x_min;
    rho.x_max = m.x_max;
    rho.nx = m.nx;
    rho.coeffs.assign(m.nx, {0.0, 0.0, 0.0});
    const bool quadratic = f.degree() >= 2;
    for (int ix = 0; ix < m.nx; ++ix) {
        // Only the eta-even basis functions with nonzero eta-mean survive:
        // 1, xi and xi^2 - 1/12.
        double s0 = 0.0, s1 = 0.0, s3 = 0.0;
        for (int iy = 0; iy < m.ny; ++iy) {
            const auto c = f.cell(m.index(ix, iy));
            s0 += c[0];
            s1 += c[1];
            if (quadratic) s3 += c[3];
        }
        rho.coeffs[ix] = {m.dy() * (s0 - s3 / 12.0) - 1.0, m.dy() * s1, m.dy() * s3};
    }
    return rho;
}

double ElectricField1D::value(double x) const {
    double xi;
    const int i = wrap_cell(x, x_min, x_max - x_min, dx(), nx, xi);
    const auto& e = coeffs[i];
    return e[0] + xi * (e[1] + xi * (e[2] + xi * e[3]));
}

double ElectricField1D::integral() const {
    double s = 0.0;
    for (const auto& e : coeffs) s += e[0] + e[2] / 12.0;
    return s * dx();
}

double ElectricField1D::l2_norm_squared() const {
    const auto& g = gauss_legendre(4);
    double s = 0.0;
    for (const auto& e : coeffs) {
        for (int i = 0; i < g.size(); ++i) {
            const double xi = 0.5 * g.nodes[i];
            const double v = e[0] + xi * (e[1] + xi * (e[2] + xi * e[3]));
            s += 0.5 * g.weights[i] * v * v;
        }
    }
    return s * dx();
}

double ElectricField1D::max_abs() const {
    double m = 0.0;
    for (const auto& e : coeffs) {
        for (int p = 0; p <= 4; ++p) {
            const double xi = -0.5 + 0.25 * p;
            m = std::max(m, std::abs(e[0] + xi * (e[1] + xi * (e[2] + xi * e[3]))));
        }
    }
    return m;
}

ElectricField1D solve_poisson_1d(const ChargeDensity1D& rho) {
    ElectricField1D E;
    E.x_min = rho.x_min;
    E.x_max = rho.x_max;
    E.nx = rho.nx;
    E.coeffs.resize(rho.nx);
    const double h = rho.dx();
    const double mean = rho.integral() / (rho.x_max - rho.x_min);
    E.removed_mean = mean;
    // A Maxwellian cut at |v| = 2 pi already misses 3e-10 of its mass.
    if (std::abs(mean) > 1e-8) {
        static bool warned = false;
        if (!warned) {
            std::clog << "sldg: charge density has mean " << mean << "; subtracting it before the field solve\n";
            warned = true;
        }
    }
    // E(xi) = E_left + h * int_{-1/2}^{xi} rho, written in monomials of xi.
    double left = 0.0;
    double total = 0.0;
    for (int i = 0; i < rho.nx; ++i) {
        const double r0 = rho.coeffs[i][0] - mean;
        const double r1 = rho.coeffs[i][1];
        const double r2 = rho.coeffs[i][2];
        auto& e = E.coeffs[i];
        e = {left + h * (r0 / 2.0 - r1 / 8.0 + r2 / 24.0), h * r0, h * r1 / 2.0, h * r2 / 3.0};
        total += e[0] + e[2] / 12.0;
        left += h * (r0 + r2 / 12.0);
    }
    const double shift = total / rho.nx;
    for (auto& e : E.coeffs) e[0] -= shift;
    return E;
}

FrozenField vlasov_field(const ElectricField1D& E, const Mesh2D& phase_mesh) {
    if (E.nx != phase_mesh.nx) throw MeshMismatch("vlasov_field: x resolution differs from the phase-space mesh");
    FrozenField f(phase_mesh, 3);
    f.shear = 1.0;
    // The v-velocity is periodic in v, the x-velocity v is not. Near the v
    // boundary it is tapered linearly to zero over a band where f is
    // negligible, so characteristics stay continuous across the seam.
    // The taper is odd in v and depends on v only, so the flow stays
    // divergence free and time reversible. The band is a whole number of
    // cells so the kinks sit on grid lines and every cell sees a linear shear.
    f.shear_taper = std::ceil(phase_mesh.ly() / 12.0 / phase_mesh.dy() - 1e-9) * phase_mesh.dy();
    for (int iy = 0; iy < phase_mesh.ny; ++iy) {
        for (int ix = 0; ix < phase_mesh.nx; ++ix) {
            auto py = f.py(phase_mesh.index(ix, iy));
            const auto& e = E.coeffs[ix];
            py[0] = e[0];
            py[1] = e[1];
            py[3] = e[2];
            py[6] = e[3];
        }
    }
    return f;
}

FrozenField electric_field_1d(const DGField& f, ElectricField1D* field_out) {
    auto E = solve_poisson_1d(charge_density(f));
    auto out = vlasov_field(E, f.mesh());
    if (field_out) *field_out = std::move(E);
    return out;
}

// ---------------------------------------------------------------------------
// Guiding center

FrozenField electric_field_2d(const DGField& rho) {
    const auto& m = rho.mesh();
    const int k = rho.degree();
    const int q = k + 2;
    const int n1 = m.nx * q;  // x samples
    const int n2 = m.ny * q;  // y samples
    const int nh = n1 / 2 + 1;

    std::vector<double> samples(static_cast<std::size_t>(n1) * n2);
    double mean = 0.0;
    for (int iy = 0; iy < m.ny; ++iy) {
        for (int ix = 0; ix < m.nx; ++ix) {
            const auto e = m.index(ix, iy);
            for (int b = 0; b < q; ++b) {
                for (int a = 0; a < q; ++a) {
                    const double v = rho.local_value(e, -0.5 + (a + 0.5) / q, -0.5 + (b + 0.5) / q);
                    samples[static_cast<std::size_t>(iy * q + b) * n1 + ix * q + a] = v;
                    mean += v;
                }
            }
        }
    }
    mean /= static_cast<double>(samples.size());
    for (auto& v : samples) v -= mean;

    std::vector<std::complex<double>> hat(static_cast<std::size_t>(n2) * nh);
    auto* hat_ptr = reinterpret_cast<fftw_complex*>(hat.data());
    fftw_plan fwd = fftw_plan_dft_r2c_2d(n2, n1, samples.data(), hat_ptr, FFTW_ESTIMATE);
    fftw_execute(fwd);
    fftw_destroy_plan(fwd);

    const double kx0 = 2.0 * std::numbers::pi / m.lx();
    const double ky0 = 2.0 * std::numbers::pi / m.ly();
    std::vector<std::complex<double>> dx_hat(hat.size()), dy_hat(hat.size());
    const std::complex<double> I(0.0, 1.0);
    for (int j = 0; j < n2; ++j) {
        const int jj = j <= n2 / 2 ? j : j - n2;
        const double ky = ky0 * jj;
        const bool ny_nyquist = (n2 % 2 == 0) && j == n2 / 2;
        for (int i = 0; i < nh; ++i) {
            const double kx = kx0 * i;
            const bool nx_nyquist = (n1 % 2 == 0) && i == n1 / 2;
            const std::size_t idx = static_cast<std::size_t>(j) * nh + i;
            const double k2 = kx * kx + ky * ky;
            const std::complex<double> phi = k2 > 0 ? hat[idx] / k2 : 0.0;
            dx_hat[idx] = nx_nyquist ? 0.0 : I * kx * phi;
            dy_hat[idx] = ny_nyquist ? 0.0 : I * ky * phi;
        }
    }
    std::vector<double> phi_x(samples.size()), phi_y(samples.size());
    fftw_plan bx = fftw_plan_dft_c2r_2d(n2, n1, reinterpret_cast<fftw_complex*>(dx_hat.data()), phi_x.data(),
                                        FFTW_ESTIMATE);
    fftw_execute(bx);
    fftw_destroy_plan(bx);
    fftw_plan by = fftw_plan_dft_c2r_2d(n2, n1, reinterpret_cast<fftw_complex*>(dy_hat.data()), phi_y.data(),
                                        FFTW_ESTIMATE);
    fftw_execute(by);
    fftw_destroy_plan(by);
    const double scale = 1.0 / (static_cast<double>(n1) * n2);

    // Least-squares fit of degree k + 1 to the q x q samples of each element.
    const int deg = k + 1;
    const int nm = num_monomials(deg);
    Eigen::MatrixXd V(q * q, nm);
    double mono[kMaxMonomials];
    for (int b = 0; b < q; ++b) {
        for (int a = 0; a < q; ++a) {
            monomials(deg, -0.5 + (a + 0.5) / q, -0.5 + (b + 0.5) / q, mono);
            for (int c = 0; c < nm; ++c) V(b * q + a, c) = mono[c];
        }
    }
    const Eigen::MatrixXd pinv = (V.transpose() * V).ldlt().solve(V.transpose());

    FrozenField out(m, deg);
    Eigen::VectorXd ex(q * q), ey(q * q);
    for (int iy = 0; iy < m.ny; ++iy) {
        for (int ix = 0; ix < m.nx; ++ix) {
            for (int b = 0; b < q; ++b) {
                for (int a = 0; a < q; ++a) {
                    const std::size_t s = static_cast<std::size_t>(iy * q + b) * n1 + ix * q + a;
                    ex(b * q + a) = -phi_y[s] * scale;
                    ey(b * q + a) = phi_x[s] * scale;
                }
            }
            const Eigen::VectorXd cx = pinv * ex;
            const Eigen::VectorXd cy = pinv * ey;
            auto px = out.px(m.index(ix, iy));
            auto py = out.py(m.index(ix, iy));
            for (int c = 0; c < nm; ++c) {
                px[c] = cx(c);
                py[c] = cy(c);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Burgers

FrozenField burgers_field(const DGField& u) {
    const auto& m = u.mesh();
    FrozenField f(m, u.degree());
    double mono[kMaxMonomials];
    for (std::size_t e = 0; e < m.num_cells(); ++e) {
        modal_to_monomial(u.degree(), u.cell(e), mono);
        auto px = f.px(e);
        for (int i = 0; i < u.dim(); ++i) px[i] = 0.5 * mono[i];
    }
    return f;
}

}  // namespace sldg
