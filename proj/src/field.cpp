#include "gpvortex/field.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>

#include "gpvortex/spectral.hpp"

namespace gpvortex {

double norm(const ComplexField2D& f) {
    double s = 0.0;
    for (const auto& v : f.values) s += std::norm(v);
    const double h = f.grid.spacing();
    return std::sqrt(s * h * h);
}

ComplexField2D normalize(ComplexField2D f) {
    const double n = norm(f);
    if (!(n > 1e-300)) throw std::invalid_argument("normalize: field has zero norm");
    const double scale = 1.0 / n;
    for (auto& v : f.values) v *= scale;
    return f;
}

std::complex<double> inner_product(const ComplexField2D& f, const ComplexField2D& g) {
    if (!(f.grid == g.grid)) throw std::invalid_argument("inner_product: grid mismatch");
    std::complex<double> s(0.0, 0.0);
    for (std::size_t i = 0; i < f.values.size(); ++i) s += std::conj(f.values[i]) * g.values[i];
    const double h = f.grid.spacing();
    return s * (h * h);
}

double energy(const ComplexField2D& f, double beta) {
    const GridSpec& g = f.grid;
    const double h = g.spacing();
    const int M = g.points;

    // Kinetic term by Parseval: 1/2 sum k^2 |F_k|^2 h^2 / M^2 for the unnormalized DFT.
    SpectralWorkspace ws(g);
    std::vector<std::complex<double>> hat = f.values;
    ws.forward(hat);
    double kinetic = 0.0;
    for (int ix = 0; ix < M; ++ix) {
        const double kx = g.wavenumber(ix);
        for (int iy = 0; iy < M; ++iy) {
            const double ky = g.wavenumber(iy);
            kinetic += (kx * kx + ky * ky) * std::norm(hat[g.index(ix, iy)]);
        }
    }
    kinetic *= 0.5 * h * h / static_cast<double>(g.size());

    double potential = 0.0, interaction = 0.0;
    for (int ix = 0; ix < M; ++ix) {
        const double x = g.coord(ix);
        for (int iy = 0; iy < M; ++iy) {
            const double y = g.coord(iy);
            const double d = std::norm(f.values[g.index(ix, iy)]);
            potential += 0.5 * (x * x + y * y) * d;
            interaction += 0.5 * beta * d * d;
        }
    }
    return kinetic + (potential + interaction) * h * h;
}

double chemical_potential(const ComplexField2D& f, double beta) {
    const double h = f.grid.spacing();
    double quartic = 0.0;
    for (const auto& v : f.values) {
        const double d = std::norm(v);
        quartic += d * d;
    }
    return energy(f, beta) + 0.5 * beta * quartic * h * h;
}

CurrentDensity current_density(const ComplexField2D& f) {
    const GridSpec& g = f.grid;
    const int M = g.points;
    SpectralWorkspace ws(g);

    std::vector<std::complex<double>> hat = f.values;
    ws.forward(hat);
    std::vector<std::complex<double>> dx = hat, dy = hat;
    for (int ix = 0; ix < M; ++ix) {
        const double kx = g.wavenumber(ix);
        for (int iy = 0; iy < M; ++iy) {
            const double ky = g.wavenumber(iy);
            const std::size_t idx = g.index(ix, iy);
            dx[idx] *= std::complex<double>(0.0, kx);
            dy[idx] *= std::complex<double>(0.0, ky);
        }
    }
    ws.inverse(dx);
    ws.inverse(dy);

    CurrentDensity j;
    j.grid = g;
    j.jx.resize(g.size());
    j.jy.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::complex<double> c = std::conj(f.values[i]);
        j.jx[i] = std::imag(c * dx[i]);
        j.jy[i] = std::imag(c * dy[i]);
    }
    return j;
}

double beta_from_physical(const PhysicalParams& p) {
    if (p.atom_count < 0.0) throw std::invalid_argument("beta_from_physical: atom_count must be >= 0");
    if (!(p.scattering_length > 0.0) || !(p.trap_omega > 0.0) || !(p.trap_omega_z > 0.0) ||
        !(p.base_length > 0.0))
        throw std::invalid_argument("beta_from_physical: lengths and frequencies must be positive");
    if (p.atom_count == 0.0) return 0.0;
    if (p.trap_omega_z < 10.0 * p.trap_omega)
        std::cerr << "beta_from_physical: warning: omega_z is not >> omega; "
                     "the quasi-2D reduction may be inaccurate\n";
    return 2.0 * p.atom_count * p.scattering_length *
           std::sqrt(2.0 * std::numbers::pi * p.trap_omega_z / p.trap_omega) / p.base_length;
}

}  // namespace gpvortex
