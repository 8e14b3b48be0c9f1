#pragma once
#include <complex>
#include <vector>

#include "gpvortex/grid.hpp"

namespace gpvortex {

/**
 * Complex wave function sampled on a GridSpec. Values are stored x-major:
 * values[ix * points + iy] = psi(x_ix, y_iy). `time` records the instant the
 * snapshot represents.
 */
struct ComplexField2D {
    GridSpec grid;
    double time = 0.0;
    std::vector<std::complex<double>> values;

    ComplexField2D() = default;
    explicit ComplexField2D(const GridSpec& g, double t = 0.0)
        : grid(g), time(t), values(g.size(), std::complex<double>(0.0, 0.0)) {}

    std::complex<double>& at(int ix, int iy) { return values[grid.index(ix, iy)]; }
    const std::complex<double>& at(int ix, int iy) const { return values[grid.index(ix, iy)]; }
};

/** Pair of real fields (jx, jy), same layout as ComplexField2D::values. */
struct CurrentDensity {
    GridSpec grid;
    std::vector<double> jx, jy;
};

/** Trap/atom numbers needed to reduce the physical problem to the dimensionless one. */
struct PhysicalParams {
    double atom_count = 1.0;         // N (>= 0; 0 means no interaction)
    double scattering_length = 1.0;  // a_s, in the same length unit as base_length
    double trap_omega = 1.0;         // radial trap frequency omega
    double trap_omega_z = 1.0;       // axial trap frequency omega_z
    double base_length = 1.0;        // a_0 = sqrt(hbar / (m omega))
};

// L2 norm sqrt(sum |psi|^2 h^2) under the grid quadrature.
double norm(const ComplexField2D& f);

// Rescale to unit norm; throws std::invalid_argument on (numerically) zero input.
ComplexField2D normalize(ComplexField2D f);

// Grid inner product <f, g> = sum conj(f) g h^2.
std::complex<double> inner_product(const ComplexField2D& f, const ComplexField2D& g);

// Per-particle energy functional: int 1/2|grad psi|^2 + 1/2 r^2 |psi|^2 + beta/2 |psi|^4.
// The gradient term is evaluated spectrally (Parseval), so it carries spectral accuracy.
double energy(const ComplexField2D& f, double beta);

// Chemical potential mu = int 1/2|grad psi|^2 + 1/2 r^2 |psi|^2 + beta |psi|^4,
// i.e. the energy with the interaction term counted twice; mu = E at beta = 0.
double chemical_potential(const ComplexField2D& f, double beta);

// Probability current j = Im(conj(psi) grad psi), gradient evaluated spectrally.
CurrentDensity current_density(const ComplexField2D& f);

// Dimensionless interaction strength beta = 2 N a_s sqrt(2 pi omega_z / omega) / a_0.
// Throws on nonpositive lengths/frequencies or negative N; warns (stderr) when the
// pancake assumption omega_z >> omega is not met. N = 0 is allowed and gives beta = 0.
double beta_from_physical(const PhysicalParams& p);

}  // namespace gpvortex
