#pragma once
#include <complex>
#include <string>
#include <vector>

#include "gpvortex/field.hpp"
#include "gpvortex/grid.hpp"

namespace gpvortex {

// Variational width of the interaction-broadened Gaussian:
// sigma(beta) = ((beta + 2 pi) / (2 pi))^{1/4}. Requires beta >= 0.
double sigma_broadening(double beta);

// Quartic self-overlap of the 1D oscillator eigenfunction, I_n = int phi_n(u)^4 du,
// by Gauss-Hermite quadrature with enough nodes for exact polynomial integration.
double quartic_mode_integral(int n);

// Phase constant of the broadened mode (n, m):
//   mu = (n+m+1)(sigma^2 + sigma^-2)/2 + beta I_n I_m / sigma^2.
// The first part is the kinetic+potential integral reduced by the ladder
// identities; the interaction part is the exact |psi|^4 integral.
double mu_constant(int n, int m, double beta);

/** One broadened basis mode: quantum numbers, width and phase constant. */
struct BasisState {
    int n = 0, m = 0;
    double beta = 0.0;
    double sigma = 1.0;
    double mu = 1.0;
};
BasisState make_basis_state(int n, int m, double beta);

// psi_{n,m,beta}(x, y, t) on the grid: unit-normalized product of scaled
// oscillator eigenfunctions times e^{-i mu t}.
ComplexField2D mode_function(const BasisState& b, const GridSpec& grid, double t);

/**
 * Truncated expansion over modes with n, m <= max_degree. Coefficients are the
 * mode amplitudes at `time`; modes at different beta are not mutually
 * orthogonal, so a state only makes sense against its own beta.
 */
struct SpectralState {
    int max_degree = 12;
    double beta = 0.0;
    double time = 0.0;
    std::vector<std::complex<double>> coeffs;  // (max_degree+1)^2, index n*(D+1)+m
    double captured_weight = 1.0;              // |c|^2 fraction of the projected field
    bool truncated = false;                    // captured_weight < 0.999 at projection

    std::complex<double>& c(int n, int m) { return coeffs[idx(n, m)]; }
    const std::complex<double>& c(int n, int m) const { return coeffs[idx(n, m)]; }
    std::size_t idx(int n, int m) const { return static_cast<std::size_t>(n) * (max_degree + 1) + m; }
};

// Grid-quadrature projection onto the broadened basis. Sets captured_weight and
// the truncation flag (warning threshold 0.999).
SpectralState project(const ComplexField2D& f, double beta, int max_degree);

// Advance the expansion by delta_t: c <- c e^{-i mu delta_t}. delta_t = 0 is the identity.
SpectralState evolve(SpectralState s, double delta_t);

// Evaluate the expansion on a grid at the state's own time.
ComplexField2D synthesize(const SpectralState& s, const GridSpec& grid);

// JSON round-trip: {"max_degree", "beta", "time", "coefficients": [[n,m,re,im],...]}.
std::string spectral_state_to_json(const SpectralState& s);
SpectralState spectral_state_from_json(const std::string& text);
void write_spectral_state(const std::string& path, const SpectralState& s);
SpectralState read_spectral_state(const std::string& path);

}  // namespace gpvortex
