#pragma once
#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "gpvortex/field.hpp"
#include "gpvortex/grid.hpp"
#include "gpvortex/vortex.hpp"

namespace gpvortex {

enum class VortexFamily { single, pair, dipole, tripole };
std::string family_name(VortexFamily f);
VortexFamily family_from_name(const std::string& name);

/** Closed-form scenario parameters: family, placement x0, interaction beta. */
struct VortexConfig {
    VortexFamily family = VortexFamily::single;
    double x0 = 1.0;
    double beta = 0.0;
};

// Canonical t=0 placements: single +1 at (x0,0); pair +1 at (+-x0,0);
// dipole +1 at (x0,0), -1 at (-x0,0); tripole +1 at (+-x0,0), -1 at origin.
std::vector<VortexSpec> initial_vortices(const VortexConfig& cfg);

/** Detected/analytic vortex set at one instant; the count may vary with t. */
struct TrajectorySample {
    double t = 0.0;
    std::vector<VortexSpec> vortices;
};

/**
 * Analytic vortex wave function at a fixed time, in the form
 * psi(x,y) = prefactor * exp(-r^2 / (2 sigma^2)) * P(x,y) with P polynomial.
 * `interacting` uses the broadened-basis closed forms (valid for beta >= 0,
 * weakly interacting); `ideal` is the independently coded beta = 0 form kept
 * as a regression anchor. Zeros of psi are exactly the zeros of P.
 */
class ClosedFormField {
public:
    enum class Form { ideal, interacting };

    ClosedFormField(const VortexConfig& cfg, double t, Form form);

    std::complex<double> polynomial(double x, double y) const;
    void polynomial_jacobian(double x, double y, std::complex<double>& dPdx,
                             std::complex<double>& dPdy) const;
    std::complex<double> operator()(double x, double y) const;
    ComplexField2D sample(const GridSpec& grid) const;

    double sigma() const { return sigma_; }
    double time() const { return t_; }
    Form form() const { return form_; }
    const VortexConfig& config() const { return cfg_; }

private:
    VortexConfig cfg_;
    double t_ = 0.0;
    Form form_ = Form::interacting;
    double sigma_ = 1.0;
    std::complex<double> prefactor_{1.0, 0.0};  // global phase, Gaussian excluded
    std::complex<double> K_[4][4] = {};         // P(x,y) = sum K[a][b] x^a y^b
};

ClosedFormField interacting_field(const VortexConfig& cfg, double t);
ClosedFormField ideal_field(VortexFamily family, double x0, double t);

// --- Ideal (beta = 0) trajectories -----------------------------------------

// Single off-center vortex: circular orbit of radius x1 at unit frequency.
std::array<double, 2> ideal_single_position(double x1, double t);

// Same-charge pair: rigid rotation of both vortices at unit frequency.
std::array<std::array<double, 2>, 2> ideal_pair_positions(double x0, double t);

// Dipole: y(t) = sin(t) (x0^2 - 1)/x0 shared by both vortices, x = +-sqrt(x0^2 - y^2).
// Returns 0 vortices inside the annihilation window (x0 < 1/sqrt(2) only);
// otherwise 2, with per-instant charges read off the field's winding.
TrajectorySample ideal_dipole_sample(double x0, double t);

struct AnnihilationWindow {
    double annihilation = 0.0;   // t_a in the first period
    double reappearance = 0.0;   // pi - t_a
};
// Non-empty exactly when x0 < 1/sqrt(2).
std::optional<AnnihilationWindow> dipole_annihilation_times(double x0);

// --- Interacting trajectories ----------------------------------------------

// Precession frequency of a single off-center vortex:
// omega_p = (beta + 8 pi) / (4 sqrt(2 pi) sqrt(beta + 2 pi)); omega_p(0) = 1.
double precession_omega(double beta);

// First-order coefficient of omega_p = 1 + c beta + O(beta^2): c = -1/(8 pi).
double precession_coefficient_analytic();

std::array<double, 2> interacting_single_position(double x0, double beta, double t);

// --- Tripole event schedule (ideal, x0 = sqrt(2)) ---------------------------

struct ClosedFormEvent {
    double t = 0.0;
    std::string type;  // creation | annihilation | charge_flip | crossing
    double x = 0.0, y = 0.0;
};

/** Known event schedule of the ideal tripole at x0 = sqrt(2), period pi. */
struct TripoleSchedule {
    std::vector<ClosedFormEvent> events;
    double period = 0.0;
    int max_count = 5;
};
// Throws std::invalid_argument unless x0^2 == 2 (within 1e-9); other x0 need
// the numeric zero scan.
TripoleSchedule tripole_event_times(double x0, int periods = 1);

// --- Zero finding on closed forms -------------------------------------------

struct ZeroFindOptions {
    int scan_resolution = 512;   // coarse sign-scan cells per axis over the disc
    double disc_radius = -1.0;   // <= 0 means 4 sigma (condensate edge)
    double tolerance = 1e-12;    // Newton convergence on |P|
    int max_newton_iters = 30;
    double merge_radius = 1e-6;  // duplicates closer than this are one zero
};

struct ZeroFindResult {
    std::vector<VortexSpec> zeros;           // winding-tagged, winding != 0 only
    std::vector<std::string> diagnostics;    // dropped candidates etc.
};

ZeroFindResult field_zeros(const ClosedFormField& field, const ZeroFindOptions& opt = {});

// Convenience: interacting closed form at (cfg, t) -> winding-tagged zeros.
TrajectorySample closed_form_sample(const VortexConfig& cfg, double t,
                                    const ZeroFindOptions& opt = {});

// Winding number of the polynomial part around (x, y) on a small circle.
int polynomial_winding(const ClosedFormField& field, double x, double y, double radius);

}  // namespace gpvortex
