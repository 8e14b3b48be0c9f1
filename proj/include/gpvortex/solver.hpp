#pragma once

#include <complex>
#include <functional>
#include <map>
#include <vector>

#include "gpvortex/field.hpp"
#include "gpvortex/grid.hpp"
#include "gpvortex/spectral.hpp"
#include "gpvortex/vortex.hpp"

namespace gpvortex {

/** Tunables for the split-step propagator and imaginary-time relaxation. */
struct SolverParams {
    double dt = 1e-3;               // real-time step
    double imaginary_dt = 1e-2;     // initial imaginary-time step
    double min_imaginary_dt = 1e-5; // floor when an energy increase halves the step
    double convergence_eps = 1e-10; // |dE| / (dtau * max(1,|E|)) threshold
    long max_iterations = 500000;   // imaginary-time iteration cap
};

/**
 * Cached per-grid tables for the split-step kernels: trap potential r^2/2 in
 * real space, |k|^2 in FFT order, and the kinetic multiplier exp(-lambda k^2/2)
 * memoised for the last lambda (constant step sizes hit the cache every step).
 */
class SolverWorkspace {
public:
    explicit SolverWorkspace(const GridSpec& grid);

    const GridSpec& grid() const { return grid_; }
    SpectralWorkspace& fft() { return fft_; }
    const std::vector<double>& potential() const { return potential_; }
    const std::vector<double>& ksq() const { return ksq_; }
    const std::vector<std::complex<double>>& kinetic_factor(std::complex<double> lambda);

private:
    GridSpec grid_;
    SpectralWorkspace fft_;
    std::vector<double> potential_;
    std::vector<double> ksq_;
    std::complex<double> cached_lambda_{0.0, 0.0};
    bool has_cached_factor_ = false;
    std::vector<std::complex<double>> kfactor_;
};

/**
 * One Strang step exp(-lambda (H - shift)) to second order: half step of the
 * pointwise sub-flow (solved exactly for both real and imaginary lambda),
 * full kinetic step in Fourier space, half pointwise step. lambda = i*dt
 * gives real-time evolution, lambda = dtau the imaginary-time (gradient-flow)
 * variant. `potential_shift` is subtracted from the trap potential: a global
 * phase in real time, but in imaginary time shifting by the chemical
 * potential keeps the amplitude of a near-stationary state fixed within the
 * step, which removes the first-order bias of step-then-renormalise
 * relaxation.
 */
void step_strang(ComplexField2D& field, SolverWorkspace& ws, double beta,
                 std::complex<double> lambda, double potential_shift = 0.0);

/** Real-time step of size dt; advances field.time. */
void step_realtime(ComplexField2D& field, SolverWorkspace& ws, double beta, double dt);

/** Imaginary-time step of size dtau followed by renormalisation to unit norm. */
void step_imaginary(ComplexField2D& field, SolverWorkspace& ws, double beta, double dtau,
                    double potential_shift = 0.0);

/** Norm/energy trace sampled at every emitted frame. */
struct EvolutionLog {
    std::vector<double> times;
    std::vector<double> norms;
    std::vector<double> energies;
};

using FrameSink = std::function<void(const ComplexField2D&)>;

/**
 * Propagate in real time to t_final (relative to field.time), emitting the
 * state to `sink` at t = 0 and after every frame_interval. The step is
 * adjusted to the nearest divisor of frame_interval so frames land exactly;
 * t_final must be an integer multiple of frame_interval. Throws if the state
 * stops being finite.
 */
EvolutionLog evolve_realtime(ComplexField2D& field, SolverWorkspace& ws, double beta,
                             double t_final, double dt, double frame_interval,
                             const FrameSink& sink = {});

/** Output of an imaginary-time relaxation. */
struct StationaryStateResult {
    ComplexField2D field;
    double energy = 0.0;
    long iterations = 0;
    bool converged = false;
};

/**
 * Ground state by normalised imaginary-time propagation from a unit Gaussian.
 * The step is halved whenever the energy rises; convergence is declared when
 * |dE| per unit imaginary time, relative to max(1,|E|), drops below eps.
 */
StationaryStateResult ground_state(const GridSpec& grid, double beta, const SolverParams& params);

/**
 * Central vortex state of winding `charge`: imaginary time with the phase
 * re-imposed as charge * theta after every step (modulus relaxes freely).
 */
StationaryStateResult central_vortex_state(const GridSpec& grid, double beta, int charge,
                                           const SolverParams& params);

/**
 * Azimuthally averaged amplitude ratio |psi_vortex| / |psi_ground| tabulated
 * as (radius, value) knots; evaluation interpolates linearly and clamps at
 * both ends. Used as the core-shape factor when imprinting vortices off-centre.
 */
struct RadialProfile {
    std::vector<double> radius;  // strictly increasing, starts at 0 on our grids
    std::vector<double> value;

    double operator()(double r) const;
};

RadialProfile vortex_amplitude_ratio(const ComplexField2D& vortex_state,
                                     const ComplexField2D& ground);

/**
 * Ground state multiplied, for every requested vortex, by the radial core
 * factor for its |charge| and the phase winding exp(i q theta) about its
 * centre; the result is normalised. `profiles` must contain every |charge|,
 * and every position must lie within 0.45 * extent of the trap centre (the
 * condensate density beyond that is negligible, so an imprint there would be
 * pure roundoff); violations throw std::invalid_argument.
 */
ComplexField2D imprint_vortices(const ComplexField2D& ground,
                                const std::vector<VortexSpec>& vortices,
                                const std::map<int, RadialProfile>& profiles);

}  // namespace gpvortex
