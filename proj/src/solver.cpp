#include "gpvortex/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gpvortex {

namespace {
using cplx = std::complex<double>;
}

SolverWorkspace::SolverWorkspace(const GridSpec& grid) : grid_(grid), fft_(grid) {
    const int M = grid_.points;
    potential_.resize(grid_.size());
    ksq_.resize(grid_.size());
    for (int ix = 0; ix < M; ++ix) {
        const double x = grid_.coord(ix);
        const double kx = grid_.wavenumber(ix);
        for (int iy = 0; iy < M; ++iy) {
            const double y = grid_.coord(iy);
            const double ky = grid_.wavenumber(iy);
            const std::size_t idx = grid_.index(ix, iy);
            potential_[idx] = 0.5 * (x * x + y * y);
            ksq_[idx] = kx * kx + ky * ky;
        }
    }
}

const std::vector<cplx>& SolverWorkspace::kinetic_factor(cplx lambda) {
    if (!has_cached_factor_ || lambda != cached_lambda_) {
        kfactor_.resize(ksq_.size());
        for (std::size_t i = 0; i < ksq_.size(); ++i)
            kfactor_[i] = std::exp(-0.5 * lambda * ksq_[i]);
        cached_lambda_ = lambda;
        has_cached_factor_ = true;
    }
    return kfactor_;
}

namespace {

// Exact solution of the pointwise sub-flow over a half step, with the
// effective potential V - shift.
//
// Real time (lambda = i dt): the modulus is invariant, so the frozen-density
// phase factor e^{-i (V - shift + beta |v|^2) dt / 2} is exact.
//
// Imaginary time (lambda = dtau): the modulus itself decays, so the density
// obeys the closed ODE rho' = -2 (V - shift + beta rho) rho, whose exact
// solution gives the amplitude factor
// 1 / sqrt(e^x + 2 beta tau phi(x) rho) with x = 2 (V - shift) tau and
// phi(x) = (e^x - 1)/x continued through x = 0.
void pointwise_half_step(std::vector<cplx>& v, const std::vector<double>& pot, double beta,
                         cplx lambda, double shift) {
    if (lambda.real() == 0.0) {
        const cplx half = -0.5 * lambda;
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] *= std::exp(half * (pot[i] - shift + beta * std::norm(v[i])));
        return;
    }
    const double tau = 0.5 * lambda.real();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = 2.0 * (pot[i] - shift) * tau;
        const double phi = std::abs(x) > 1e-8 ? std::expm1(x) / x : 1.0 + 0.5 * x;
        v[i] /= std::sqrt(std::exp(x) + 2.0 * beta * tau * phi * std::norm(v[i]));
    }
}

}  // namespace

void step_strang(ComplexField2D& field, SolverWorkspace& ws, double beta, cplx lambda,
                 double potential_shift) {
    if (!(field.grid == ws.grid())) throw std::invalid_argument("step_strang: grid mismatch");
    if (lambda.real() != 0.0 && lambda.imag() != 0.0)
        throw std::invalid_argument("step_strang: lambda must be purely real or purely imaginary");
    auto& v = field.values;
    const auto& pot = ws.potential();

    pointwise_half_step(v, pot, beta, lambda, potential_shift);

    const auto& kin = ws.kinetic_factor(lambda);
    ws.fft().forward(v);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= kin[i];
    ws.fft().inverse(v);

    pointwise_half_step(v, pot, beta, lambda, potential_shift);
}

void step_realtime(ComplexField2D& field, SolverWorkspace& ws, double beta, double dt) {
    step_strang(field, ws, beta, cplx(0.0, dt));
    field.time += dt;
}

void step_imaginary(ComplexField2D& field, SolverWorkspace& ws, double beta, double dtau,
                    double potential_shift) {
    step_strang(field, ws, beta, cplx(dtau, 0.0), potential_shift);
    const double n = norm(field);
    if (!(n > 1e-300) || !std::isfinite(n))
        throw std::runtime_error("step_imaginary: state collapsed or diverged");
    const double scale = 1.0 / n;
    for (auto& x : field.values) x *= scale;
}

EvolutionLog evolve_realtime(ComplexField2D& field, SolverWorkspace& ws, double beta,
                             double t_final, double dt, double frame_interval,
                             const FrameSink& sink) {
    if (!(dt > 0.0)) throw std::invalid_argument("evolve_realtime: dt must be positive");
    if (t_final < 0.0) throw std::invalid_argument("evolve_realtime: t_final must be >= 0");
    if (frame_interval <= 0.0) frame_interval = (t_final > 0.0) ? t_final : dt;

    const long n_frames = std::lround(t_final / frame_interval);
    if (std::abs(n_frames * frame_interval - t_final) > 1e-9 * std::max(1.0, t_final))
        throw std::invalid_argument(
            "evolve_realtime: duration must be an integer multiple of the frame interval");
    const long steps_per_frame = std::max(1L, std::lround(frame_interval / dt));
    const double dt_actual = frame_interval / static_cast<double>(steps_per_frame);

    EvolutionLog log;
    auto record = [&](const ComplexField2D& f) {
        const double n = norm(f);
        if (!std::isfinite(n))
            throw std::runtime_error("evolve_realtime: non-finite state at t = " +
                                     std::to_string(f.time));
        log.times.push_back(f.time);
        log.norms.push_back(n);
        log.energies.push_back(energy(f, beta));
    };

    record(field);
    if (sink) sink(field);
    const double t0 = field.time;
    for (long frame = 1; frame <= n_frames; ++frame) {
        for (long s = 0; s < steps_per_frame; ++s) step_realtime(field, ws, beta, dt_actual);
        field.time = t0 + frame * frame_interval;  // guard against additive drift
        record(field);
        if (sink) sink(field);
    }
    return log;
}

namespace {

// Shared imaginary-time driver; `constraint` (if set) is applied after every
// normalised step, e.g. to pin the phase winding of a central vortex.
StationaryStateResult relax_to_stationary(ComplexField2D state, double beta,
                                          const SolverParams& params,
                                          const std::function<void(ComplexField2D&)>& constraint) {
    SolverWorkspace ws(state.grid);
    double dtau = params.imaginary_dt;
    if (!(dtau > 0.0)) throw std::invalid_argument("imaginary_dt must be positive");

    const int check_interval = 10;
    // mu = E + (beta/2) int |psi|^4: the chemical potential, assembled from
    // the energy already computed at each check so the FFT is not repeated.
    auto mu_from_energy = [beta](const ComplexField2D& f, double e) {
        const double h = f.grid.spacing();
        double quartic = 0.0;
        for (const auto& v : f.values) {
            const double d = std::norm(v);
            quartic += d * d;
        }
        return e + 0.5 * beta * quartic * h * h;
    };

    double e_prev = energy(state, beta);
    // Shifting the potential by the running chemical-potential estimate keeps
    // the unnormalised amplitude fixed to first order within each step, so
    // the renormalised fixed point is second-order accurate in dtau instead
    // of first-order.
    double mu = mu_from_energy(state, e_prev);
    StationaryStateResult res{std::move(state), e_prev, 0, false};

    while (res.iterations < params.max_iterations) {
        for (int k = 0; k < check_interval; ++k) {
            step_imaginary(res.field, ws, beta, dtau, mu);
            if (constraint) constraint(res.field);
            ++res.iterations;
        }
        const double e = energy(res.field, beta);
        if (!std::isfinite(e)) throw std::runtime_error("imaginary-time relaxation diverged");
        mu = mu_from_energy(res.field, e);
        if (e > e_prev + 1e-13 * std::max(1.0, std::abs(e_prev)) &&
            dtau > params.min_imaginary_dt) {
            dtau = std::max(0.5 * dtau, params.min_imaginary_dt);
            e_prev = e;
            continue;
        }
        const double rate =
            std::abs(e - e_prev) / (check_interval * dtau * std::max(1.0, std::abs(e)));
        e_prev = e;
        if (rate < params.convergence_eps) {
            res.converged = true;
            break;
        }
    }
    res.energy = e_prev;
    return res;
}

}  // namespace

StationaryStateResult ground_state(const GridSpec& grid, double beta, const SolverParams& params) {
    if (beta < 0.0) throw std::invalid_argument("ground_state: beta must be >= 0");
    ComplexField2D init(grid);
    for (int ix = 0; ix < grid.points; ++ix) {
        const double x = grid.coord(ix);
        for (int iy = 0; iy < grid.points; ++iy) {
            const double y = grid.coord(iy);
            init.values[grid.index(ix, iy)] = std::exp(-0.5 * (x * x + y * y));
        }
    }
    return relax_to_stationary(normalize(std::move(init)), beta, params, nullptr);
}

StationaryStateResult central_vortex_state(const GridSpec& grid, double beta, int charge,
                                           const SolverParams& params) {
    if (beta < 0.0) throw std::invalid_argument("central_vortex_state: beta must be >= 0");
    if (charge == 0) return ground_state(grid, beta, params);

    std::vector<cplx> phase(grid.size());
    ComplexField2D init(grid);
    const int aq = std::abs(charge);
    for (int ix = 0; ix < grid.points; ++ix) {
        const double x = grid.coord(ix);
        for (int iy = 0; iy < grid.points; ++iy) {
            const double y = grid.coord(iy);
            const std::size_t idx = grid.index(ix, iy);
            const double theta = std::atan2(y, x);
            phase[idx] = std::exp(cplx(0.0, charge * theta));
            init.values[idx] =
                std::pow(std::hypot(x, y), aq) * std::exp(-0.5 * (x * x + y * y)) * phase[idx];
        }
    }
    auto pin_phase = [&phase](ComplexField2D& f) {
        for (std::size_t i = 0; i < f.values.size(); ++i)
            f.values[i] = std::abs(f.values[i]) * phase[i];
    };
    return relax_to_stationary(normalize(std::move(init)), beta, params, pin_phase);
}

double RadialProfile::operator()(double r) const {
    if (radius.empty()) throw std::logic_error("RadialProfile: empty profile");
    if (r <= radius.front()) return value.front();
    if (r >= radius.back()) return value.back();
    const auto it = std::upper_bound(radius.begin(), radius.end(), r);
    const std::size_t k = static_cast<std::size_t>(it - radius.begin());
    const double w = (r - radius[k - 1]) / (radius[k] - radius[k - 1]);
    return value[k - 1] * (1.0 - w) + value[k] * w;
}

RadialProfile vortex_amplitude_ratio(const ComplexField2D& vortex_state,
                                     const ComplexField2D& ground) {
    const GridSpec& g = ground.grid;
    if (!(vortex_state.grid == g))
        throw std::invalid_argument("vortex_amplitude_ratio: grid mismatch");

    double gmax = 0.0;
    for (const auto& v : ground.values) gmax = std::max(gmax, std::abs(v));
    const double floor = 1e-7 * gmax;

    const double dr = g.spacing();
    const int nbins = static_cast<int>(std::floor(g.extent / dr));
    std::vector<double> r_sum(nbins, 0.0), v_sum(nbins, 0.0);
    std::vector<long> count(nbins, 0);
    for (int ix = 0; ix < g.points; ++ix) {
        const double x = g.coord(ix);
        for (int iy = 0; iy < g.points; ++iy) {
            const double y = g.coord(iy);
            const double r = std::hypot(x, y);
            const int bin = static_cast<int>(r / dr);
            if (bin >= nbins) continue;
            const std::size_t idx = g.index(ix, iy);
            const double ga = std::abs(ground.values[idx]);
            if (ga < floor) continue;
            r_sum[bin] += r;
            v_sum[bin] += std::abs(vortex_state.values[idx]) / ga;
            ++count[bin];
        }
    }
    RadialProfile p;
    for (int k = 0; k < nbins; ++k)
        if (count[k] > 0) {
            p.radius.push_back(r_sum[k] / count[k]);
            p.value.push_back(v_sum[k] / count[k]);
        }
    if (p.radius.size() < 4)
        throw std::runtime_error("vortex_amplitude_ratio: too few usable radial samples");
    return p;
}

ComplexField2D imprint_vortices(const ComplexField2D& ground,
                                const std::vector<VortexSpec>& vortices,
                                const std::map<int, RadialProfile>& profiles) {
    const GridSpec& g = ground.grid;
    const double r_edge = 0.45 * g.extent;
    for (const auto& v : vortices) {
        if (!profiles.count(std::abs(v.charge)))
            throw std::invalid_argument("imprint_vortices: missing radial profile for |charge| = " +
                                        std::to_string(std::abs(v.charge)));
        // Near the box edge the background density is negligible, so the
        // imprinted product would be dominated by roundoff rather than a
        // physical core; treat such a request as a configuration error.
        if (std::hypot(v.x, v.y) >= r_edge)
            throw std::invalid_argument("imprint_vortices: vortex at (" + std::to_string(v.x) +
                                        ", " + std::to_string(v.y) +
                                        ") lies outside the usable radius " +
                                        std::to_string(r_edge));
    }

    ComplexField2D out = ground;
    for (int ix = 0; ix < g.points; ++ix) {
        const double x = g.coord(ix);
        for (int iy = 0; iy < g.points; ++iy) {
            const std::size_t idx = g.index(ix, iy);
            const double y = g.coord(iy);
            cplx a = out.values[idx];
            for (const auto& vx : vortices) {
                const double dx = x - vx.x, dy = y - vx.y;
                const double r = std::hypot(dx, dy);
                if (r < 1e-300) {
                    a = 0.0;
                    break;
                }
                const int aq = std::abs(vx.charge);
                const cplx unit = cplx(dx, vx.charge > 0 ? dy : -dy) / r;
                cplx winding = unit;
                for (int k = 1; k < aq; ++k) winding *= unit;
                a *= profiles.at(aq)(r) * winding;
            }
            out.values[idx] = a;
        }
    }
    return normalize(std::move(out));
}

}  // namespace gpvortex
