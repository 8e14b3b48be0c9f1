#include "gpvortex/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gpvortex/basis.hpp"

namespace gpvortex {

namespace {
constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;
cplx expi(double phase) { return std::exp(cplx(0.0, phase)); }
}  // namespace

std::string family_name(VortexFamily f) {
    switch (f) {
        case VortexFamily::single: return "single";
        case VortexFamily::pair: return "pair";
        case VortexFamily::dipole: return "dipole";
        case VortexFamily::tripole: return "tripole";
    }
    throw std::logic_error("family_name: bad enum");
}

VortexFamily family_from_name(const std::string& name) {
    if (name == "single") return VortexFamily::single;
    if (name == "pair") return VortexFamily::pair;
    if (name == "dipole") return VortexFamily::dipole;
    if (name == "tripole") return VortexFamily::tripole;
    throw std::invalid_argument("unknown vortex family: " + name);
}

std::vector<VortexSpec> initial_vortices(const VortexConfig& cfg) {
    switch (cfg.family) {
        case VortexFamily::single: return {{cfg.x0, 0.0, +1}};
        case VortexFamily::pair: return {{cfg.x0, 0.0, +1}, {-cfg.x0, 0.0, +1}};
        case VortexFamily::dipole: return {{cfg.x0, 0.0, +1}, {-cfg.x0, 0.0, -1}};
        case VortexFamily::tripole:
            return {{cfg.x0, 0.0, +1}, {-cfg.x0, 0.0, +1}, {0.0, 0.0, -1}};
    }
    throw std::logic_error("initial_vortices: bad enum");
}

/*
 * The closed forms are stored as a cubic coefficient matrix K[a][b] for
 * P(x,y) = sum K[a][b] x^a y^b (all four families have degree <= 3), plus the
 * Gaussian width and a global phase factor. The per-family expressions below
 * are transcribed term by term; everything downstream (evaluation, Newton,
 * winding) is generic in K.
 */
struct ClosedFormCoeffs {
    cplx K[4][4] = {};
};

namespace {

// Per-family time-dependent coefficients of the interacting closed forms.
// Phase arguments are written exactly as in the broadened-mode derivation:
// u = sqrt(2 pi) sqrt(beta + 2 pi), sigma^2 = sqrt((beta + 2 pi)/(2 pi)).
void build_interacting(const VortexConfig& cfg, double t, double sigma, cplx& prefactor,
                       ClosedFormCoeffs& cc) {
    const double beta = cfg.beta;
    const double x0 = cfg.x0;
    const double u = std::sqrt(2.0 * kPi) * std::sqrt(beta + 2.0 * kPi);
    const double s2 = sigma * sigma;
    const cplx i(0.0, 1.0);
    auto& K = cc.K;
    switch (cfg.family) {
        case VortexFamily::single: {
            prefactor = expi(-(7.0 * beta + 16.0 * kPi) * t / (4.0 * u));
            const cplx c1 = expi((beta + 8.0 * kPi) * t / (4.0 * u));
            K[1][0] = 1.0;
            K[0][1] = i;
            K[0][0] = -c1 * x0;
            break;
        }
        case VortexFamily::pair: {
            prefactor = expi(-(137.0 * beta + 384.0 * kPi) * t / (64.0 * u));
            const cplx c1 = expi(5.0 * beta * t / (64.0 * u));
            const cplx c2 = expi((41.0 * beta + 256.0 * kPi) * t / (64.0 * u));
            K[2][0] = 1.0;
            K[0][2] = -1.0;
            K[1][1] = 2.0 * i * c1;
            K[0][0] = -c2 * x0 * x0;
            break;
        }
        case VortexFamily::dipole: {
            prefactor = expi(-3.0 * (115.0 * beta + 256.0 * kPi) * t / (64.0 * u));
            const cplx c1 = expi((233.0 * beta + 512.0 * kPi) * t / (64.0 * u));
            const cplx c2 = expi((249.0 * beta + 640.0 * kPi) * t / (64.0 * u));
            const cplx c3 = expi((13.0 * beta + 24.0 * kPi) * t / (4.0 * u));
            K[0][1] = 2.0 * i * c1 * x0;
            K[0][0] = c2 * (s2 - x0 * x0) - c3 * s2;
            K[2][0] = c3;
            K[0][2] = c3;
            break;
        }
        case VortexFamily::tripole: {
            // Global phase also absorbs the 20 i sqrt(2 pi) t sigma^2 / sqrt(beta+2 pi)
            // piece of the exponent: combined -(871 beta + 2560 pi) t / (128 u).
            prefactor = expi(-(871.0 * beta + 2560.0 * kPi) * t / (128.0 * u));
            const cplx c1 = expi(3.0 * (369.0 * beta + 1024.0 * kPi) * t / (256.0 * u));
            const cplx c2 = expi(3.0 * (361.0 * beta + 1024.0 * kPi) * t / (256.0 * u));
            const cplx c3 = expi((647.0 * beta + 2048.0 * kPi) * t / (128.0 * u));
            // c1 (s2 (x+iy) - 2 i x^2 y - 2 x y^2) + c2 (3 s2 (x+iy) - 2 x^3 - 2 i y^3)
            // - 2 c3 (2 s2 (x+iy) - (x-iy) x0^2)
            const double x02 = x0 * x0;
            K[1][0] = c1 * s2 + 3.0 * c2 * s2 - 4.0 * c3 * s2 + 2.0 * c3 * x02;
            K[0][1] = i * (c1 * s2 + 3.0 * c2 * s2 - 4.0 * c3 * s2) - 2.0 * i * c3 * x02;
            K[2][1] = -2.0 * i * c1;
            K[1][2] = -2.0 * c1;
            K[3][0] = -2.0 * c2;
            K[0][3] = -2.0 * i * c2;
            break;
        }
    }
}

// Independently coded beta = 0 forms (oscillator modes carry integer phases).
void build_ideal(const VortexConfig& cfg, double t, cplx& prefactor, ClosedFormCoeffs& cc) {
    const double x0 = cfg.x0;
    const cplx i(0.0, 1.0);
    auto& K = cc.K;
    switch (cfg.family) {
        case VortexFamily::single: {
            prefactor = expi(-2.0 * t);
            K[1][0] = 1.0;
            K[0][1] = i;
            K[0][0] = -expi(t) * x0;
            break;
        }
        case VortexFamily::pair: {
            prefactor = expi(-3.0 * t);
            K[2][0] = 1.0;
            K[0][2] = -1.0;
            K[1][1] = 2.0 * i;
            K[0][0] = -expi(2.0 * t) * x0 * x0;
            break;
        }
        case VortexFamily::dipole: {
            // Mode energies 3, 1, 2 of (r^2 - 1), const, y respectively.
            prefactor = 1.0;
            const cplx e3 = expi(-3.0 * t), e1 = expi(-t), e2 = expi(-2.0 * t);
            K[2][0] = e3;
            K[0][2] = e3;
            K[0][0] = -e3 + e1 * (1.0 - x0 * x0);
            K[0][1] = 2.0 * i * e2 * x0;
            break;
        }
        case VortexFamily::tripole: {
            prefactor = expi(-4.0 * t);
            const cplx e2 = expi(2.0 * t);
            K[3][0] = 1.0;
            K[2][1] = i;
            K[1][2] = 1.0;
            K[1][0] = -e2 * (x0 * x0 - 2.0) - 2.0;
            K[0][3] = i;
            K[0][1] = i * (e2 * (x0 * x0 + 2.0) - 2.0);
            break;
        }
    }
}

// Shared coefficient storage keyed by the field object. The ClosedFormField
// itself only keeps the scalars; K lives here to keep the header light.
ClosedFormCoeffs build_coeffs(const VortexConfig& cfg, double t, ClosedFormField::Form form,
                              double sigma, cplx& prefactor) {
    ClosedFormCoeffs cc;
    if (form == ClosedFormField::Form::interacting)
        build_interacting(cfg, t, sigma, prefactor, cc);
    else
        build_ideal(cfg, t, prefactor, cc);
    return cc;
}

}  // namespace

ClosedFormField::ClosedFormField(const VortexConfig& cfg, double t, Form form)
    : cfg_(cfg), t_(t), form_(form) {
    if (!(cfg.x0 > 0.0)) throw std::invalid_argument("ClosedFormField: x0 must be positive");
    if (form == Form::ideal) {
        if (cfg.beta != 0.0)
            throw std::invalid_argument("ClosedFormField: ideal form requires beta = 0");
        sigma_ = 1.0;
    } else {
        sigma_ = sigma_broadening(cfg.beta);
    }
    const ClosedFormCoeffs cc = build_coeffs(cfg_, t_, form_, sigma_, prefactor_);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) K_[a][b] = cc.K[a][b];
}

std::complex<double> ClosedFormField::polynomial(double x, double y) const {
    cplx R[4];
    for (int a = 0; a < 4; ++a)
        R[a] = K_[a][0] + y * (K_[a][1] + y * (K_[a][2] + y * K_[a][3]));
    return R[0] + x * (R[1] + x * (R[2] + x * R[3]));
}

void ClosedFormField::polynomial_jacobian(double x, double y, std::complex<double>& dPdx,
                                          std::complex<double>& dPdy) const {
    cplx R[4], S[4];
    for (int a = 0; a < 4; ++a) {
        R[a] = K_[a][0] + y * (K_[a][1] + y * (K_[a][2] + y * K_[a][3]));
        S[a] = K_[a][1] + y * (2.0 * K_[a][2] + 3.0 * y * K_[a][3]);
    }
    dPdx = R[1] + x * (2.0 * R[2] + 3.0 * x * R[3]);
    dPdy = S[0] + x * (S[1] + x * (S[2] + x * S[3]));
}

std::complex<double> ClosedFormField::operator()(double x, double y) const {
    const double r2 = x * x + y * y;
    return prefactor_ * std::exp(-r2 / (2.0 * sigma_ * sigma_)) * polynomial(x, y);
}

ComplexField2D ClosedFormField::sample(const GridSpec& grid) const {
    ComplexField2D f(grid, t_);
    for (int ix = 0; ix < grid.points; ++ix) {
        const double x = grid.coord(ix);
        for (int iy = 0; iy < grid.points; ++iy)
            f.values[grid.index(ix, iy)] = (*this)(x, grid.coord(iy));
    }
    return f;
}

ClosedFormField interacting_field(const VortexConfig& cfg, double t) {
    return ClosedFormField(cfg, t, ClosedFormField::Form::interacting);
}

ClosedFormField ideal_field(VortexFamily family, double x0, double t) {
    return ClosedFormField(VortexConfig{family, x0, 0.0}, t, ClosedFormField::Form::ideal);
}

std::array<double, 2> ideal_single_position(double x1, double t) {
    return {x1 * std::cos(t), x1 * std::sin(t)};
}

std::array<std::array<double, 2>, 2> ideal_pair_positions(double x0, double t) {
    return {{{x0 * std::cos(t), x0 * std::sin(t)}, {-x0 * std::cos(t), -x0 * std::sin(t)}}};
}

std::optional<AnnihilationWindow> dipole_annihilation_times(double x0) {
    if (!(x0 > 0.0)) throw std::invalid_argument("dipole_annihilation_times: x0 must be positive");
    const double denom = 1.0 - x0 * x0;
    if (denom <= 0.0) return std::nullopt;
    const double ratio = x0 * x0 / denom;
    // The grazing separation x0 = 1/sqrt(2) has ratio exactly 1 (a single
    // touch at t = pi/2); allow a little rounding headroom so the nearest
    // representable x0 still reports that degenerate window.
    if (ratio > 1.0 + 1e-12) return std::nullopt;
    AnnihilationWindow w;
    w.annihilation = std::asin(std::min(ratio, 1.0));
    w.reappearance = kPi - w.annihilation;
    return w;
}

TrajectorySample ideal_dipole_sample(double x0, double t) {
    if (!(x0 > 0.0)) throw std::invalid_argument("ideal_dipole_sample: x0 must be positive");
    TrajectorySample s;
    s.t = t;
    const double y = std::sin(t) * (x0 * x0 - 1.0) / x0;
    if (std::abs(y) >= x0 - 1e-15) return s;  // annihilation window (x0 < 1/sqrt(2))
    const double xv = std::sqrt(x0 * x0 - y * y);
    const ClosedFormField f = ideal_field(VortexFamily::dipole, x0, t);
    const double radius = std::min(1e-3, 0.25 * 2.0 * xv);
    for (const double xs : {xv, -xv}) {
        const int w = polynomial_winding(f, xs, y, radius);
        if (w != 0) s.vortices.push_back({xs, y, w});
    }
    return s;
}

double precession_omega(double beta) {
    if (beta < 0.0) throw std::invalid_argument("precession_omega: beta must be >= 0");
    return (beta + 8.0 * kPi) / (4.0 * std::sqrt(2.0 * kPi) * std::sqrt(beta + 2.0 * kPi));
}

double precession_coefficient_analytic() { return -1.0 / (8.0 * kPi); }

std::array<double, 2> interacting_single_position(double x0, double beta, double t) {
    const double w = precession_omega(beta) * t;
    return {x0 * std::cos(w), x0 * std::sin(w)};
}

TripoleSchedule tripole_event_times(double x0, int periods) {
    if (std::abs(x0 * x0 - 2.0) > 1e-9)
        throw std::invalid_argument(
            "tripole_event_times: schedule is closed-form only at x0 = sqrt(2); "
            "use the numeric zero scan for other placements");
    if (periods < 1) throw std::invalid_argument("tripole_event_times: periods must be >= 1");
    const double r = std::sqrt(2.0);
    TripoleSchedule sched;
    sched.period = kPi;
    sched.max_count = 5;
    for (int k = 0; k < periods; ++k) {
        const double base = k * kPi;
        sched.events.push_back({base + kPi / 6.0, "creation", 0.0, 0.0});
        sched.events.push_back({base + kPi / 6.0, "charge_flip", 0.0, 0.0});
        for (const double xs : {r, -r}) {
            sched.events.push_back({base + kPi / 4.0, "crossing", xs, 0.0});
            sched.events.push_back({base + kPi / 4.0, "charge_flip", xs, 0.0});
            sched.events.push_back({base + 3.0 * kPi / 4.0, "crossing", xs, 0.0});
            sched.events.push_back({base + 3.0 * kPi / 4.0, "charge_flip", xs, 0.0});
        }
        sched.events.push_back({base + 5.0 * kPi / 6.0, "annihilation", 0.0, 0.0});
        sched.events.push_back({base + 5.0 * kPi / 6.0, "charge_flip", 0.0, 0.0});
    }
    std::stable_sort(sched.events.begin(), sched.events.end(),
                     [](const ClosedFormEvent& a, const ClosedFormEvent& b) { return a.t < b.t; });
    return sched;
}

int polynomial_winding(const ClosedFormField& field, double x, double y, double radius) {
    const int segments = 64;
    double total = 0.0;
    double prev = std::arg(field.polynomial(x + radius, y));
    for (int k = 1; k <= segments; ++k) {
        const double a = 2.0 * kPi * k / segments;
        const double cur =
            std::arg(field.polynomial(x + radius * std::cos(a), y + radius * std::sin(a)));
        double d = cur - prev;
        while (d > kPi) d -= 2.0 * kPi;
        while (d <= -kPi) d += 2.0 * kPi;
        total += d;
        prev = cur;
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

ZeroFindResult field_zeros(const ClosedFormField& field, const ZeroFindOptions& opt) {
    ZeroFindResult result;
    const double R = (opt.disc_radius > 0.0) ? opt.disc_radius : 4.0 * field.sigma();
    const int n = opt.scan_resolution;
    if (n < 16) throw std::invalid_argument("field_zeros: scan_resolution too small");
    const double step = 2.0 * R / n;

    // Coarse scan: cells where both Re P and Im P change sign among corners.
    std::vector<cplx> row_lo(n + 1), row_hi(n + 1);
    for (int j = 0; j <= n; ++j) row_lo[j] = field.polynomial(-R, -R + step * j);
    std::vector<std::array<double, 2>> candidates;
    for (int i = 0; i < n; ++i) {
        const double x_hi = -R + step * (i + 1);
        for (int j = 0; j <= n; ++j) row_hi[j] = field.polynomial(x_hi, -R + step * j);
        for (int j = 0; j < n; ++j) {
            const cplx a = row_lo[j], b = row_hi[j], c = row_hi[j + 1], d = row_lo[j + 1];
            const double re_min = std::min({a.real(), b.real(), c.real(), d.real()});
            const double re_max = std::max({a.real(), b.real(), c.real(), d.real()});
            const double im_min = std::min({a.imag(), b.imag(), c.imag(), d.imag()});
            const double im_max = std::max({a.imag(), b.imag(), c.imag(), d.imag()});
            if (re_min <= 0.0 && re_max >= 0.0 && im_min <= 0.0 && im_max >= 0.0)
                candidates.push_back({-R + step * (i + 0.5), -R + step * (j + 0.5)});
        }
        std::swap(row_lo, row_hi);
    }

    // Newton refinement with the analytic Jacobian of P.
    std::vector<std::array<double, 2>> zeros;
    for (const auto& c0 : candidates) {
        double x = c0[0], y = c0[1];
        bool ok = false;
        for (int it = 0; it < opt.max_newton_iters; ++it) {
            const cplx p = field.polynomial(x, y);
            if (std::abs(p) < opt.tolerance) {
                ok = true;
                break;
            }
            cplx px, py;
            field.polynomial_jacobian(x, y, px, py);
            const double det = px.real() * py.imag() - py.real() * px.imag();
            if (std::abs(det) < 1e-300) break;
            const double dx = (p.real() * py.imag() - py.real() * p.imag()) / det;
            const double dy = (px.real() * p.imag() - p.real() * px.imag()) / det;
            x -= dx;
            y -= dy;
            if (!std::isfinite(x) || !std::isfinite(y)) break;
        }
        if (!ok) {
            result.diagnostics.push_back("newton did not converge from cell (" +
                                         std::to_string(c0[0]) + ", " + std::to_string(c0[1]) + ")");
            continue;
        }
        if (x * x + y * y > (R + step) * (R + step)) continue;  // outside the detection disc
        bool dup = false;
        for (const auto& z : zeros)
            if (std::hypot(z[0] - x, z[1] - y) < opt.merge_radius) {
                dup = true;
                break;
            }
        if (!dup) zeros.push_back({x, y});
    }

    // Winding tag; degenerate (coincident opposite charges) zeros are dropped.
    for (std::size_t i = 0; i < zeros.size(); ++i) {
        double dmin = 1e300;
        for (std::size_t k = 0; k < zeros.size(); ++k)
            if (k != i) dmin = std::min(dmin, std::hypot(zeros[i][0] - zeros[k][0],
                                                         zeros[i][1] - zeros[k][1]));
        const double radius = std::clamp(0.25 * dmin, 0.5 * opt.merge_radius, 1e-3);
        const int w = polynomial_winding(field, zeros[i][0], zeros[i][1], radius);
        if (w == 0) {
            result.diagnostics.push_back("zero with vanishing winding at (" +
                                         std::to_string(zeros[i][0]) + ", " +
                                         std::to_string(zeros[i][1]) + ") dropped");
            continue;
        }
        result.zeros.push_back({zeros[i][0], zeros[i][1], w});
    }
    std::sort(result.zeros.begin(), result.zeros.end(), [](const VortexSpec& a, const VortexSpec& b) {
        return (a.x != b.x) ? a.x < b.x : a.y < b.y;
    });
    return result;
}

TrajectorySample closed_form_sample(const VortexConfig& cfg, double t, const ZeroFindOptions& opt) {
    TrajectorySample s;
    s.t = t;
    s.vortices = field_zeros(interacting_field(cfg, t), opt).zeros;
    return s;
}

}  // namespace gpvortex
