#include "gpvortex/detect.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <utility>

namespace gpvortex {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

double wrap_to_pi(double d) {
    while (d > kPi) d -= 2.0 * kPi;
    while (d <= -kPi) d += 2.0 * kPi;
    return d;
}

// Zero of the bilinear interpolant psi(s,u) = A + B s + C u + D s u on the
// unit cell. Eliminating u gives a quadratic in s; u follows from whichever
// linear equation is better conditioned. Returns false if no root lies in the
// (slightly padded) cell, in which case the caller falls back to the centre.
bool bilinear_zero(cplx A, cplx B, cplx C, cplx D, double& s_out, double& u_out, double& res_out) {
    const double rA = A.real(), iA = A.imag();
    const double rB = B.real(), iB = B.imag();
    const double rC = C.real(), iC = C.imag();
    const double rD = D.real(), iD = D.imag();

    const double qa = rB * iD - iB * rD;
    const double qb = rA * iD + rB * iC - iA * rD - iB * rC;
    const double qc = rA * iC - iA * rC;

    double roots[2];
    int n_roots = 0;
    if (std::abs(qa) < 1e-14 * (std::abs(qb) + std::abs(qc))) {
        if (qb != 0.0) roots[n_roots++] = -qc / qb;
    } else {
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            // Numerically stable pair: avoid cancellation in the small root.
            const double q = -0.5 * (qb + std::copysign(sq, qb));
            roots[n_roots++] = q / qa;
            if (q != 0.0) roots[n_roots++] = qc / q;
        }
    }

    const double lo = -0.05, hi = 1.05;
    bool found = false;
    double best_res = 0.0, best_s = 0.0, best_u = 0.0;
    for (int k = 0; k < n_roots; ++k) {
        const double s = roots[k];
        if (!(s >= lo && s <= hi)) continue;
        const double dr = rC + rD * s, di = iC + iD * s;
        double u;
        if (std::abs(dr) >= std::abs(di)) {
            if (dr == 0.0) continue;
            u = -(rA + rB * s) / dr;
        } else {
            u = -(iA + iB * s) / di;
        }
        if (!(u >= lo && u <= hi)) continue;
        const double res = std::abs(A + B * s + C * u + D * s * u);
        if (!found || res < best_res) {
            found = true;
            best_res = res;
            best_s = s;
            best_u = u;
        }
    }
    if (found) {
        s_out = best_s;
        u_out = best_u;
        res_out = best_res;
    }
    return found;
}

}  // namespace

std::vector<VortexObservation> detect_vortices(const ComplexField2D& field,
                                               const DetectOptions& opt) {
    const GridSpec& g = field.grid;
    const int M = g.points;
    const double h = g.spacing();
    const double r_edge = (opt.disc_radius > 0.0) ? opt.disc_radius : 0.45 * g.extent;
    const double r_edge_sq = r_edge * r_edge;

    std::vector<double> theta(g.size());
    double max_abs = 0.0;
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        theta[i] = std::arg(field.values[i]);
        max_abs = std::max(max_abs, std::abs(field.values[i]));
    }
    if (!(max_abs > 0.0)) throw std::invalid_argument("detect_vortices: field is identically zero");

    std::vector<VortexObservation> out;

    // A node where psi is exactly zero (symmetric initial data places zeros
    // on nodes) has an undefined phase that poisons the circulation of all
    // four adjacent plaquettes. Handle such nodes first via the winding of
    // the ring of eight neighbours, and exclude those plaquettes below.
    std::set<std::pair<int, int>> poisoned;
    for (int ix = 1; ix + 1 < M; ++ix) {
        const double x = g.coord(ix);
        for (int iy = 1; iy + 1 < M; ++iy) {
            if (field.values[g.index(ix, iy)] != 0.0) continue;
            const double y = g.coord(iy);
            for (int px : {ix - 1, ix})
                for (int py : {iy - 1, iy}) poisoned.insert({px, py});
            if (x * x + y * y > r_edge_sq) continue;

            static constexpr int ring[9][2] = {{1, 0},  {1, 1},   {0, 1},  {-1, 1}, {-1, 0},
                                               {-1, -1}, {0, -1},  {1, -1}, {1, 0}};
            bool ring_ok = true;
            double circ = 0.0;
            for (int k = 0; k + 1 < 9 && ring_ok; ++k) {
                const cplx va = field.values[g.index(ix + ring[k][0], iy + ring[k][1])];
                const cplx vb = field.values[g.index(ix + ring[k + 1][0], iy + ring[k + 1][1])];
                if (va == 0.0 || vb == 0.0) ring_ok = false;
                circ += wrap_to_pi(std::arg(vb) - std::arg(va));
            }
            if (!ring_ok) continue;
            const int w = static_cast<int>(std::lround(circ / (2.0 * kPi)));
            if (w == 0) continue;
            if (std::abs(w) >= 2)
                throw std::runtime_error(
                    "detect_vortices: a node zero carries phase winding of magnitude >= 2; "
                    "the grid is too coarse to separate the vortices");
            VortexObservation obs;
            obs.x = x;
            obs.y = y;
            obs.charge = w;
            obs.residual = 0.0;
            out.push_back(obs);
        }
    }

    for (int ix = 0; ix + 1 < M; ++ix) {
        const double xc = g.coord(ix) + 0.5 * h;
        for (int iy = 0; iy + 1 < M; ++iy) {
            const double yc = g.coord(iy) + 0.5 * h;
            if (xc * xc + yc * yc > r_edge_sq) continue;
            if (!poisoned.empty() && poisoned.count({ix, iy})) continue;

            const double t00 = theta[g.index(ix, iy)];
            const double t10 = theta[g.index(ix + 1, iy)];
            const double t11 = theta[g.index(ix + 1, iy + 1)];
            const double t01 = theta[g.index(ix, iy + 1)];
            const double circ = wrap_to_pi(t10 - t00) + wrap_to_pi(t11 - t10) +
                                wrap_to_pi(t01 - t11) + wrap_to_pi(t00 - t01);
            const int w = static_cast<int>(std::lround(circ / (2.0 * kPi)));
            if (w == 0) continue;
            if (std::abs(w) >= 2)
                throw std::runtime_error(
                    "detect_vortices: one cell carries phase winding of magnitude >= 2; "
                    "the grid is too coarse to separate the vortices");
            // (A multiply charged cell usually aliases into same-signed
            // neighbours instead of tripping the bound above; the proximity
            // check after refinement catches that case.)

            const cplx a = field.values[g.index(ix, iy)];
            const cplx b = field.values[g.index(ix + 1, iy)];
            const cplx c = field.values[g.index(ix + 1, iy + 1)];
            const cplx d = field.values[g.index(ix, iy + 1)];
            const cplx A = a, B = b - a, C = d - a, D = a - b + c - d;

            VortexObservation obs;
            double s = 0.5, u = 0.5, res = std::abs(A + B * 0.5 + C * 0.5 + D * 0.25);
            bilinear_zero(A, B, C, D, s, u, res);
            obs.x = g.coord(ix) + s * h;
            obs.y = g.coord(iy) + u * h;
            obs.charge = w;
            obs.residual = res / max_abs;
            out.push_back(obs);
        }
    }
    // A zero lying exactly on a grid node or edge is claimed by the plaquettes
    // on both sides (the phase at the node itself is undefined), and the
    // refined positions then coincide. Keep the copy with the lower residual.
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = i + 1; j < out.size();) {
            if (out[j].charge == out[i].charge &&
                std::hypot(out[j].x - out[i].x, out[j].y - out[i].y) < 0.1 * h) {
                if (out[j].residual < out[i].residual) out[i] = out[j];
                out.erase(out.begin() + static_cast<std::ptrdiff_t>(j));
            } else {
                ++j;
            }
        }

    // Same-signed zeros closer than one cell are indistinguishable from a
    // multiply charged core, and the bilinear refinement is meaningless for
    // overlapping cells either way.
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = i + 1; j < out.size(); ++j)
            if (out[i].charge == out[j].charge &&
                std::hypot(out[j].x - out[i].x, out[j].y - out[i].y) < h)
                throw std::runtime_error(
                    "detect_vortices: same-signed zeros closer than one cell; "
                    "the grid is too coarse to separate the vortices");

    std::sort(out.begin(), out.end(), [](const VortexObservation& p, const VortexObservation& q) {
        return (p.x != q.x) ? p.x < q.x : p.y < q.y;
    });
    return out;
}

}  // namespace gpvortex
