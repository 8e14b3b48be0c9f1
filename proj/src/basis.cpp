#include "gpvortex/basis.hpp"

#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "gpvortex/hermite.hpp"

namespace gpvortex {

double sigma_broadening(double beta) {
    if (beta < 0.0) throw std::invalid_argument("sigma_broadening: beta must be >= 0");
    const double two_pi = 2.0 * std::numbers::pi;
    return std::pow((beta + two_pi) / two_pi, 0.25);
}

double quartic_mode_integral(int n) {
    if (n < 0) throw std::invalid_argument("quartic_mode_integral: order must be >= 0");
    static std::vector<double> cache;
    static std::mutex mu;
    std::lock_guard lock(mu);
    while (static_cast<int>(cache.size()) <= n) {
        const int k = static_cast<int>(cache.size());
        // int phi_k^4 du = 2^{-1/2} int e^{-w^2} q_k(w/sqrt2)^4 dw, degree 4k polynomial.
        const GaussHermiteRule rule = gauss_hermite(std::max(2 * k + 2, 4));
        const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double q = normalized_hermite_poly(k, rule.nodes[i] * inv_sqrt2);
            s += rule.weights[i] * q * q * q * q;
        }
        cache.push_back(s * inv_sqrt2);
    }
    return cache[n];
}

double mu_constant(int n, int m, double beta) {
    if (n < 0 || m < 0) throw std::invalid_argument("mu_constant: orders must be >= 0");
    const double s2 = sigma_broadening(beta) * sigma_broadening(beta);
    const double oscillator = (n + m + 1) * 0.5 * (s2 + 1.0 / s2);
    return oscillator + beta * quartic_mode_integral(n) * quartic_mode_integral(m) / s2;
}

BasisState make_basis_state(int n, int m, double beta) {
    BasisState b;
    b.n = n;
    b.m = m;
    b.beta = beta;
    b.sigma = sigma_broadening(beta);
    b.mu = mu_constant(n, m, beta);
    return b;
}

namespace {

// phi_n(x_i / sigma) tabulated along one axis.
std::vector<double> axis_table(int n, double sigma, const GridSpec& g) {
    std::vector<double> t(g.points);
    for (int i = 0; i < g.points; ++i) t[i] = hermite_function(n, g.coord(i) / sigma);
    return t;
}

}  // namespace

ComplexField2D mode_function(const BasisState& b, const GridSpec& grid, double t) {
    ComplexField2D f(grid, t);
    const auto tx = axis_table(b.n, b.sigma, grid);
    const auto ty = axis_table(b.m, b.sigma, grid);
    const std::complex<double> phase = std::exp(std::complex<double>(0.0, -b.mu * t)) / b.sigma;
    for (int ix = 0; ix < grid.points; ++ix)
        for (int iy = 0; iy < grid.points; ++iy)
            f.values[grid.index(ix, iy)] = phase * (tx[ix] * ty[iy]);
    return f;
}

SpectralState project(const ComplexField2D& f, double beta, int max_degree) {
    if (max_degree < 0) throw std::invalid_argument("project: max_degree must be >= 0");
    const GridSpec& g = f.grid;
    const double sigma = sigma_broadening(beta);
    const int D = max_degree;

    SpectralState s;
    s.max_degree = D;
    s.beta = beta;
    s.time = f.time;
    s.coeffs.assign(static_cast<std::size_t>(D + 1) * (D + 1), {0.0, 0.0});

    std::vector<std::vector<double>> tabs(D + 1);
    for (int n = 0; n <= D; ++n) tabs[n] = axis_table(n, sigma, g);

    // Separable contraction: A[n][iy] = sum_ix phi_n(x) f(ix, iy), then over iy.
    const int M = g.points;
    std::vector<std::complex<double>> A(static_cast<std::size_t>(D + 1) * M);
    for (int n = 0; n <= D; ++n) {
        const auto& tx = tabs[n];
        for (int iy = 0; iy < M; ++iy) {
            std::complex<double> acc(0.0, 0.0);
            for (int ix = 0; ix < M; ++ix) acc += tx[ix] * f.values[g.index(ix, iy)];
            A[static_cast<std::size_t>(n) * M + iy] = acc;
        }
    }
    const double h2 = g.spacing() * g.spacing();
    double weight = 0.0;
    for (int n = 0; n <= D; ++n) {
        for (int m = 0; m <= D; ++m) {
            const auto& ty = tabs[m];
            std::complex<double> acc(0.0, 0.0);
            for (int iy = 0; iy < M; ++iy) acc += ty[iy] * A[static_cast<std::size_t>(n) * M + iy];
            const std::complex<double> c = acc * (h2 / sigma);
            s.coeffs[s.idx(n, m)] = c;
            weight += std::norm(c);
        }
    }
    const double nrm = norm(f);
    s.captured_weight = (nrm > 0.0) ? weight / (nrm * nrm) : 1.0;
    s.truncated = s.captured_weight < 0.999;
    return s;
}

SpectralState evolve(SpectralState s, double delta_t) {
    for (int n = 0; n <= s.max_degree; ++n)
        for (int m = 0; m <= s.max_degree; ++m)
            s.coeffs[s.idx(n, m)] *=
                std::exp(std::complex<double>(0.0, -mu_constant(n, m, s.beta) * delta_t));
    s.time += delta_t;
    return s;
}

ComplexField2D synthesize(const SpectralState& s, const GridSpec& grid) {
    const double sigma = sigma_broadening(s.beta);
    const int D = s.max_degree;
    const int M = grid.points;
    std::vector<std::vector<double>> tabs(D + 1);
    for (int n = 0; n <= D; ++n) tabs[n] = axis_table(n, sigma, grid);

    // B[n][iy] = sum_m c(n,m) phi_m(y), then f = sum_n phi_n(x) B[n][iy].
    std::vector<std::complex<double>> B(static_cast<std::size_t>(D + 1) * M, {0.0, 0.0});
    for (int n = 0; n <= D; ++n)
        for (int m = 0; m <= D; ++m) {
            const std::complex<double> c = s.coeffs[s.idx(n, m)];
            if (c == std::complex<double>(0.0, 0.0)) continue;
            const auto& ty = tabs[m];
            for (int iy = 0; iy < M; ++iy) B[static_cast<std::size_t>(n) * M + iy] += c * ty[iy];
        }
    ComplexField2D f(grid, s.time);
    for (int n = 0; n <= D; ++n) {
        const auto& tx = tabs[n];
        for (int ix = 0; ix < M; ++ix) {
            if (tx[ix] == 0.0) continue;
            const double v = tx[ix] / sigma;
            for (int iy = 0; iy < M; ++iy)
                f.values[grid.index(ix, iy)] += v * B[static_cast<std::size_t>(n) * M + iy];
        }
    }
    return f;
}

std::string spectral_state_to_json(const SpectralState& s) {
    nlohmann::json j;
    j["max_degree"] = s.max_degree;
    j["beta"] = s.beta;
    j["time"] = s.time;
    auto coeffs = nlohmann::json::array();
    for (int n = 0; n <= s.max_degree; ++n)
        for (int m = 0; m <= s.max_degree; ++m) {
            const auto& c = s.coeffs[s.idx(n, m)];
            coeffs.push_back({n, m, c.real(), c.imag()});
        }
    j["coefficients"] = std::move(coeffs);
    return j.dump(2);
}

SpectralState spectral_state_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    SpectralState s;
    s.max_degree = j.at("max_degree").get<int>();
    s.beta = j.at("beta").get<double>();
    s.time = j.at("time").get<double>();
    s.coeffs.assign(static_cast<std::size_t>(s.max_degree + 1) * (s.max_degree + 1), {0.0, 0.0});
    for (const auto& row : j.at("coefficients")) {
        const int n = row.at(0).get<int>();
        const int m = row.at(1).get<int>();
        if (n < 0 || m < 0 || n > s.max_degree || m > s.max_degree)
            throw std::runtime_error("spectral_state_from_json: coefficient index out of range");
        s.coeffs[s.idx(n, m)] = {row.at(2).get<double>(), row.at(3).get<double>()};
    }
    double weight = 0.0;
    for (const auto& c : s.coeffs) weight += std::norm(c);
    s.captured_weight = weight;
    return s;
}

void write_spectral_state(const std::string& path, const SpectralState& s) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("write_spectral_state: cannot open " + path);
    out << spectral_state_to_json(s) << "\n";
}

SpectralState read_spectral_state(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_spectral_state: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return spectral_state_from_json(text);
}

}  // namespace gpvortex
