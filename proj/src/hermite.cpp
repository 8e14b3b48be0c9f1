#include "gpvortex/hermite.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gpvortex {

double hermite(int n, double x) {
    if (n < 0) throw std::invalid_argument("hermite: order must be >= 0");
    if (n == 0) return 1.0;
    double hm = 1.0, h = 2.0 * x;
    for (int j = 1; j < n; ++j) {
        const double hp = 2.0 * x * h - 2.0 * j * hm;
        hm = h;
        h = hp;
    }
    return h;
}

double normalized_hermite_poly(int n, double x) {
    if (n < 0) throw std::invalid_argument("normalized_hermite_poly: order must be >= 0");
    const double pi_quarter = std::pow(std::numbers::pi, -0.25);
    double qm = 0.0, q = pi_quarter;
    for (int j = 0; j < n; ++j) {
        const double qp = x * std::sqrt(2.0 / (j + 1)) * q - std::sqrt(double(j) / (j + 1)) * qm;
        qm = q;
        q = qp;
    }
    return q;
}

double hermite_function(int n, double u) {
    return normalized_hermite_poly(n, u) * std::exp(-0.5 * u * u);
}

GaussHermiteRule gauss_hermite(int count) {
    if (count < 1) throw std::invalid_argument("gauss_hermite: need at least one node");
    const int n = count;
    GaussHermiteRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);

    // Roots of H_n found by Newton on the normalized recurrence, largest first.
    const int half = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < half; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(n, 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * rule.nodes[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * rule.nodes[1];
        } else {
            z = 2.0 * z - rule.nodes[i - 2];
        }
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            const double p = normalized_hermite_poly(n, z);
            pp = std::sqrt(2.0 * n) * normalized_hermite_poly(n - 1, z);
            const double dz = p / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15 * (1.0 + std::abs(z))) break;
        }
        pp = std::sqrt(2.0 * n) * normalized_hermite_poly(n - 1, z);
        rule.nodes[i] = z;
        rule.weights[i] = 2.0 / (pp * pp);
        rule.nodes[n - 1 - i] = -z;
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    if (n % 2 == 1) {
        rule.nodes[n / 2] = 0.0;
        const double pp = std::sqrt(2.0 * n) * normalized_hermite_poly(n - 1, 0.0);
        rule.weights[n / 2] = 2.0 / (pp * pp);
    }
    return rule;
}

}  // namespace gpvortex
