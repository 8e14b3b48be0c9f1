#pragma once
#include <vector>

namespace gpvortex {

// Physicists' Hermite polynomial H_n(x) by the three-term recurrence.
double hermite(int n, double x);

// Normalized 1D oscillator eigenfunction H_n(u) e^{-u^2/2} / sqrt(2^n n! sqrt(pi)),
// evaluated by the normalized recurrence (no factorial overflow).
double hermite_function(int n, double u);

// Normalized Hermite polynomial H_n(x) / sqrt(2^n n! sqrt(pi)) -- the polynomial
// part of hermite_function, needed where the Gaussian is accounted for separately.
double normalized_hermite_poly(int n, double x);

/** Gauss-Hermite rule for int e^{-x^2} f(x) dx ~= sum w_i f(x_i). */
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
// Exact for polynomials of degree <= 2*count - 1.
GaussHermiteRule gauss_hermite(int count);

}  // namespace gpvortex
