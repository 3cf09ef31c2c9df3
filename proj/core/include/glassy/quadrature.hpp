#pragma once

#include <functional>
#include <vector>

namespace glassy {

// Gauss-Legendre nodes and weights on [-1, 1]. Cached per order, thread safe.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussLegendreRule& gauss_legendre(int order);

// Fixed-order Gauss-Legendre on [a, b].
double integrate_gl(const std::function<double(double)>& f, double a, double b, int order);

struct AdaptiveOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_depth = 48;
    int base_order = 12;
};

// Adaptive bisection quadrature. The per-interval error estimate is the
// difference between one Gauss-Legendre rule and one of double order.
// Throws QuadratureFailure if the tolerance cannot be met within max_depth.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const AdaptiveOptions& opts = {});

// Tanh-sinh (double exponential) quadrature on [a, b]. Converges fast even
// when f has an integrable endpoint singularity or a fractional-power kink at
// the ends, which bisection-based rules resolve only geometrically. Level
// doubling stops once two refinements agree to tol.
double integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b,
                           double tol = 1e-12);

// integral of u^(-s-1) * cos(u) over [x, infinity), for s in (0, 1] and x
// large enough (>= ~30) that the integration-by-parts series converges below
// the requested floor. error_bound is the magnitude of the first omitted term.
struct OscillatoryTail {
    double value = 0.0;
    double error_bound = 0.0;
};

OscillatoryTail cosine_power_tail(double s, double x);

// Normalized average of cos(2 c_alpha tau / r^alpha) over the shell
// rb <= r <= r0 with weight r^(d-1). This is the one-particle average whose
// (N'-1)-th power gives the finite-cutoff relaxation curve. rb = 0 is allowed
// and means no inner cutoff. Exact value 1 at tau = 0.
//
// The phase substitution u = 2 c_alpha tau r^(-alpha) turns the integral into
// int u^(-s-1) cos(u) du with s = d/alpha in (0, 1]. The singular part
// int u^(-s-1) du is integrated exactly (it carries the whole value at small
// tau), the remainder below the first cosine zero by a Taylor series in the
// phase, the oscillatory region by half-period Gauss-Legendre panels, and the
// far tail by integration by parts. Naive quadrature in r fails here because
// the local frequency diverges as r -> rb.
struct ShellAverage {
    double value = 0.0;
    double error_bound = 0.0;
};

ShellAverage shell_cosine_average(int d, double alpha, double c_alpha, double rb, double r0,
                                  double tau);

// Signed integer power by squaring; exponent >= 0. Needed because the shell
// average may be negative while the exponent N'-1 is an exact integer.
double integer_power(double base, long long exponent);

}  // namespace glassy
