#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>

#include "glassy/dynamics.hpp"

namespace glassy {

// Least-squares optimum of A * exp(-(gamma * tau)^beta) on a relaxation
// curve. covariance is row-major over (A, gamma, beta); converged reports
// optimizer stagnation instead of throwing.
struct StretchedExpFit {
    double amplitude = 0.0;
    double gamma = 0.0;
    double beta = 0.0;
    std::array<double, 9> covariance{};
    double residual_norm = 0.0;
    bool converged = false;
    std::size_t n_points = 0;  // points inside the fit window

    double amplitude_stderr() const { return std::sqrt(covariance[0]); }
    double gamma_stderr() const { return std::sqrt(covariance[4]); }
    double beta_stderr() const { return std::sqrt(covariance[8]); }
};

// Fits the decaying part of the curve. Purity curves are first mapped to
// 2*(value - 1/2) so they share the unit-amplitude model; for other
// observables an optional constant baseline is subtracted. The window drops
// tau = 0 (the beta derivative is singular there), non-positive values, and
// points below ten standard errors. Throws InsufficientData when fewer than
// 10 usable points remain and DegenerateCurve when the curve never decays.
StretchedExpFit fit_stretched_exponential(const RelaxationCurve& curve,
                                          std::optional<double> baseline = std::nullopt);

// y = prefactor * x^(-exponent), fitted as a line in log-log space.
struct PowerLawFit {
    double prefactor = 0.0;
    double exponent = 0.0;
    double stderr_p = 0.0;
    double r_squared = 0.0;
};

// Ordinary least squares on (ln x, ln y). Throws NonPositiveValue if any
// coordinate is not strictly positive, InsufficientData below 3 points.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

}  // namespace glassy
