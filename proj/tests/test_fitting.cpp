#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "glassy/dynamics.hpp"
#include "glassy/errors.hpp"
#include "glassy/fitting.hpp"
#include "glassy/numeric.hpp"

using namespace glassy;

namespace {

RelaxationCurve synthetic(Observable obs, double amplitude, double gamma, double beta,
                          std::size_t n = 60, double baseline = 0.0) {
    RelaxationCurve c;
    c.grid = TimeGrid::log_spaced(1e-3 / gamma, 50.0 / gamma, n);
    c.observable = obs;
    c.moment_j = obs == Observable::purity ? 2 : 1;
    c.meta.d = 3;
    c.meta.alpha = 6.0;
    for (std::size_t t = 0; t < c.grid.size(); ++t) {
        const double decay = amplitude * std::exp(-std::pow(gamma * c.grid[t], beta));
        if (obs == Observable::purity)
            c.values.push_back(0.5 + 0.5 * decay);
        else
            c.values.push_back(decay + baseline);
    }
    return c;
}

}  // namespace

TEST_CASE("recovers exact stretched-exponential parameters") {
    RelaxationCurve c = synthetic(Observable::magnetization, 0.5, 7.3, 0.55);
    StretchedExpFit fit = fit_stretched_exponential(c);
    CHECK(fit.converged);
    CHECK(fit.amplitude == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(fit.gamma == doctest::Approx(7.3).epsilon(1e-6));
    CHECK(fit.beta == doctest::Approx(0.55).epsilon(1e-6));
    CHECK(fit.residual_norm < 1e-10);
    CHECK(fit.n_points > 10);
    CHECK(fit.amplitude_stderr() < 1e-6);
}

TEST_CASE("purity curves are rescaled onto the unit decay before fitting") {
    RelaxationCurve c = synthetic(Observable::purity, 1.0, 3.0, 0.5);
    StretchedExpFit fit = fit_stretched_exponential(c);
    CHECK(fit.converged);
    CHECK(fit.amplitude == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fit.gamma == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(fit.beta == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("an explicit baseline shifts the window") {
    RelaxationCurve c = synthetic(Observable::moment, 0.9, 5.0, 0.7, 60, 0.05);
    StretchedExpFit fit = fit_stretched_exponential(c, 0.05);
    CHECK(fit.converged);
    CHECK(fit.amplitude == doctest::Approx(0.9).epsilon(1e-5));
    CHECK(fit.gamma == doctest::Approx(5.0).epsilon(1e-4));
    CHECK(fit.beta == doctest::Approx(0.7).epsilon(1e-5));
}

TEST_CASE("initial guess does not depend on curve metadata") {
    RelaxationCurve c = synthetic(Observable::magnetization, 0.5, 12.0, 0.8);
    c.meta.d = 0;  // no d/alpha hint; fitter falls back to a generic start
    c.meta.alpha = 0.0;
    StretchedExpFit fit = fit_stretched_exponential(c);
    CHECK(fit.converged);
    CHECK(fit.beta == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("too few usable points") {
    RelaxationCurve c = synthetic(Observable::magnetization, 0.5, 7.0, 0.5, 9);
    CHECK_THROWS_AS(fit_stretched_exponential(c), InsufficientData);
    RelaxationCurve ten = synthetic(Observable::magnetization, 0.5, 7.0, 0.5, 10);
    CHECK_NOTHROW(fit_stretched_exponential(ten));
}

TEST_CASE("window drops zero times, undecayed points, and noise-floor points") {
    RelaxationCurve c = synthetic(Observable::magnetization, 0.5, 7.0, 0.5, 40);
    // prepend tau = 0 and an undecayed sample
    std::vector<double> times = {0.0, 1e-9};
    std::vector<double> values = {0.5, 0.5};
    std::vector<double> errors = {0.0, 0.0};
    for (std::size_t t = 0; t < c.grid.size(); ++t) {
        times.push_back(c.grid[t]);
        values.push_back(c.values[t]);
        errors.push_back(0.0);
    }
    // and drown the last five points in noise
    for (std::size_t k = values.size() - 5; k < values.size(); ++k) errors[k] = 1.0;
    RelaxationCurve padded;
    padded.grid = TimeGrid(times);
    padded.values = values;
    padded.errors = errors;
    padded.observable = Observable::magnetization;
    padded.meta = c.meta;
    StretchedExpFit fit = fit_stretched_exponential(padded);
    CHECK(fit.converged);
    CHECK(fit.n_points == 40 - 5);
    CHECK(fit.beta == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("flat curves are rejected as degenerate") {
    RelaxationCurve c;
    c.grid = TimeGrid::log_spaced(0.1, 10.0, 20);
    c.observable = Observable::magnetization;
    for (std::size_t t = 0; t < 20; ++t) c.values.push_back(0.45 - 1e-4 * static_cast<double>(t));
    CHECK_THROWS_AS(fit_stretched_exponential(c), DegenerateCurve);
}

TEST_CASE("negative tails fall out of the window instead of poisoning the fit") {
    RelaxationCurve c = synthetic(Observable::magnetization, 0.5, 7.0, 0.5, 40);
    // finite ensembles can dip below zero at late times
    c.values[38] = -0.004;
    c.values[39] = -0.001;
    StretchedExpFit fit = fit_stretched_exponential(c);
    CHECK(fit.converged);
    CHECK(fit.n_points == 38);
    CHECK(fit.beta == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("stretching exponent stays within its bounds") {
    // a gaussian decay is steeper than any allowed stretched exponential
    RelaxationCurve c = synthetic(Observable::magnetization, 0.5, 4.0, 2.0);
    StretchedExpFit fit = fit_stretched_exponential(c);
    CHECK(fit.beta <= 1.5 + 1e-12);
}

TEST_CASE("noisy data yields finite uncertainties") {
    RelaxationCurve c = synthetic(Observable::magnetization, 0.5, 7.0, 0.5, 60);
    // deterministic low-amplitude wiggle stands in for sampling noise
    for (std::size_t t = 0; t < c.values.size(); ++t)
        c.values[t] *= 1.0 + 0.01 * std::sin(3.7 * static_cast<double>(t));
    StretchedExpFit fit = fit_stretched_exponential(c);
    CHECK(fit.converged);
    CHECK(fit.beta == doctest::Approx(0.5).epsilon(0.05));
    CHECK(fit.beta_stderr() > 0.0);
    CHECK(fit.gamma_stderr() > 0.0);
    CHECK(fit.residual_norm > 0.0);
}

TEST_CASE("power-law fit on exact data") {
    std::vector<double> x, y;
    for (double v : log_spaced(10.0, 1000.0, 12)) {
        x.push_back(v);
        y.push_back(3.0 * std::pow(v, -1.7));
    }
    PowerLawFit fit = fit_power_law(x, y);
    CHECK(fit.exponent == doctest::Approx(1.7).epsilon(1e-12));
    CHECK(fit.prefactor == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.stderr_p < 1e-10);
}

TEST_CASE("power-law fit validation") {
    std::vector<double> x{1.0, 2.0, 3.0};
    std::vector<double> y{1.0, 0.5, 0.0};
    CHECK_THROWS_AS(fit_power_law(x, y), NonPositiveValue);
    y = {1.0, 0.5};
    CHECK_THROWS_AS(fit_power_law(x, y), ValidationError);
    x = {1.0, 2.0};
    CHECK_THROWS_AS(fit_power_law(x, y), InsufficientData);
    x = {2.0, 2.0, 2.0};
    y = {1.0, 0.5, 0.25};
    CHECK_THROWS_AS(fit_power_law(x, y), ValidationError);
}

TEST_CASE("power-law fit reports scatter through stderr and r-squared") {
    std::vector<double> x, y;
    std::size_t k = 0;
    for (double v : log_spaced(10.0, 1000.0, 12)) {
        x.push_back(v);
        y.push_back(2.0 * std::pow(v, -0.8) * (1.0 + 0.05 * std::sin(static_cast<double>(++k))));
    }
    PowerLawFit fit = fit_power_law(x, y);
    CHECK(fit.exponent == doctest::Approx(0.8).epsilon(0.05));
    CHECK(fit.stderr_p > 0.0);
    CHECK(fit.r_squared < 1.0);
    CHECK(fit.r_squared > 0.95);
}
