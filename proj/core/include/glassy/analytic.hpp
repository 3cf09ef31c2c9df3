#pragma once

#include <cstdint>

#include "glassy/couplings.hpp"
#include "glassy/dynamics.hpp"

namespace glassy {

// Thermodynamic-limit model: dimension, interaction exponent alpha >= d,
// number density and coupling prefactor. alpha < d is rejected because the
// closed forms below do not exist there.
struct ModelParameters {
    int d = 3;
    double alpha = 6.0;
    double density = 1.0;
    double c_alpha = 1.0;

    ModelParameters(int d, double alpha, double density, double c_alpha);
};

// Closed-form rates. Both observables stretch with beta = d/alpha; the purity
// rate is 2^(1-alpha/d) times the magnetization rate. chi is the anisotropy
// factor actually applied to the rates (1 when isotropic).
struct AnalyticPrediction {
    double kappa = 0.0;
    double gamma_m = 0.0;
    double beta_m = 0.0;
    double gamma_p = 0.0;
    double beta_p = 0.0;
    double chi = 1.0;
};

// Dimensionless rate coefficient pi^(d/2) n (2 c_alpha)^(d/alpha) / Gamma(d/2+1).
double kappa(const ModelParameters& params);

// Coefficient c in magnetization = (1/2) exp(-c tau^(d/alpha)). Evaluated as
// kappa * (pi/2) * Gamma(1+eps) * sinc(pi eps/2) with eps = (alpha-d)/alpha,
// which is finite and smooth through alpha = d (where it is pi kappa / 2).
double decay_coefficient(const ModelParameters& params);

// Large-cutoff limit of the phase integral behind the decay coefficient:
// (1/alpha) Gamma((alpha-d)/alpha) sin(pi (alpha-d)/(2 alpha)), continued to
// pi/(2 alpha) at alpha = d.
double fresnel_asymptote(int d, double alpha);

AnalyticPrediction rates(const ModelParameters& params);
AnalyticPrediction rates(const ModelParameters& params, const Anisotropy& anisotropy,
                         double quad_tol = 1e-9);

// Rate of the j-th moment of the single-spin magnetization: the power
// expansion of cos^j splits each pair factor into harmonics |j-2i|, whose
// rate coefficients add, c_j = sum_i binom(j,i)/2^j |j-2i|^(d/alpha) * c_1,
// and gamma_j = c_j^(alpha/d). j = 1 reproduces gamma_m identically and j = 2
// the purity rate.
double gamma_moment(int j, const ModelParameters& params);

// Weight of the zero-frequency harmonic in the cos^j expansion:
// binom(j, j/2)/2^j for even j, 0 for odd j.
double moment_plateau_weight(int j);

// Thermodynamic-limit observables.
double analytic_moment(int j, const ModelParameters& params, double tau);
double analytic_magnetization(const ModelParameters& params, double tau);
double analytic_purity(const ModelParameters& params, double tau);

// Angular average of |f|^(d/alpha) over the unit sphere directions in d
// dimensions. Isotropic weight gives exactly 1. The named dipolar case is
// integrated over the polar angle with the kink at cos(theta) = 1/sqrt(3)
// split out; generic weights go through adaptive quadrature.
double anisotropy_chi(const Anisotropy& anisotropy, int d, double alpha, double tol = 1e-9);

// Median over a Poisson point process of the strongest coupling a spin sees:
// c_alpha * (n V_1(d) / ln 2)^(alpha/d) with V_1 the unit-ball volume. Serves
// as the continuum counterpart of the sampled nearest-neighbour scale.
double continuum_median_nn_coupling(const ModelParameters& params);

// Finite-cutoff geometry for the direct evaluation of the relaxation integral:
// N' spins at the model density filling the shell rb < r < r0.
struct CutoffIntegralConfig {
    double rb = 0.0;
    double r0 = 1.0;
    long long n_prime = 2;
    double tolerance = 1e-9;

    CutoffIntegralConfig(double rb, double r0, long long n_prime, double tolerance = 1e-9);
};

// Builds a config whose shell holds exactly n_prime spins at params.density,
// given the cutoff ratio rb/r0.
CutoffIntegralConfig cutoff_config_for(const ModelParameters& params, long long n_prime,
                                       double rb_over_r0, double tolerance = 1e-9);

// Direct evaluation of the finite-cutoff relaxation curve
// (1/2) [shell average of cos(2 c_alpha tau r^-alpha)]^(N'-1),
// which approaches the closed form as rb -> 0, r0 -> infinity, N' -> infinity
// at fixed density. Throws QuadratureFailure if the phase integral cannot be
// resolved to config.tolerance, ValidationError if density and N' disagree.
RelaxationCurve verify_thermodynamic_limit(const ModelParameters& params,
                                           const CutoffIntegralConfig& config,
                                           const TimeGrid& grid);

// Same machinery for the j-th moment: each pair factor averages to the
// harmonic mixture sum_i w_i * shell_average(|j-2i| tau).
RelaxationCurve verify_moment_limit(int j, const ModelParameters& params,
                                    const CutoffIntegralConfig& config, const TimeGrid& grid);

// Closed-form curves on a grid, in the same shape the ensemble pipeline
// produces. chi != 1 scales the rates before evaluation.
RelaxationCurve analytic_magnetization_curve(const ModelParameters& params, const TimeGrid& grid,
                                             double chi = 1.0);
RelaxationCurve analytic_purity_curve(const ModelParameters& params, const TimeGrid& grid,
                                      double chi = 1.0);
RelaxationCurve analytic_moment_curve(int j, const ModelParameters& params, const TimeGrid& grid,
                                      double chi = 1.0);

}  // namespace glassy
