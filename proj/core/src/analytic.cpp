#include "glassy/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "glassy/ensemble.hpp"
#include "glassy/errors.hpp"
#include "glassy/quadrature.hpp"

namespace glassy {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double xx = x * x;
        return 1.0 - xx / 6.0 + xx * xx / 120.0;
    }
    return std::sin(x) / x;
}

// binom(j, i) / 2^j for i = 0..j, exact in double for the supported j range.
std::vector<double> harmonic_weights(int j) {
    std::vector<double> w(static_cast<std::size_t>(j) + 1);
    double binom = 1.0;
    for (int i = 0; i <= j; ++i) {
        w[static_cast<std::size_t>(i)] = std::ldexp(binom, -j);
        binom = binom * (j - i) / (i + 1.0);
    }
    return w;
}

void check_moment_order(int j) {
    if (j < 1) throw ValidationError("moment order must be >= 1");
    if (j > 128) throw ValidationError("moment order too large (max 128)");
}

double stretch_power(const ModelParameters& params) {
    return static_cast<double>(params.d) / params.alpha;
}

// Coefficient of tau^(d/alpha) in the j-th moment exponent. The i = j/2 term
// of the cos^j expansion is constant in time and contributes nothing here;
// every oscillating harmonic adds |j-2i|^(d/alpha) times the base coefficient.
double moment_coefficient(int j, const ModelParameters& params) {
    check_moment_order(j);
    const double s = stretch_power(params);
    const std::vector<double> w = harmonic_weights(j);
    double sum = 0.0;
    for (int i = j; i >= 0; --i) {
        const int m = std::abs(j - 2 * i);
        if (m == 0) continue;
        sum += w[static_cast<std::size_t>(i)] * std::pow(static_cast<double>(m), s);
    }
    return sum * decay_coefficient(params);
}

AnalyticPrediction make_prediction(const ModelParameters& params, double chi) {
    AnalyticPrediction pred;
    pred.kappa = kappa(params);
    pred.beta_m = stretch_power(params);
    pred.beta_p = pred.beta_m;
    pred.chi = chi;
    const double inv_s = params.alpha / static_cast<double>(params.d);
    pred.gamma_m = chi * std::pow(decay_coefficient(params), inv_s);
    pred.gamma_p = std::pow(2.0, 1.0 - inv_s) * pred.gamma_m;
    const bool ok = pred.beta_m > 0.0 && pred.beta_m <= 1.0 && pred.gamma_m > 0.0 &&
                    pred.gamma_p > 0.0 && pred.kappa > 0.0 && pred.chi > 0.0 &&
                    std::isfinite(pred.gamma_m) && std::isfinite(pred.gamma_p);
    if (!ok) throw std::logic_error("inconsistent analytic prediction");
    return pred;
}

CurveMeta continuum_meta(const ModelParameters& params, const Anisotropy& anisotropy) {
    CurveMeta meta;
    meta.d = params.d;
    meta.alpha = params.alpha;
    meta.c_alpha = params.c_alpha;
    meta.anisotropy = anisotropy.name;
    meta.n_spins = 0;  // continuum limit
    meta.n_samples = 1;
    meta.jnn = continuum_median_nn_coupling(params);
    return meta;
}

RelaxationCurve closed_form_curve(int j, const ModelParameters& params, const TimeGrid& grid,
                                  double chi, Observable obs) {
    if (!(chi > 0.0) || !std::isfinite(chi)) {
        throw ValidationError("anisotropy factor must be positive");
    }
    const double s = stretch_power(params);
    const double c_j = moment_coefficient(j, params) * std::pow(chi, s);
    RelaxationCurve curve;
    curve.grid = grid;
    curve.values.reserve(grid.size());
    for (std::size_t t = 0; t < grid.size(); ++t) {
        const double decay = std::exp(-c_j * std::pow(grid[t], s));
        double v = decay;
        if (obs == Observable::magnetization) v = 0.5 * decay;
        if (obs == Observable::purity) v = 0.5 + 0.5 * decay;
        curve.values.push_back(v);
    }
    curve.observable = obs;
    curve.moment_j = j;
    curve.meta = continuum_meta(params, Anisotropy::none());
    curve.validate();
    return curve;
}

}  // namespace

ModelParameters::ModelParameters(int d_, double alpha_, double density_, double c_alpha_)
    : d(d_), alpha(alpha_), density(density_), c_alpha(c_alpha_) {
    if (d < 1) throw ValidationError("dimension must be >= 1");
    if (!(density > 0.0) || !std::isfinite(density)) {
        throw ValidationError("density must be positive");
    }
    if (!(c_alpha > 0.0) || !std::isfinite(c_alpha)) {
        throw ValidationError("coupling prefactor must be positive");
    }
    if (!(alpha >= static_cast<double>(d))) {
        throw DomainError("interaction exponent must satisfy alpha >= d");
    }
}

double kappa(const ModelParameters& params) {
    return params.density * unit_ball_volume(params.d) *
           std::pow(2.0 * params.c_alpha, stretch_power(params));
}

double decay_coefficient(const ModelParameters& params) {
    const double eps = (params.alpha - static_cast<double>(params.d)) / params.alpha;
    // Gamma(eps) sin(pi eps / 2) rewritten through Gamma(1+eps) = eps Gamma(eps)
    // so the alpha -> d limit (eps -> 0) is reached smoothly, with value pi/2.
    const double angular = 0.5 * kPi * std::tgamma(1.0 + eps) * sinc(0.5 * kPi * eps);
    return kappa(params) * angular;
}

double fresnel_asymptote(int d, double alpha) {
    if (d < 1) throw ValidationError("dimension must be >= 1");
    if (!(alpha >= static_cast<double>(d))) {
        throw DomainError("interaction exponent must satisfy alpha >= d");
    }
    const double eps = (alpha - static_cast<double>(d)) / alpha;
    return (0.5 * kPi / alpha) * std::tgamma(1.0 + eps) * sinc(0.5 * kPi * eps);
}

AnalyticPrediction rates(const ModelParameters& params) { return make_prediction(params, 1.0); }

AnalyticPrediction rates(const ModelParameters& params, const Anisotropy& anisotropy,
                         double quad_tol) {
    return make_prediction(params, anisotropy_chi(anisotropy, params.d, params.alpha, quad_tol));
}

double gamma_moment(int j, const ModelParameters& params) {
    const double inv_s = params.alpha / static_cast<double>(params.d);
    return std::pow(moment_coefficient(j, params), inv_s);
}

double moment_plateau_weight(int j) {
    check_moment_order(j);
    if (j % 2 != 0) return 0.0;
    return harmonic_weights(j)[static_cast<std::size_t>(j / 2)];
}

double analytic_moment(int j, const ModelParameters& params, double tau) {
    if (tau < 0.0) throw ValidationError("time must be >= 0");
    return std::exp(-moment_coefficient(j, params) * std::pow(tau, stretch_power(params)));
}

double analytic_magnetization(const ModelParameters& params, double tau) {
    return 0.5 * analytic_moment(1, params, tau);
}

double analytic_purity(const ModelParameters& params, double tau) {
    return 0.5 + 0.5 * analytic_moment(2, params, tau);
}

namespace {

double polar_unit_vector_chi_3d(const Anisotropy& anisotropy, double s, double tol,
                                const std::vector<double>& splits) {
    // Average over the polar cosine with the azimuth fixed; valid when the
    // weight depends only on the last component. Kink locations are split out
    // so tanh-sinh sees smooth pieces.
    const auto integrand = [&](double c) {
        const double sc = std::sqrt(std::max(0.0, 1.0 - c * c));
        const double u[3] = {sc, 0.0, c};
        return std::pow(std::abs(anisotropy.weight(std::span<const double>(u, 3))), s);
    };
    std::vector<double> edges{-1.0};
    edges.insert(edges.end(), splits.begin(), splits.end());
    edges.push_back(1.0);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        sum += integrate_tanh_sinh(integrand, edges[i], edges[i + 1], tol * 0.1);
    }
    return 0.5 * sum;
}

}  // namespace

double anisotropy_chi(const Anisotropy& anisotropy, int d, double alpha, double tol) {
    if (d < 1) throw ValidationError("dimension must be >= 1");
    if (!(alpha >= static_cast<double>(d))) {
        throw DomainError("interaction exponent must satisfy alpha >= d");
    }
    if (anisotropy.isotropic()) return 1.0;
    const double s = static_cast<double>(d) / alpha;

    if (d == 1) {
        const double up[1] = {1.0};
        const double dn[1] = {-1.0};
        const double a = std::pow(std::abs(anisotropy.weight(std::span<const double>(up, 1))), s);
        const double b = std::pow(std::abs(anisotropy.weight(std::span<const double>(dn, 1))), s);
        return 0.5 * (a + b);
    }

    const bool dipolar = anisotropy.name == "dipolar";
    if (d == 3 && dipolar) {
        const double c_star = 1.0 / std::sqrt(3.0);
        return polar_unit_vector_chi_3d(anisotropy, s, tol, {-c_star, c_star});
    }

    if (d == 2) {
        const auto integrand = [&](double theta) {
            const double u[2] = {std::cos(theta), std::sin(theta)};
            return std::pow(std::abs(anisotropy.weight(std::span<const double>(u, 2))), s);
        };
        if (dipolar) {
            // |1 - 3 sin^2| kinks where sin(theta) = +-1/sqrt(3).
            const double t_star = std::asin(1.0 / std::sqrt(3.0));
            const std::vector<double> edges{0.0, t_star, kPi - t_star, kPi + t_star,
                                            2.0 * kPi - t_star, 2.0 * kPi};
            double sum = 0.0;
            for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
                sum += integrate_tanh_sinh(integrand, edges[i], edges[i + 1], tol * 0.1);
            }
            return sum / (2.0 * kPi);
        }
        AdaptiveOptions opts;
        opts.abs_tol = tol;
        opts.rel_tol = tol;
        opts.max_depth = 40;
        return integrate_adaptive(integrand, 0.0, 2.0 * kPi, opts) / (2.0 * kPi);
    }

    if (d == 3) {
        // Generic weight over the full sphere: adaptive in the polar cosine,
        // adaptive in the azimuth inside.
        AdaptiveOptions inner_opts;
        inner_opts.abs_tol = tol * 0.1;
        inner_opts.rel_tol = tol * 0.1;
        inner_opts.max_depth = 36;
        const auto azimuth_average = [&](double c) {
            const double sc = std::sqrt(std::max(0.0, 1.0 - c * c));
            const auto f = [&](double phi) {
                const double u[3] = {sc * std::cos(phi), sc * std::sin(phi), c};
                return std::pow(std::abs(anisotropy.weight(std::span<const double>(u, 3))), s);
            };
            return integrate_adaptive(f, 0.0, 2.0 * kPi, inner_opts) / (2.0 * kPi);
        };
        AdaptiveOptions outer_opts;
        outer_opts.abs_tol = tol;
        outer_opts.rel_tol = tol;
        outer_opts.max_depth = 40;
        return 0.5 * integrate_adaptive(azimuth_average, -1.0, 1.0, outer_opts);
    }

    throw ValidationError("anisotropy average implemented for d <= 3 only");
}

double continuum_median_nn_coupling(const ModelParameters& params) {
    const double scale = params.density * unit_ball_volume(params.d) / std::numbers::ln2;
    return params.c_alpha * std::pow(scale, params.alpha / static_cast<double>(params.d));
}

CutoffIntegralConfig::CutoffIntegralConfig(double rb_, double r0_, long long n_prime_,
                                           double tolerance_)
    : rb(rb_), r0(r0_), n_prime(n_prime_), tolerance(tolerance_) {
    if (!(rb > 0.0) || !(rb < r0) || !std::isfinite(r0)) {
        throw ValidationError("cutoffs must satisfy 0 < rb < r0");
    }
    if (n_prime < 2) throw ValidationError("cutoff particle count must be >= 2");
    if (!(tolerance > 0.0)) throw ValidationError("quadrature tolerance must be positive");
}

CutoffIntegralConfig cutoff_config_for(const ModelParameters& params, long long n_prime,
                                       double rb_over_r0, double tolerance) {
    if (!(rb_over_r0 > 0.0) || !(rb_over_r0 < 1.0)) {
        throw ValidationError("cutoff ratio must lie in (0, 1)");
    }
    const double shell = 1.0 - std::pow(rb_over_r0, static_cast<double>(params.d));
    const double volume = static_cast<double>(n_prime) / (params.density * shell);
    const double r0 = std::pow(volume / unit_ball_volume(params.d), 1.0 / params.d);
    return CutoffIntegralConfig(rb_over_r0 * r0, r0, n_prime, tolerance);
}

namespace {

void check_density_consistency(const ModelParameters& params, const CutoffIntegralConfig& config) {
    const double shell_volume =
        unit_ball_volume(params.d) * (std::pow(config.r0, static_cast<double>(params.d)) -
                                      std::pow(config.rb, static_cast<double>(params.d)));
    const double implied = params.density * shell_volume;
    const double target = static_cast<double>(config.n_prime);
    if (std::abs(implied - target) > 1e-6 * target) {
        throw ValidationError("cutoff shell holds " + std::to_string(implied) +
                              " spins at the model density, expected " +
                              std::to_string(config.n_prime));
    }
}

RelaxationCurve cutoff_curve(const ModelParameters& params, const CutoffIntegralConfig& config,
                             const TimeGrid& grid, int j, Observable obs) {
    check_density_consistency(params, config);
    const std::vector<double> w = harmonic_weights(j);

    RelaxationCurve curve;
    curve.grid = grid;
    curve.values.reserve(grid.size());
    for (std::size_t t = 0; t < grid.size(); ++t) {
        const double tau = grid[t];
        double avg = 0.0;
        double err = 0.0;
        for (int i = 0; i <= j; ++i) {
            const int m = j - 2 * i;
            if (m < 0) break;  // |j-2i| mirrors the i < j/2 half
            const double weight = (2 * i == j) ? w[static_cast<std::size_t>(i)]
                                               : 2.0 * w[static_cast<std::size_t>(i)];
            if (m == 0) {
                avg += weight;
                continue;
            }
            const ShellAverage sa = shell_cosine_average(params.d, params.alpha, params.c_alpha,
                                                         config.rb, config.r0, m * tau);
            avg += weight * sa.value;
            err += weight * sa.error_bound;
        }
        if (err > config.tolerance) {
            throw QuadratureFailure("shell average error bound " + std::to_string(err) +
                                    " above tolerance at tau = " + std::to_string(tau));
        }
        const double power = integer_power(avg, config.n_prime - 1);
        curve.values.push_back(obs == Observable::magnetization ? 0.5 * power : power);
    }
    curve.observable = obs;
    curve.moment_j = j;
    curve.meta.d = params.d;
    curve.meta.alpha = params.alpha;
    curve.meta.c_alpha = params.c_alpha;
    curve.meta.n_spins = static_cast<std::size_t>(config.n_prime);
    curve.meta.n_samples = 1;
    curve.meta.r0 = config.r0;
    curve.meta.rb = config.rb;
    curve.meta.x = static_cast<double>(config.n_prime) *
                   std::pow(config.rb / config.r0, static_cast<double>(params.d));
    curve.meta.jnn = continuum_median_nn_coupling(params);
    curve.validate();
    return curve;
}

}  // namespace

RelaxationCurve verify_thermodynamic_limit(const ModelParameters& params,
                                           const CutoffIntegralConfig& config,
                                           const TimeGrid& grid) {
    return cutoff_curve(params, config, grid, 1, Observable::magnetization);
}

RelaxationCurve verify_moment_limit(int j, const ModelParameters& params,
                                    const CutoffIntegralConfig& config, const TimeGrid& grid) {
    check_moment_order(j);
    return cutoff_curve(params, config, grid, j, Observable::moment);
}

RelaxationCurve analytic_magnetization_curve(const ModelParameters& params, const TimeGrid& grid,
                                             double chi) {
    return closed_form_curve(1, params, grid, chi, Observable::magnetization);
}

RelaxationCurve analytic_purity_curve(const ModelParameters& params, const TimeGrid& grid,
                                      double chi) {
    return closed_form_curve(2, params, grid, chi, Observable::purity);
}

RelaxationCurve analytic_moment_curve(int j, const ModelParameters& params, const TimeGrid& grid,
                                      double chi) {
    return closed_form_curve(j, params, grid, chi, Observable::moment);
}

}  // namespace glassy
