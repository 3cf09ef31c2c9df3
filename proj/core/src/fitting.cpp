#include "glassy/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "glassy/errors.hpp"

namespace glassy {

namespace {

struct FitData {
    std::vector<double> tau;
    std::vector<double> y;
};

double start_value(Observable obs) {
    switch (obs) {
    case Observable::magnetization: return 0.5;
    case Observable::purity: return 1.0;
    case Observable::moment: return 1.0;
    }
    return 1.0;
}

// Applies the observable transform and the fit window.
FitData select_window(const RelaxationCurve& curve, std::optional<double> baseline) {
    if (curve.values.size() != curve.grid.size()) {
        throw ValidationError("curve length does not match its grid");
    }
    const bool purity = curve.observable == Observable::purity;
    const double shift = purity ? 0.5 : baseline.value_or(0.0);
    const double scale = purity ? 2.0 : 1.0;
    const double initial = scale * (start_value(curve.observable) - shift);

    FitData data;
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        const double tau = curve.grid[i];
        if (tau <= 0.0) continue;
        const double y = scale * (curve.values[i] - shift);
        if (!(y > 0.0) || !(y < initial)) continue;
        if (!curve.errors.empty()) {
            const double err = scale * curve.errors[i];
            if (y < 10.0 * err) continue;
        }
        data.tau.push_back(tau);
        data.y.push_back(y);
    }
    if (data.y.size() < 10) {
        throw InsufficientData("need at least 10 usable points inside the decay window, have " +
                               std::to_string(data.y.size()));
    }
    const auto [lo, hi] = std::minmax_element(data.y.begin(), data.y.end());
    if (*lo > 0.9 * *hi) {
        throw DegenerateCurve("curve does not decay within the grid");
    }
    return data;
}

struct Params {
    double a, g, b;
};

Params clamp_params(Params p) {
    p.a = std::clamp(p.a, 1e-12, 1.1);
    p.g = std::clamp(p.g, 1e-300, 1e300);
    p.b = std::clamp(p.b, 1e-6, 1.5);
    return p;
}

double cost_of(const FitData& d, const Params& p) {
    double rss = 0.0;
    for (std::size_t k = 0; k < d.y.size(); ++k) {
        const double u = std::pow(p.g * d.tau[k], p.b);
        const double r = p.a * std::exp(-u) - d.y[k];
        rss += r * r;
    }
    return rss;
}

// residual jacobian products: fills J^T J (row-major) and J^T r.
void normal_equations(const FitData& d, const Params& p, double jtj[9], double jtr[3]) {
    std::fill(jtj, jtj + 9, 0.0);
    std::fill(jtr, jtr + 3, 0.0);
    for (std::size_t k = 0; k < d.y.size(); ++k) {
        const double gt = p.g * d.tau[k];
        const double u = std::pow(gt, p.b);
        const double e = std::exp(-u);
        const double r = p.a * e - d.y[k];
        const double j0 = e;
        const double j1 = -p.a * e * p.b * u / p.g;
        const double j2 = -p.a * e * u * std::log(gt);
        const double j[3] = {j0, j1, j2};
        for (int i = 0; i < 3; ++i) {
            jtr[i] += j[i] * r;
            for (int m = i; m < 3; ++m) jtj[3 * i + m] += j[i] * j[m];
        }
    }
    jtj[3] = jtj[1];
    jtj[6] = jtj[2];
    jtj[7] = jtj[5];
}

// 3x3 linear solve with partial pivoting; returns false when singular.
bool solve3(const double a_in[9], const double b_in[3], double x[3]) {
    double a[12];
    for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 3; ++k) a[4 * i + k] = a_in[3 * i + k];
        a[4 * i + 3] = b_in[i];
    }
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int i = col + 1; i < 3; ++i) {
            if (std::abs(a[4 * i + col]) > std::abs(a[4 * pivot + col])) pivot = i;
        }
        if (std::abs(a[4 * pivot + col]) < 1e-300) return false;
        if (pivot != col) {
            for (int k = 0; k < 4; ++k) std::swap(a[4 * col + k], a[4 * pivot + k]);
        }
        for (int i = col + 1; i < 3; ++i) {
            const double f = a[4 * i + col] / a[4 * col + col];
            for (int k = col; k < 4; ++k) a[4 * i + k] -= f * a[4 * col + k];
        }
    }
    for (int i = 2; i >= 0; --i) {
        double s = a[4 * i + 3];
        for (int k = i + 1; k < 3; ++k) s -= a[4 * i + k] * x[k];
        x[i] = s / a[4 * i + i];
    }
    return true;
}

bool invert3(const double a[9], double inv[9]) {
    const double det = a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
                       a[2] * (a[3] * a[7] - a[4] * a[6]);
    if (!(std::abs(det) > 1e-300)) return false;
    inv[0] = (a[4] * a[8] - a[5] * a[7]) / det;
    inv[1] = (a[2] * a[7] - a[1] * a[8]) / det;
    inv[2] = (a[1] * a[5] - a[2] * a[4]) / det;
    inv[3] = (a[5] * a[6] - a[3] * a[8]) / det;
    inv[4] = (a[0] * a[8] - a[2] * a[6]) / det;
    inv[5] = (a[2] * a[3] - a[0] * a[5]) / det;
    inv[6] = (a[3] * a[7] - a[4] * a[6]) / det;
    inv[7] = (a[1] * a[6] - a[0] * a[7]) / det;
    inv[8] = (a[0] * a[4] - a[1] * a[3]) / det;
    return true;
}

Params initial_guess(const FitData& d, const RelaxationCurve& curve) {
    Params p{};
    p.a = d.y.front();
    p.b = 0.7;
    if (curve.meta.d >= 1 && curve.meta.alpha >= curve.meta.d) {
        p.b = static_cast<double>(curve.meta.d) / curve.meta.alpha;
    }
    const double target = p.a / std::numbers::e;
    p.g = 0.0;
    for (std::size_t k = 0; k < d.y.size(); ++k) {
        if (d.y[k] < target) {
            p.g = 1.0 / d.tau[k];
            break;
        }
    }
    if (p.g == 0.0) {
        // Curve never crossed A/e; place the rate from the last point instead.
        const double drop = std::log(p.a / d.y.back());
        p.g = drop > 0.0 ? std::pow(drop, 1.0 / p.b) / d.tau.back() : 1.0 / d.tau.back();
    }
    return clamp_params(p);
}

}  // namespace

StretchedExpFit fit_stretched_exponential(const RelaxationCurve& curve,
                                          std::optional<double> baseline) {
    const FitData data = select_window(curve, baseline);
    Params p = initial_guess(data, curve);

    double cost = cost_of(data, p);
    double lambda = 1e-3;
    bool converged = false;
    double jtj[9], jtr[3];
    for (int iter = 0; iter < 200; ++iter) {
        normal_equations(data, p, jtj, jtr);
        double damped[9];
        std::copy(jtj, jtj + 9, damped);
        for (int i = 0; i < 3; ++i) {
            damped[4 * i] += lambda * std::max(jtj[4 * i], 1e-300);
        }
        double rhs[3] = {-jtr[0], -jtr[1], -jtr[2]};
        double step[3];
        if (!solve3(damped, rhs, step)) {
            lambda *= 10.0;
            if (lambda > 1e12) break;
            continue;
        }
        const Params trial = clamp_params({p.a + step[0], p.g + step[1], p.b + step[2]});
        const double trial_cost = cost_of(data, trial);
        if (trial_cost <= cost) {
            const double rel_step =
                std::max({std::abs(trial.a - p.a) / (std::abs(p.a) + 1e-30),
                          std::abs(trial.g - p.g) / (std::abs(p.g) + 1e-30),
                          std::abs(trial.b - p.b) / (std::abs(p.b) + 1e-30)});
            const double rel_drop = (cost - trial_cost) / (cost + 1e-300);
            p = trial;
            cost = trial_cost;
            lambda = std::max(lambda / 3.0, 1e-14);
            if (rel_step < 1e-12 || rel_drop < 1e-14 || cost < 1e-30) {
                converged = true;
                break;
            }
        } else {
            lambda *= 4.0;
            if (lambda > 1e12) break;  // stagnation: report converged = false
        }
    }

    StretchedExpFit fit;
    fit.amplitude = p.a;
    fit.gamma = p.g;
    fit.beta = p.b;
    fit.converged = converged;
    fit.residual_norm = std::sqrt(cost);
    fit.n_points = data.y.size();
    normal_equations(data, p, jtj, jtr);
    double inv[9];
    if (invert3(jtj, inv)) {
        const double dof = static_cast<double>(data.y.size()) - 3.0;
        const double sigma2 = dof > 0.0 ? cost / dof : 0.0;
        for (int i = 0; i < 9; ++i) fit.covariance[i] = sigma2 * inv[i];
    }
    return fit;
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("power-law fit needs matching coordinates");
    if (x.size() < 3) {
        throw InsufficientData("power-law fit needs at least 3 points, have " +
                               std::to_string(x.size()));
    }
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            throw NonPositiveValue("power-law fit requires strictly positive coordinates");
        }
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw ValidationError("power-law fit needs distinct x values");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = ly[i] - (intercept + slope * lx[i]);
        ss_res += r * r;
    }
    PowerLawFit fit;
    fit.prefactor = std::exp(intercept);
    fit.exponent = -slope;
    fit.stderr_p = std::sqrt(ss_res / ((n - 2.0) * sxx));
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

}  // namespace glassy
