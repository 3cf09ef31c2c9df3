#include "glassy/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "glassy/errors.hpp"

namespace glassy {

namespace {

constexpr double kPi = std::numbers::pi;

GaussLegendreRule compute_gauss_legendre(int order) {
    // Nodes are roots of the Legendre polynomial P_n, found by Newton
    // iteration from the Chebyshev-like initial guess; weights follow from
    // the derivative. Symmetric pairs are filled together.
    GaussLegendreRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int half = (order + 1) / 2;
    for (int k = 0; k < half; ++k) {
        double x = std::cos(kPi * (k + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre recurrence for P_n(x) and P'_n(x).
            double p0 = 1.0;
            double p1 = x;
            for (int n = 2; n <= order; ++n) {
                const double p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[k] = -x;
        rule.nodes[order - 1 - k] = x;
        rule.weights[k] = w;
        rule.weights[order - 1 - k] = w;
    }
    if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
    return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int order) {
    if (order < 1) throw ValidationError("gauss_legendre: order must be positive");
    static std::mutex mutex;
    static std::map<int, GaussLegendreRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
    return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int order) {
    const GaussLegendreRule& rule = gauss_legendre(order);
    const double mid = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < order; ++i) sum += rule.weights[i] * f(mid + hw * rule.nodes[i]);
    return hw * sum;
}

namespace {

struct AdaptiveState {
    const std::function<double(double)>* f;
    int order;
    double unresolved = 0.0;  // error mass left where max_depth ran out
};

double adapt(AdaptiveState& st, double a, double b, double whole, double tol, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = integrate_gl(*st.f, a, mid, st.order);
    const double right = integrate_gl(*st.f, mid, b, st.order);
    const double est = std::abs(left + right - whole);
    if (est <= tol || mid <= a || mid >= b) return left + right;
    if (depth <= 0) {
        st.unresolved += est;
        return left + right;
    }
    return adapt(st, a, mid, left, 0.5 * tol, depth - 1) +
           adapt(st, mid, b, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const AdaptiveOptions& opts) {
    if (!(a < b)) {
        if (a == b) return 0.0;
        throw ValidationError("integrate_adaptive: bad interval");
    }
    AdaptiveState st{&f, opts.base_order};
    const double whole = integrate_gl(f, a, b, opts.base_order);
    // First pass with the absolute tolerance, then check the relative one
    // against the converged value.
    double result = adapt(st, a, b, whole, opts.abs_tol, opts.max_depth);
    const double bound = std::max(opts.abs_tol, opts.rel_tol * std::abs(result));
    if (st.unresolved > bound) {
        throw QuadratureFailure("integrate_adaptive: tolerance not reached, residual " +
                                std::to_string(st.unresolved));
    }
    return result;
}

double integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b,
                           double tol) {
    if (!(a < b)) {
        if (a == b) return 0.0;
        throw ValidationError("integrate_tanh_sinh: bad interval");
    }
    const double hw = 0.5 * (b - a);
    constexpr double kTMax = 4.0;  // weights are ~1e-37 of peak beyond this

    // Trapezoid sum over the transformed axis at step h, abscissae
    // x = mid + hw*tanh((pi/2) sinh t). new_only sums just the odd nodes so
    // each refinement reuses previous work. The abscissae are formed as
    // offsets from the endpoints, 1 - tanh(u) = 2/(1 + e^(2u)), because
    // tanh(u) rounds to 1 beyond u ~ 19 and evaluating f exactly at an
    // endpoint would silently drop the singular tail's remaining mass.
    const auto node_sum = [&](double h, bool new_only) {
        double sum = 0.0;
        const int kmax = static_cast<int>(std::ceil(kTMax / h));
        for (int k = new_only ? 1 : 0; k <= kmax; k += new_only ? 2 : 1) {
            const double t = k * h;
            const double u = 0.5 * kPi * std::sinh(t);
            const double ch = std::cosh(u);
            const double w = 0.5 * kPi * std::cosh(t) / (ch * ch);
            const double off = 2.0 * hw / (1.0 + std::exp(2.0 * u));
            double part = w * f(b - off);
            if (k > 0) part += w * f(a + off);
            if (std::isfinite(part)) sum += part;
        }
        return sum;
    };

    double h = 1.0;
    double total = node_sum(h, false);
    double prev = hw * h * total;
    for (int level = 0; level < 12; ++level) {
        h *= 0.5;
        total += node_sum(h, true);
        const double cur = hw * h * total;
        if (level >= 2 && std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur))) {
            return cur;
        }
        prev = cur;
    }
    throw QuadratureFailure("integrate_tanh_sinh: no convergence to tolerance");
}

OscillatoryTail cosine_power_tail(double s, double x) {
    // Repeated integration by parts of int_x^inf u^(-p) cos(u) du with
    // p = s + 1 gives an asymptotic series in inverse powers of x:
    //   I_c(p) = -sin(x) x^(-p) + p cos(x) x^(-p-1) - p(p+1) I_c(p+2).
    // The remainder after truncation is bounded by |mult| * x^(1-p)/(p-1).
    OscillatoryTail out;
    const double sx = std::sin(x);
    const double cx = std::cos(x);
    double mult = 1.0;
    double p = s + 1.0;
    double prev_bound = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 40; ++k) {
        out.value += mult * (-sx * std::pow(x, -p) + p * cx * std::pow(x, -p - 1.0));
        mult *= -p * (p + 1.0);
        p += 2.0;
        const double bound = std::abs(mult) * std::pow(x, 1.0 - p) / (p - 1.0);
        if (bound >= prev_bound) {  // asymptotic series started diverging
            out.error_bound = prev_bound;
            return out;
        }
        prev_bound = bound;
        if (bound < 1e-18) {
            out.error_bound = bound;
            return out;
        }
    }
    out.error_bound = prev_bound;
    return out;
}

double integer_power(double base, long long exponent) {
    if (exponent < 0) throw ValidationError("integer_power: exponent must be >= 0");
    double result = 1.0;
    double b = base;
    long long e = exponent;
    while (e > 0) {
        if (e & 1) result *= b;
        b *= b;
        e >>= 1;
    }
    return result;
}

namespace {

// int_a^b u^(-s-1) (cos(u) - 1) du for b <= pi/2 (both ends below the first
// cosine zero), by the Taylor series of cos. Term k integrates to
// (-1)^k/(2k)! * (b^(2k-s) - a^(2k-s))/(2k-s); all exponents are positive.
double head_series(double s, double a, double b) {
    double sum = 0.0;
    double factorial = 1.0;  // (2k)!
    double sign = 1.0;
    for (int k = 1; k <= 60; ++k) {
        factorial *= (2.0 * k - 1.0) * (2.0 * k);
        sign = -sign;
        const double e = 2.0 * k - s;
        const double term = sign / factorial * (std::pow(b, e) - std::pow(a, e)) / e;
        sum += term;
        if (std::abs(term) <= 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return sum;
}

// One smooth panel of int u^(-s-1) cos(u) du by Gauss-Legendre, with the
// 16-vs-8 point difference accumulated as error estimate.
double panel_cos(double s, double a, double b, double& err) {
    const auto f = [s](double u) { return std::pow(u, -s - 1.0) * std::cos(u); };
    const double i16 = integrate_gl(f, a, b, 16);
    const double i8 = integrate_gl(f, a, b, 8);
    err += std::abs(i16 - i8);
    return i16;
}

// int_start^b u^(-s-1) cos(u) du for start >= pi/2. Half-period panels
// between consecutive cosine zeros alternate in sign under the decaying
// envelope; after a fixed number of panels the rest is summed by parts.
double oscillatory_cos(double s, double start, double b, double& err) {
    constexpr int kMaxPanels = 64;
    double total = 0.0;
    double pos = start;
    // First zero at or beyond start.
    long long j = static_cast<long long>(std::ceil((start - 0.5 * kPi) / kPi));
    if (j < 0) j = 0;
    double z = 0.5 * kPi + static_cast<double>(j) * kPi;
    if (z > pos) {
        const double e = std::min(b, z);
        total += panel_cos(s, pos, e, err);
        if (b <= z) return total;
        pos = z;
    }
    for (int k = 0; k < kMaxPanels; ++k) {
        const double znext = pos + kPi;
        if (znext >= b) {
            total += panel_cos(s, pos, b, err);
            return total;
        }
        total += panel_cos(s, pos, znext, err);
        pos = znext;
    }
    const OscillatoryTail t1 = cosine_power_tail(s, pos);
    total += t1.value;
    err += t1.error_bound;
    if (std::isfinite(b)) {
        const OscillatoryTail t2 = cosine_power_tail(s, b);
        total -= t2.value;
        err += t2.error_bound;
    }
    return total;
}

}  // namespace

ShellAverage shell_cosine_average(int d, double alpha, double c_alpha, double rb, double r0,
                                  double tau) {
    if (d < 1 || alpha <= 0.0 || c_alpha <= 0.0 || rb < 0.0 || !(rb < r0)) {
        throw ValidationError("shell_cosine_average: invalid geometry");
    }
    if (tau < 0.0) throw ValidationError("shell_cosine_average: negative time");
    if (tau == 0.0) return {1.0, 0.0};

    const double s = static_cast<double>(d) / alpha;
    const double w = 2.0 * c_alpha * tau;
    const double a = w / std::pow(r0, alpha);
    const double b = rb > 0.0 ? w / std::pow(rb, alpha)
                              : std::numeric_limits<double>::infinity();

    // The exactly integrable part int u^(-s-1) du carries the full weight of
    // the average: prefactor * (a^-s - b^-s)/s == 1 identically, so only the
    // (cos - 1) remainder is computed numerically and added to 1. This keeps
    // the small-tau regime, where the average is 1 - O(tau^s), fully accurate.
    double iosc = 0.0;
    double err = 0.0;
    const double c1 = std::min(b, 0.5 * kPi);
    if (a < c1) iosc += head_series(s, a, c1);
    const double start = std::max(a, 0.5 * kPi);
    if (b > start) {
        const double b_pow = std::isfinite(b) ? std::pow(b, -s) : 0.0;
        iosc += (b_pow - std::pow(start, -s)) / s;
        iosc += oscillatory_cos(s, start, b, err);
    }

    const double rd = std::pow(r0, static_cast<double>(d));
    const double rbd = rb > 0.0 ? std::pow(rb, static_cast<double>(d)) : 0.0;
    const double pref = d * std::pow(w, s) / (alpha * (rd - rbd));

    ShellAverage out;
    out.value = 1.0 + pref * iosc;
    out.error_bound = pref * err + 1e-16;
    return out;
}

}  // namespace glassy
