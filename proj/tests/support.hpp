#pragma once

// Small self-contained numeric helpers for the tests. Everything here is
// written against std:: only, independently of the library's quadrature, so
// it can serve as an oracle for it.

#include <cmath>
#include <cstddef>
#include <numbers>

namespace testsupport {

template <typename F>
double simpson(F f, double a, double b, std::size_t intervals) {
    if (intervals % 2 == 1) ++intervals;
    const double h = (b - a) / static_cast<double>(intervals);
    double odd = 0.0, even = 0.0;
    for (std::size_t i = 1; i < intervals; i += 2) odd += f(a + h * static_cast<double>(i));
    for (std::size_t i = 2; i < intervals; i += 2) even += f(a + h * static_cast<double>(i));
    return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

// integral_x^infty cos(t) t^(-1-s) dt by repeated integration by parts,
// usable once x is a few dozen; remainder after the last kept term is below
// term ~ x^(-7-s).
inline double cos_tail(double s, double x) {
    double p = 1.0 + s;
    double mult = 1.0;
    double value = 0.0;
    for (int k = 0; k < 3; ++k) {
        value += mult * (-std::sin(x) * std::pow(x, -p) + p * std::cos(x) * std::pow(x, -p - 1.0));
        mult *= -p * (p + 1.0);
        p += 2.0;
    }
    return value;
}

// integral_0^infty (1 - cos t) t^(-1-s) dt for 0 < s < 1: series head on
// [0, pi], per-half-period Simpson panels to K pi, exact power tail plus the
// integration-by-parts cosine tail beyond.
inline double one_minus_cos_integral(double s) {
    const double pi = std::numbers::pi;

    // (1 - cos t) t^(-1-s) = sum_{k >= 1} (-1)^(k+1) t^(2k-1-s) / (2k)!
    double head = 0.0;
    double fact = 1.0;  // (2k)!
    double sign = 1.0;
    for (int k = 1; k <= 60; ++k) {
        fact *= static_cast<double>(2 * k - 1) * static_cast<double>(2 * k);
        const double term = sign * std::pow(pi, 2.0 * k - s) / (fact * (2.0 * k - s));
        head += term;
        if (std::fabs(term) < 1e-18 * std::fabs(head)) break;
        sign = -sign;
    }

    const int panels = 2000;
    double middle = 0.0;
    for (int j = 1; j <= panels; ++j) {
        const double a = pi * static_cast<double>(j);
        const double b = a + pi;
        middle += simpson(
            [s](double t) { return (1.0 - std::cos(t)) * std::pow(t, -1.0 - s); }, a, b, 64);
    }

    const double big = pi * static_cast<double>(panels + 1);
    const double power_tail = std::pow(big, -s) / s;
    return head + middle + power_tail - cos_tail(s, big);
}

}  // namespace testsupport
