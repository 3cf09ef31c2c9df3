#include "glassy/couplings.hpp"

#include <algorithm>
#include <cmath>

namespace glassy {

Anisotropy Anisotropy::dipolar() {
    Anisotropy a;
    a.name = "dipolar";
    a.weight = [](std::span<const double> u) {
        double c = u[u.size() - 1];
        return 1.0 - 3.0 * c * c;
    };
    return a;
}

CouplingModel::CouplingModel(double alpha_, double c_alpha_, Anisotropy a)
    : alpha(alpha_), c_alpha(c_alpha_), anisotropy(std::move(a)) {
    if (!(alpha > 0.0)) throw ValidationError("interaction exponent must be positive");
    if (!(c_alpha > 0.0)) throw ValidationError("coupling constant must be positive");
}

CouplingMatrix coupling_matrix(const SpinConfiguration& config, const CouplingModel& model) {
    const std::size_t n = config.size();
    const int d = config.geometry().d;
    CouplingMatrix m(n);
    std::vector<double> unit(d);
    for (std::size_t i = 0; i < n; ++i) {
        auto pi = config.position(i);
        for (std::size_t k = i + 1; k < n; ++k) {
            auto pk = config.position(k);
            double r = distance(pi, pk);
            if (r == 0.0) throw DegenerateGeometry("coincident spins have no finite coupling");
            double j = model.c_alpha / std::pow(r, model.alpha);
            if (!model.anisotropy.isotropic()) {
                for (int c = 0; c < d; ++c) unit[c] = (pk[c] - pi[c]) / r;
                j *= model.anisotropy.weight(unit);
            }
            if (!std::isfinite(j)) throw DegenerateGeometry("non-finite coupling");
            m.set(i, k, j);
        }
    }
    return m;
}

std::vector<double> strongest_couplings(const CouplingMatrix& matrix) {
    const std::size_t n = matrix.size();
    if (n < 2) throw InsufficientSpins("nearest-neighbour statistics need N >= 2");
    std::vector<double> strongest(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double best = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i) continue;
            best = std::max(best, std::abs(matrix.at(i, k)));
        }
        strongest[i] = best;
    }
    return strongest;
}

double median_nn_coupling(const CouplingMatrix& matrix) {
    std::vector<double> s = strongest_couplings(matrix);
    std::sort(s.begin(), s.end());
    std::size_t n = s.size();
    if (n % 2 == 1) return s[n / 2];
    return 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

} // namespace glassy
