#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "glassy/ensemble.hpp"

namespace glassy {

// Optional angular weight multiplying the radial power law.  The weight is
// evaluated on the unit separation vector and may be negative (signed
// couplings are kept as-is).
struct Anisotropy {
    std::string name = "none";
    std::function<double(std::span<const double>)> weight; // empty means isotropic

    bool isotropic() const { return !weight; }

    static Anisotropy none() { return {}; }
    // 1 - 3 cos^2(theta) with theta measured from the last coordinate axis
    static Anisotropy dipolar();
};

// J(r) = c_alpha * f(direction) / |r|^alpha
struct CouplingModel {
    double alpha = 6.0;
    double c_alpha = 1.0;
    Anisotropy anisotropy;

    CouplingModel() = default;
    CouplingModel(double alpha_, double c_alpha_, Anisotropy a = {});
};

// Dense symmetric pair-coupling matrix with zero diagonal.
class CouplingMatrix {
public:
    CouplingMatrix() = default;
    explicit CouplingMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double at(std::size_t i, std::size_t k) const { return values_[i * n_ + k]; }
    void set(std::size_t i, std::size_t k, double j) {
        values_[i * n_ + k] = j;
        values_[k * n_ + i] = j;
    }
    const std::vector<double>& values() const { return values_; }

private:
    std::size_t n_ = 0;
    std::vector<double> values_;
};

// Throws DegenerateGeometry on coincident spins (zero pair distance).
CouplingMatrix coupling_matrix(const SpinConfiguration& config, const CouplingModel& model);

// Median over spins of each spin's strongest |J|; the natural interaction
// time unit of a disordered configuration.  Throws InsufficientSpins for N < 2.
double median_nn_coupling(const CouplingMatrix& matrix);

// Strongest |J| per spin (one entry per spin), the statistic median_nn_coupling
// is the median of.
std::vector<double> strongest_couplings(const CouplingMatrix& matrix);

} // namespace glassy
