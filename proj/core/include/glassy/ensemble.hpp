#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "glassy/errors.hpp"
#include "glassy/rng.hpp"

namespace glassy {

double unit_ball_volume(int d);

// Sampling region: a d-dimensional ball of radius r0 with a hard-core
// exclusion distance rb between spin centers (rb = 0 disables exclusion).
struct BallGeometry {
    int d = 3;
    double r0 = 1.0;
    double rb = 0.0;

    BallGeometry() = default;
    BallGeometry(int d_, double r0_, double rb_ = 0.0);

    double volume() const; // v_d * r0^d
};

// Positions of N spins inside a ball, stored row-major (N x d).  Construction
// validates the geometry invariants; sample_rsa builds instances through a
// trusted path since its accept loop already enforces them.
class SpinConfiguration {
public:
    SpinConfiguration(BallGeometry geometry, std::vector<double> positions,
                      std::uint64_t seed);

    std::size_t size() const { return n_; }
    const BallGeometry& geometry() const { return geometry_; }
    std::uint64_t seed() const { return seed_; }

    std::span<const double> position(std::size_t i) const {
        return {positions_.data() + i * geometry_.d, static_cast<std::size_t>(geometry_.d)};
    }
    const std::vector<double>& positions() const { return positions_; }

private:
    struct Trusted {};
    SpinConfiguration(Trusted, BallGeometry geometry, std::vector<double> positions,
                      std::uint64_t seed);
    friend SpinConfiguration sample_rsa(std::size_t, const BallGeometry&, std::uint64_t,
                                        std::size_t);

    BallGeometry geometry_;
    std::vector<double> positions_;
    std::size_t n_ = 0;
    std::uint64_t seed_ = 0;
};

// Dimensionless disorder strength x = N rb^d / r0^d.  The strong-disorder
// regime (near-ideal-gas positional statistics) is x <= 0.01.
struct DisorderParameter {
    double x = 0.0;
    bool strongly_disordered() const { return x <= 0.01; }
};

double distance(std::span<const double> a, std::span<const double> b);

// One point uniform in the d-ball (radial CDF (r/r0)^d): isotropic Gaussian
// direction times radius r0 * u^(1/d).  Writes d coordinates to out.
void sample_uniform_ball(int d, double r0, Rng& rng, std::span<double> out);

// Random sequential adsorption: spins are inserted one at a time, and a
// proposal conflicting with any accepted spin (distance < rb) is redrawn from
// the same stream.  max_attempts bounds the total number of rejected
// proposals; 0 means the default budget of 1000*N.  Throws PackingFailure
// when the budget runs out.
SpinConfiguration sample_rsa(std::size_t n, const BallGeometry& geometry,
                             std::uint64_t seed, std::size_t max_attempts = 0);

DisorderParameter disorder_parameter(const SpinConfiguration& config);

// Exclusion radius reproducing a requested disorder parameter x at given N.
double exclusion_radius_for_x(double x, std::size_t n, int d, double r0);

} // namespace glassy
