#include "glassy/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <unordered_map>

#include "glassy/numeric.hpp"

namespace glassy {

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2)
        throw ValidationError("log_spaced needs 0 < lo < hi and n >= 2");
    std::vector<double> v(n);
    double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(n - 1));
    v.front() = lo;
    v.back() = hi;
    return v;
}

double unit_ball_volume(int d) {
    if (d < 1) throw ValidationError("dimension must be >= 1");
    return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

BallGeometry::BallGeometry(int d_, double r0_, double rb_) : d(d_), r0(r0_), rb(rb_) {
    if (d < 1) throw ValidationError("dimension must be >= 1");
    if (!(r0 > 0.0)) throw ValidationError("ball radius must be positive");
    if (!(rb >= 0.0) || !(rb < 2.0 * r0))
        throw ValidationError("exclusion radius must satisfy 0 <= rb < 2*r0");
}

double BallGeometry::volume() const { return unit_ball_volume(d) * std::pow(r0, d); }

double distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        double diff = a[c] - b[c];
        s += diff * diff;
    }
    return std::sqrt(s);
}

namespace {

double norm2(std::span<const double> p) {
    double s = 0.0;
    for (double x : p) s += x * x;
    return s;
}

void validate_positions(const BallGeometry& g, const std::vector<double>& pos) {
    if (pos.empty() || pos.size() % g.d != 0)
        throw ValidationError("position array size is not a multiple of d");
    std::size_t n = pos.size() / g.d;
    const double r0sq = g.r0 * g.r0;
    const double rbsq = g.rb * g.rb;
    for (std::size_t i = 0; i < n; ++i) {
        std::span<const double> pi{pos.data() + i * g.d, static_cast<std::size_t>(g.d)};
        if (!(norm2(pi) < r0sq)) throw ValidationError("spin outside the ball");
        for (std::size_t k = 0; k < i; ++k) {
            std::span<const double> pk{pos.data() + k * g.d, static_cast<std::size_t>(g.d)};
            double s = 0.0;
            for (int c = 0; c < g.d; ++c) {
                double diff = pi[c] - pk[c];
                s += diff * diff;
            }
            if (s < rbsq) throw ValidationError("spin pair closer than the exclusion radius");
        }
    }
}

} // namespace

SpinConfiguration::SpinConfiguration(BallGeometry geometry, std::vector<double> positions,
                                     std::uint64_t seed)
    : geometry_(geometry), positions_(std::move(positions)), seed_(seed) {
    validate_positions(geometry_, positions_);
    n_ = positions_.size() / geometry_.d;
}

SpinConfiguration::SpinConfiguration(Trusted, BallGeometry geometry,
                                     std::vector<double> positions, std::uint64_t seed)
    : geometry_(geometry), positions_(std::move(positions)),
      n_(positions_.size() / geometry.d), seed_(seed) {}

void sample_uniform_ball(int d, double r0, Rng& rng, std::span<double> out) {
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (int c = 0; c < d; ++c) {
            out[c] = rng.normal();
            n2 += out[c] * out[c];
        }
    } while (n2 == 0.0);
    double r = r0 * std::pow(rng.uniform(), 1.0 / d) / std::sqrt(n2);
    for (int c = 0; c < d; ++c) out[c] *= r;
}

namespace {

// Flat-array accept list with an optional uniform cell grid.  The grid only
// accelerates the conflict query; accept/reject decisions are identical to
// the brute-force scan.
class ConflictIndex {
public:
    ConflictIndex(const BallGeometry& g, std::size_t n_expected) : g_(g) {
        use_grid_ = g.rb > 0.0 && g.d <= 3 && n_expected > 10000;
        if (use_grid_) {
            cells_per_dim_ = static_cast<long>(std::floor(2.0 * g.r0 / g.rb)) + 1;
        }
    }

    bool conflicts(const std::vector<double>& pts, std::span<const double> p) const {
        const double rbsq = g_.rb * g_.rb;
        const int d = g_.d;
        if (!use_grid_) {
            std::size_t n = pts.size() / d;
            for (std::size_t i = 0; i < n; ++i) {
                double s = 0.0;
                for (int c = 0; c < d; ++c) {
                    double diff = p[c] - pts[i * d + c];
                    s += diff * diff;
                }
                if (s < rbsq) return true;
            }
            return false;
        }
        long base[3] = {0, 0, 0};
        cell_of(p, base);
        long lo[3], hi[3];
        for (int c = 0; c < d; ++c) {
            lo[c] = base[c] - 1;
            hi[c] = base[c] + 1;
        }
        long idx[3] = {0, 0, 0};
        return scan_cells(pts, p, rbsq, lo, hi, idx, 0);
    }

    void insert(const std::vector<double>& pts, std::size_t i) {
        if (!use_grid_) return;
        long c[3] = {0, 0, 0};
        cell_of({pts.data() + i * g_.d, static_cast<std::size_t>(g_.d)}, c);
        grid_[key(c)].push_back(i);
    }

private:
    void cell_of(std::span<const double> p, long* c) const {
        for (int k = 0; k < g_.d; ++k)
            c[k] = static_cast<long>(std::floor((p[k] + g_.r0) / g_.rb));
    }
    std::uint64_t key(const long* c) const {
        std::uint64_t h = 0;
        for (int k = 0; k < g_.d; ++k)
            h = h * static_cast<std::uint64_t>(cells_per_dim_ + 3) +
                static_cast<std::uint64_t>(c[k] + 1);
        return h;
    }
    bool scan_cells(const std::vector<double>& pts, std::span<const double> p, double rbsq,
                    const long* lo, const long* hi, long* idx, int depth) const {
        if (depth == g_.d) {
            auto it = grid_.find(key(idx));
            if (it == grid_.end()) return false;
            for (std::size_t i : it->second) {
                double s = 0.0;
                for (int c = 0; c < g_.d; ++c) {
                    double diff = p[c] - pts[i * g_.d + c];
                    s += diff * diff;
                }
                if (s < rbsq) return true;
            }
            return false;
        }
        for (long v = lo[depth]; v <= hi[depth]; ++v) {
            idx[depth] = v;
            if (scan_cells(pts, p, rbsq, lo, hi, idx, depth + 1)) return true;
        }
        return false;
    }

    BallGeometry g_;
    bool use_grid_ = false;
    long cells_per_dim_ = 0;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid_;
};

} // namespace

SpinConfiguration sample_rsa(std::size_t n, const BallGeometry& geometry, std::uint64_t seed,
                             std::size_t max_attempts) {
    if (n < 1) throw ValidationError("need at least one spin");
    if (max_attempts == 0) max_attempts = 1000 * n;

    Rng rng(seed);
    std::vector<double> pts;
    pts.reserve(n * geometry.d);
    ConflictIndex index(geometry, n);
    std::vector<double> proposal(geometry.d);

    std::size_t rejections = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (;;) {
            sample_uniform_ball(geometry.d, geometry.r0, rng, proposal);
            if (geometry.rb == 0.0 || !index.conflicts(pts, proposal)) {
                pts.insert(pts.end(), proposal.begin(), proposal.end());
                index.insert(pts, i);
                break;
            }
            if (++rejections > max_attempts) throw PackingFailure(i, n, rejections - 1);
        }
    }
    return SpinConfiguration(SpinConfiguration::Trusted{}, geometry, std::move(pts), seed);
}

DisorderParameter disorder_parameter(const SpinConfiguration& config) {
    const BallGeometry& g = config.geometry();
    double x = static_cast<double>(config.size()) * std::pow(g.rb / g.r0, g.d);
    return DisorderParameter{x};
}

double exclusion_radius_for_x(double x, std::size_t n, int d, double r0) {
    if (x < 0.0) throw ValidationError("disorder parameter must be >= 0");
    if (x == 0.0) return 0.0;
    return r0 * std::pow(x / static_cast<double>(n), 1.0 / d);
}

} // namespace glassy
