#include "glassy/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "glassy/numeric.hpp"

namespace glassy {

std::string observable_name(Observable obs, int moment_j) {
    switch (obs) {
    case Observable::magnetization: return "magnetization";
    case Observable::purity: return "purity";
    case Observable::moment: return "moment" + std::to_string(moment_j);
    }
    return "unknown";
}

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
    if (times_.empty()) throw ValidationError("time grid is empty");
    if (times_.front() < 0.0) throw ValidationError("times must be >= 0");
    for (std::size_t i = 1; i < times_.size(); ++i)
        if (!(times_[i] > times_[i - 1]))
            throw ValidationError("time grid must be strictly increasing");
}

TimeGrid TimeGrid::log_spaced(double lo, double hi, std::size_t n) {
    return TimeGrid(glassy::log_spaced(lo, hi, n));
}

TimeGrid default_jnn_grid(std::size_t points) { return TimeGrid::log_spaced(1e-2, 1e2, points); }

void RelaxationCurve::validate() const {
    if (values.size() != grid.size())
        throw ValidationError("curve length does not match its grid");
    if (!errors.empty() && errors.size() != values.size())
        throw ValidationError("error band length does not match the curve");
    const double tol = 1e-9;
    double lo = -1.0 - tol, hi = 1.0 + tol, start = 1.0;
    switch (observable) {
    case Observable::magnetization: lo = -0.5 - tol; hi = 0.5 + tol; start = 0.5; break;
    case Observable::purity: lo = 0.5 - tol; hi = 1.0 + tol; start = 1.0; break;
    case Observable::moment: start = 1.0; break;
    }
    for (double v : values)
        if (!(v >= lo && v <= hi)) throw ValidationError("curve value out of range");
    if (!grid.empty() && grid[0] == 0.0 && std::abs(values[0] - start) > 1e-12)
        throw ValidationError("curve does not start at its t=0 value");
}

// ---------------------------------------------------------------------------
// single-configuration products
// ---------------------------------------------------------------------------

double spin_magnetization(const CouplingMatrix& matrix, std::size_t i, double tau) {
    const std::size_t n = matrix.size();
    double prod = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k == i) continue;
        prod *= std::cos(2.0 * matrix.at(i, k) * tau);
    }
    return prod;
}

std::vector<double> spin_magnetizations(const CouplingMatrix& matrix, double tau) {
    std::vector<double> m(matrix.size());
    for (std::size_t i = 0; i < matrix.size(); ++i) m[i] = spin_magnetization(matrix, i, tau);
    return m;
}

namespace {
// Phase threshold separating explicitly evaluated pairs from the quadratic
// log-cos tail.  Folding error per pair is (2Jt)^4/12 ~ 1e-17.
constexpr double kPhaseCut = 1e-4;
} // namespace

ProductEvaluator::ProductEvaluator(const CouplingMatrix& matrix) : n_(matrix.size()) {
    const std::size_t row = n_ > 0 ? n_ - 1 : 0;
    sorted_j_.resize(n_ * row);
    suffix_sq_.resize(n_ * n_);
    std::vector<double> tmp(row);
    for (std::size_t i = 0; i < n_; ++i) {
        std::size_t m = 0;
        for (std::size_t k = 0; k < n_; ++k)
            if (k != i) tmp[m++] = std::abs(matrix.at(i, k));
        std::sort(tmp.begin(), tmp.end(), std::greater<double>());
        std::copy(tmp.begin(), tmp.end(), sorted_j_.begin() + i * row);
        // suffix sums accumulate smallest magnitudes first
        double acc = 0.0;
        suffix_sq_[i * n_ + row] = 0.0;
        for (std::size_t l = row; l-- > 0;) {
            acc += tmp[l] * tmp[l];
            suffix_sq_[i * n_ + l] = acc;
        }
    }
}

void ProductEvaluator::eval(double tau, std::span<const int> js,
                            std::vector<std::vector<double>>& out) const {
    out.resize(js.size());
    for (auto& v : out) v.assign(n_, 1.0);
    if (tau == 0.0 || n_ < 2) return;

    const std::size_t row = n_ - 1;
    const double thr = kPhaseCut / (2.0 * tau); // |J| >= thr is evaluated explicitly
    for (std::size_t i = 0; i < n_; ++i) {
        const double* jrow = sorted_j_.data() + i * row;
        const double* sfx = suffix_sq_.data() + i * n_;
        std::size_t near = std::lower_bound(jrow, jrow + row, thr, std::greater<double>()) - jrow;
        for (std::size_t l = 0; l < near; ++l) {
            double c = std::cos(2.0 * jrow[l] * tau);
            double cp = 1.0;
            int have = 0;
            for (std::size_t ji = 0; ji < js.size(); ++ji) {
                while (have < js[ji]) {
                    cp *= c;
                    ++have;
                }
                out[ji][i] *= cp;
            }
        }
        double base = std::exp(-2.0 * tau * tau * sfx[near]);
        double bp = 1.0;
        int have = 0;
        for (std::size_t ji = 0; ji < js.size(); ++ji) {
            while (have < js[ji]) {
                bp *= base;
                ++have;
            }
            out[ji][i] *= bp;
        }
    }
}

std::vector<RelaxationCurve> moment_curves(const CouplingMatrix& matrix, const TimeGrid& grid,
                                           std::span<const int> js) {
    for (int j : js)
        if (j < 1) throw ValidationError("moment exponent must be >= 1");
    std::vector<int> sorted(js.begin(), js.end());
    if (!std::is_sorted(sorted.begin(), sorted.end()))
        throw ValidationError("moment exponents must be given in increasing order");

    ProductEvaluator eval(matrix);
    std::vector<RelaxationCurve> curves(js.size());
    for (std::size_t ji = 0; ji < js.size(); ++ji) {
        curves[ji].grid = grid;
        curves[ji].values.resize(grid.size());
        curves[ji].observable = Observable::moment;
        curves[ji].moment_j = js[ji];
        curves[ji].meta.n_spins = matrix.size();
    }
    std::vector<std::vector<double>> prods;
    for (std::size_t t = 0; t < grid.size(); ++t) {
        eval.eval(grid[t], js, prods);
        for (std::size_t ji = 0; ji < js.size(); ++ji)
            curves[ji].values[t] = pairwise_mean(prods[ji]);
    }
    return curves;
}

RelaxationCurve to_magnetization(const RelaxationCurve& moment1) {
    if (moment1.observable != Observable::moment || moment1.moment_j != 1)
        throw ValidationError("to_magnetization expects a first-moment curve");
    RelaxationCurve c = moment1;
    c.observable = Observable::magnetization;
    c.moment_j = 1;
    for (double& v : c.values) v *= 0.5;
    for (double& e : c.errors) e *= 0.5;
    return c;
}

RelaxationCurve to_purity(const RelaxationCurve& moment2) {
    if (moment2.observable != Observable::moment || moment2.moment_j != 2)
        throw ValidationError("to_purity expects a second-moment curve");
    RelaxationCurve c = moment2;
    c.observable = Observable::purity;
    c.moment_j = 2;
    for (double& v : c.values) v = 0.5 * (1.0 + v);
    for (double& e : c.errors) e *= 0.5;
    return c;
}

RelaxationCurve magnetization_curve(const CouplingMatrix& matrix, const TimeGrid& grid) {
    const int js[] = {1};
    return to_magnetization(moment_curves(matrix, grid, js)[0]);
}

RelaxationCurve moment_curve(const CouplingMatrix& matrix, const TimeGrid& grid, int j) {
    const int js[] = {j};
    return moment_curves(matrix, grid, js)[0];
}

RelaxationCurve purity_curve(const CouplingMatrix& matrix, const TimeGrid& grid) {
    const int js[] = {2};
    return to_purity(moment_curves(matrix, grid, js)[0]);
}

SpinHistogram spin_histogram(const CouplingMatrix& matrix, double tau, std::size_t bins) {
    if (bins < 1) throw ValidationError("need at least one histogram bin");
    SpinHistogram h;
    h.time = tau;
    h.n_spins = matrix.size();
    h.bin_edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b)
        h.bin_edges[b] = -1.0 + 2.0 * static_cast<double>(b) / static_cast<double>(bins);
    h.counts.assign(bins, 0);
    for (double m : spin_magnetizations(matrix, tau)) {
        auto b = static_cast<long>(std::floor((m + 1.0) * 0.5 * static_cast<double>(bins)));
        b = std::clamp(b, 0l, static_cast<long>(bins) - 1);
        ++h.counts[static_cast<std::size_t>(b)];
    }
    return h;
}

// ---------------------------------------------------------------------------
// disorder ensembles
// ---------------------------------------------------------------------------

namespace {

unsigned resolve_threads(unsigned requested, std::size_t tasks) {
    unsigned t = requested == 0 ? std::thread::hardware_concurrency() : requested;
    if (t == 0) t = 1;
    return static_cast<unsigned>(std::min<std::size_t>(t, tasks));
}

// Run fn(r) for r in [0, tasks) on a small pool.  Any worker exception is
// rethrown in the caller once all workers joined.
template <typename Fn>
void parallel_for_index(std::size_t tasks, unsigned threads, Fn&& fn) {
    threads = resolve_threads(threads, tasks);
    if (threads <= 1) {
        for (std::size_t r = 0; r < tasks; ++r) fn(r);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t r = next.fetch_add(1);
            if (r >= tasks) return;
            try {
                fn(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(tasks);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Median over spins of the strongest coupling magnitude. For isotropic models
// the strongest partner is simply the closest one, so only distances are
// needed; the matrix path would spend an N^2 pow() just to be thrown away.
// Both branches produce bit-identical values (same distance expression, same
// single pow per surviving pair).
double sample_jnn(const SpinConfiguration& config, const CouplingModel& model) {
    if (!model.anisotropy.isotropic())
        return median_nn_coupling(coupling_matrix(config, model));
    const std::size_t n = config.size();
    std::vector<double> r_min(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
        auto pi = config.position(i);
        for (std::size_t k = i + 1; k < n; ++k) {
            double r = distance(pi, config.position(k));
            if (r == 0.0) throw DegenerateGeometry("coincident spins have no finite coupling");
            r_min[i] = std::min(r_min[i], r);
            r_min[k] = std::min(r_min[k], r);
        }
    }
    std::vector<double> strongest(n);
    for (std::size_t i = 0; i < n; ++i)
        strongest[i] = model.c_alpha / std::pow(r_min[i], model.alpha);
    return median_of(std::move(strongest));
}

CurveMeta task_meta(const EnsembleTask& task) {
    CurveMeta m;
    m.d = task.geometry.d;
    m.alpha = task.model.alpha;
    m.c_alpha = task.model.c_alpha;
    m.anisotropy = task.model.anisotropy.name;
    m.n_spins = task.n_spins;
    m.n_samples = task.n_samples;
    m.r0 = task.geometry.r0;
    m.rb = task.geometry.rb;
    m.x = static_cast<double>(task.n_spins) *
          std::pow(task.geometry.rb / task.geometry.r0, task.geometry.d);
    m.seed = task.master_seed;
    return m;
}

} // namespace

EnsembleMoments ensemble_moments(const EnsembleTask& task, const TimeGrid& grid,
                                 std::span<const int> js) {
    if (task.n_samples < 1) throw ValidationError("ensemble needs at least one realization");
    const std::size_t ns = task.n_samples;
    const std::size_t nt = grid.size();
    const std::size_t nj = js.size();

    // slab[r * nj * nt + ji * nt + t], filled independently per realization
    std::vector<double> slab(ns * nj * nt);
    std::vector<double> jnn(ns);

    parallel_for_index(ns, task.threads, [&](std::size_t r) {
        SpinConfiguration config =
            sample_rsa(task.n_spins, task.geometry, derive_stream_seed(task.master_seed, r));
        CouplingMatrix matrix = coupling_matrix(config, task.model);
        jnn[r] = task.n_spins >= 2 ? median_nn_coupling(matrix) : 0.0;
        ProductEvaluator eval(matrix);
        std::vector<std::vector<double>> prods;
        for (std::size_t t = 0; t < nt; ++t) {
            eval.eval(grid[t], js, prods);
            for (std::size_t ji = 0; ji < nj; ++ji)
                slab[r * nj * nt + ji * nt + t] = pairwise_mean(prods[ji]);
        }
    });

    EnsembleMoments result;
    result.grid = grid;
    result.js.assign(js.begin(), js.end());
    result.jnn = median_of(jnn);
    result.curves.resize(nj);

    CurveMeta meta = task_meta(task);
    meta.jnn = result.jnn;

    std::vector<double> column(ns);
    for (std::size_t ji = 0; ji < nj; ++ji) {
        RelaxationCurve& c = result.curves[ji];
        c.grid = grid;
        c.observable = Observable::moment;
        c.moment_j = js[ji];
        c.meta = meta;
        c.values.resize(nt);
        c.errors.assign(nt, 0.0);
        for (std::size_t t = 0; t < nt; ++t) {
            for (std::size_t r = 0; r < ns; ++r) column[r] = slab[r * nj * nt + ji * nt + t];
            double mean = pairwise_mean(column);
            c.values[t] = mean;
            if (ns > 1) {
                std::vector<double> sq(ns);
                for (std::size_t r = 0; r < ns; ++r) {
                    double dev = column[r] - mean;
                    sq[r] = dev * dev;
                }
                c.errors[t] = std::sqrt(pairwise_sum(sq) /
                                        (static_cast<double>(ns - 1) * static_cast<double>(ns)));
            }
        }
    }
    return result;
}

RelaxationCurve ensemble_average(const EnsembleTask& task, const TimeGrid& grid, Observable obs,
                                 int moment_j) {
    int j = obs == Observable::magnetization ? 1 : obs == Observable::purity ? 2 : moment_j;
    const int js[] = {j};
    EnsembleMoments m = ensemble_moments(task, grid, js);
    switch (obs) {
    case Observable::magnetization: return to_magnetization(m.curves[0]);
    case Observable::purity: return to_purity(m.curves[0]);
    case Observable::moment: return m.curves[0];
    }
    throw ValidationError("unknown observable");
}

EnsembleRun ensemble_run(const EnsembleTask& task, const TimeGrid& grid_in_jnn_units,
                         std::span<const int> js) {
    if (task.n_spins < 2) throw InsufficientSpins("time-unit calibration needs N >= 2");
    const std::size_t ns = task.n_samples;

    // calibration pass: ensemble-median J_NN over the same realization seeds
    std::vector<double> jnn(ns);
    parallel_for_index(ns, task.threads, [&](std::size_t r) {
        SpinConfiguration config =
            sample_rsa(task.n_spins, task.geometry, derive_stream_seed(task.master_seed, r));
        jnn[r] = sample_jnn(config, task.model);
    });
    double scale = median_of(jnn);
    if (!(scale > 0.0)) throw DegenerateGeometry("ensemble-median coupling is not positive");

    std::vector<double> phys(grid_in_jnn_units.size());
    for (std::size_t t = 0; t < phys.size(); ++t) phys[t] = grid_in_jnn_units[t] / scale;

    EnsembleRun run;
    run.grid_jnn = grid_in_jnn_units;
    run.jnn = scale;
    run.moments = ensemble_moments(task, TimeGrid(std::move(phys)), js);
    return run;
}

} // namespace glassy
