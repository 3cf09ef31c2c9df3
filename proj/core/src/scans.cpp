#include "glassy/scans.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

#include "glassy/analytic.hpp"
#include "glassy/ensemble.hpp"
#include "glassy/errors.hpp"
#include "glassy/rng.hpp"

namespace glassy {

namespace {

constexpr std::size_t kGridPoints = 80;
constexpr double kGridLowJnn = 1e-2;
constexpr double kGridHighCap = 100.0;
constexpr double kPlateauCutoff = 0.01;   // x range that counts as strongly disordered
constexpr double kDeviationFloor = 0.01;  // relative to d/alpha, see power-law fit

struct PointRun {
    double jnn = 0.0;
    StretchedExpFit magnetization;
    StretchedExpFit purity;
    bool ok = false;
    bool packing_failed = false;
    std::string note;
};

// One disorder-averaged run plus fits of both observables. Packing and fit
// failures are reported through the result, not thrown; the caller decides
// whether a missing point matters.
PointRun run_point(int d, double alpha, std::size_t n_spins, std::size_t n_samples, double rb,
                   std::uint64_t seed, unsigned threads, const TimeGrid& grid_jnn) {
    PointRun out;
    try {
        EnsembleTask task;
        task.geometry = BallGeometry(d, 1.0, rb);
        task.n_spins = n_spins;
        task.model = CouplingModel(alpha, 1.0);
        task.n_samples = n_samples;
        task.master_seed = seed;
        task.threads = threads;

        const std::array<int, 2> js{1, 2};
        EnsembleRun run = ensemble_run(task, grid_jnn, js);
        out.jnn = run.jnn;

        RelaxationCurve mag = to_magnetization(run.moments.curves[0]);
        RelaxationCurve pur = to_purity(run.moments.curves[1]);
        out.magnetization = fit_stretched_exponential(mag);
        out.purity = fit_stretched_exponential(pur);
        if (!out.magnetization.converged || !out.purity.converged) {
            out.note = "fit did not converge";
            return out;
        }
        out.ok = true;
    } catch (const PackingFailure& e) {
        out.packing_failed = true;
        out.note = e.what();
    } catch (const std::exception& e) {
        out.note = e.what();
    }
    return out;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sem_of(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double n = static_cast<double>(v.size());
    return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

SizeScanSeries aggregate_series(const SizeScanResult& scan, bool use_purity, double beta_inf) {
    SizeScanSeries series;
    const std::size_t n_radii = scan.rb_set.size();
    std::vector<double> fit_n;
    std::vector<double> fit_dev;
    for (std::size_t i = 0; i < scan.n_values.size(); ++i) {
        std::vector<double> betas;
        for (std::size_t k = 0; k < n_radii; ++k) {
            const SizeScanCell& cell = scan.cells[i * n_radii + k];
            if (!cell.ok) continue;
            betas.push_back(use_purity ? cell.purity.beta : cell.magnetization.beta);
        }
        if (betas.empty()) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            series.mean_beta.push_back(nan);
            series.deviation.push_back(nan);
            series.sem.push_back(nan);
            continue;
        }
        const double mean = mean_of(betas);
        series.mean_beta.push_back(mean);
        series.deviation.push_back(beta_inf - mean);
        series.sem.push_back(sem_of(betas, mean));
    }
    // Deviations within the fit resolution of zero would bend the power law,
    // so only points clearly above the floor enter it.
    for (std::size_t i = 0; i < scan.n_values.size(); ++i) {
        const double dev = series.deviation[i];
        if (!std::isfinite(dev) || dev < kDeviationFloor * beta_inf) continue;
        fit_n.push_back(static_cast<double>(scan.n_values[i]));
        fit_dev.push_back(dev);
        series.power_law_n.push_back(scan.n_values[i]);
    }
    try {
        series.power_law = fit_power_law(fit_n, fit_dev);
        series.power_law_ok = true;
    } catch (const std::exception& e) {
        series.power_law_note = e.what();
        series.power_law_n.clear();
    }
    return series;
}

}  // namespace

TimeGrid scan_time_grid(int d, double alpha) {
    // In nearest-neighbour units the ensemble decay constant is universal for
    // given (d, alpha), so the window can stop where the signal has dropped to
    // exp(-8): points beyond that are noise and would only dilute the fits.
    const ModelParameters params(d, alpha, 1.0, 1.0);
    const double s = static_cast<double>(d) / alpha;
    const double a = decay_coefficient(params) / std::pow(continuum_median_nn_coupling(params), s);
    const double u_cut = std::pow(8.0 / a, 1.0 / s);
    const double hi = std::min(kGridHighCap, u_cut);
    return TimeGrid::log_spaced(kGridLowJnn, std::max(hi, kGridLowJnn * 10.0), kGridPoints);
}

DisorderScanResult scan_beta_vs_disorder(int d, double alpha, std::size_t n_spins,
                                         std::size_t n_samples, std::span<const double> x_values,
                                         std::uint64_t master_seed, unsigned threads,
                                         const TimeGrid* grid_jnn) {
    if (x_values.empty()) throw ValidationError("scan_beta_vs_disorder: no x values");
    const TimeGrid grid = grid_jnn ? *grid_jnn : scan_time_grid(d, alpha);

    DisorderScanResult result;
    result.d = d;
    result.alpha = alpha;
    result.n_spins = n_spins;
    result.n_samples = n_samples;
    result.seed = master_seed;
    result.points.reserve(x_values.size());

    std::vector<double> plateau_mag;
    std::vector<double> plateau_pur;
    for (std::size_t i = 0; i < x_values.size(); ++i) {
        const double x = x_values[i];
        const double rb = exclusion_radius_for_x(x, n_spins, d, 1.0);
        PointRun run = run_point(d, alpha, n_spins, n_samples, rb,
                                 derive_stream_seed(master_seed, i), threads, grid);
        DisorderScanPoint point;
        point.x = x;
        point.rb = rb;
        point.jnn = run.jnn;
        point.magnetization = run.magnetization;
        point.purity = run.purity;
        point.ok = run.ok;
        point.packing_failed = run.packing_failed;
        point.note = std::move(run.note);
        if (point.ok && x <= kPlateauCutoff) {
            plateau_mag.push_back(point.magnetization.beta);
            plateau_pur.push_back(point.purity.beta);
        }
        result.points.push_back(std::move(point));
    }
    result.plateau_points = plateau_mag.size();
    if (!plateau_mag.empty()) {
        result.plateau_beta_magnetization = mean_of(plateau_mag);
        result.plateau_beta_purity = mean_of(plateau_pur);
    }
    return result;
}

SizeScanResult scan_beta_vs_N(int d, double alpha, std::span<const std::size_t> n_values,
                              std::size_t n_samples, std::span<const double> rb_set,
                              std::uint64_t master_seed, unsigned threads) {
    if (n_values.empty()) throw ValidationError("scan_beta_vs_N: no system sizes");
    const std::size_t n_max = *std::max_element(n_values.begin(), n_values.end());

    SizeScanResult result;
    result.d = d;
    result.alpha = alpha;
    result.n_samples = n_samples;
    result.seed = master_seed;
    result.n_values.assign(n_values.begin(), n_values.end());

    if (rb_set.empty()) {
        // Five radii spanning the strongly disordered regime at the largest
        // size; at smaller N the same radii sit even deeper inside it.
        const double x_lo = 1e-4;
        const double x_hi = 1e-2;
        const int k = 5;
        for (int i = 0; i < k; ++i) {
            const double t = static_cast<double>(i) / (k - 1);
            const double x = x_lo * std::pow(x_hi / x_lo, t);
            result.rb_set.push_back(exclusion_radius_for_x(x, n_max, d, 1.0));
        }
    } else {
        for (double rb : rb_set) {
            const double x_at_max = static_cast<double>(n_max) * std::pow(rb, d);
            if (!(rb >= 0.0) || x_at_max > kPlateauCutoff) {
                throw ValidationError(
                    "scan_beta_vs_N: exclusion radius leaves the strongly disordered regime "
                    "at the largest size");
            }
        }
        result.rb_set.assign(rb_set.begin(), rb_set.end());
    }

    const TimeGrid grid = scan_time_grid(d, alpha);
    const std::size_t n_radii = result.rb_set.size();
    result.cells.reserve(result.n_values.size() * n_radii);
    for (std::size_t i = 0; i < result.n_values.size(); ++i) {
        for (std::size_t k = 0; k < n_radii; ++k) {
            const std::size_t n = result.n_values[i];
            const double rb = result.rb_set[k];
            PointRun run = run_point(d, alpha, n, n_samples, rb,
                                     derive_stream_seed(master_seed, i * n_radii + k), threads,
                                     grid);
            SizeScanCell cell;
            cell.n_spins = n;
            cell.rb = rb;
            cell.x = static_cast<double>(n) * std::pow(rb, d);
            cell.jnn = run.jnn;
            cell.magnetization = run.magnetization;
            cell.purity = run.purity;
            cell.ok = run.ok;
            cell.note = std::move(run.note);
            result.cells.push_back(std::move(cell));
        }
    }

    const double beta_inf = static_cast<double>(d) / alpha;
    result.magnetization = aggregate_series(result, false, beta_inf);
    result.purity = aggregate_series(result, true, beta_inf);
    return result;
}

SizeScanDefaults default_size_scan_lists(int d) {
    SizeScanDefaults out;
    switch (d) {
        case 1:
            // Tiny chains decay so slowly that the magnetization needs very
            // small N to show a deviation, while the purity already converges
            // there; hence the split ranges.
            out.n_values_magnetization = {2, 3, 4, 6, 8, 10};
            out.n_samples_magnetization = 20000;
            out.n_values_purity = {10, 20, 40, 70, 100};
            out.n_samples_purity = 4000;
            break;
        case 2:
            out.n_values_magnetization = {50, 100, 200, 400, 800};
            out.n_samples_magnetization = 200;
            out.n_values_purity = out.n_values_magnetization;
            out.n_samples_purity = 200;
            break;
        case 3:
            out.n_values_magnetization = {100, 200, 400, 800, 1300};
            out.n_samples_magnetization = 200;
            out.n_values_purity = out.n_values_magnetization;
            out.n_samples_purity = 200;
            break;
        default:
            throw ValidationError("default_size_scan_lists: dimension must be 1, 2, or 3");
    }
    return out;
}

PTableResult scan_p_table(const PTableOptions& options, std::uint64_t master_seed,
                          unsigned threads) {
    std::vector<std::pair<int, double>> cases = options.cases;
    if (cases.empty()) {
        for (int d = 1; d <= 3; ++d) {
            for (int a = d; a <= 10; ++a) cases.emplace_back(d, static_cast<double>(a));
        }
    }

    PTableResult result;
    result.seed = master_seed;
    result.entries.reserve(cases.size());

    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        const auto [d, alpha] = cases[ci];
        PTableEntry entry;
        entry.d = d;
        entry.alpha = alpha;
        try {
            SizeScanDefaults lists = default_size_scan_lists(d);
            if (!options.n_values_magnetization.empty())
                lists.n_values_magnetization = options.n_values_magnetization;
            if (!options.n_values_purity.empty()) lists.n_values_purity = options.n_values_purity;
            if (options.n_samples_magnetization > 0)
                lists.n_samples_magnetization = options.n_samples_magnetization;
            if (options.n_samples_purity > 0) lists.n_samples_purity = options.n_samples_purity;

            const bool shared = lists.n_values_magnetization == lists.n_values_purity &&
                                lists.n_samples_magnetization == lists.n_samples_purity;
            entry.magnetization_scan =
                scan_beta_vs_N(d, alpha, lists.n_values_magnetization,
                               lists.n_samples_magnetization, {},
                               derive_stream_seed(master_seed, 2 * ci), threads);
            entry.purity_scan = shared ? entry.magnetization_scan
                                       : scan_beta_vs_N(d, alpha, lists.n_values_purity,
                                                        lists.n_samples_purity, {},
                                                        derive_stream_seed(master_seed, 2 * ci + 1),
                                                        threads);
            entry.magnetization = entry.magnetization_scan.magnetization.power_law;
            entry.magnetization_ok = entry.magnetization_scan.magnetization.power_law_ok;
            entry.purity = entry.purity_scan.purity.power_law;
            entry.purity_ok = entry.purity_scan.purity.power_law_ok;
            if (!entry.magnetization_ok)
                entry.note = entry.magnetization_scan.magnetization.power_law_note;
            else if (!entry.purity_ok)
                entry.note = entry.purity_scan.purity.power_law_note;
        } catch (const std::exception& e) {
            entry.note = e.what();
        }
        result.entries.push_back(std::move(entry));
    }
    return result;
}

}  // namespace glassy
