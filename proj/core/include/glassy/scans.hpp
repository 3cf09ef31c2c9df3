#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "glassy/dynamics.hpp"
#include "glassy/fitting.hpp"

namespace glassy {

// One disorder strength in a beta-vs-x sweep. A failed packing or fit leaves
// ok = false with the reason in note; the scan continues.
struct DisorderScanPoint {
    double x = 0.0;
    double rb = 0.0;
    double jnn = 0.0;
    StretchedExpFit magnetization;
    StretchedExpFit purity;
    bool ok = false;
    bool packing_failed = false;
    std::string note;
};

struct DisorderScanResult {
    int d = 0;
    double alpha = 0.0;
    std::size_t n_spins = 0;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
    std::vector<DisorderScanPoint> points;
    // Mean fitted beta over the successful points with x <= 0.01.
    double plateau_beta_magnetization = 0.0;
    double plateau_beta_purity = 0.0;
    std::size_t plateau_points = 0;
};

// Sweeps the disorder parameter at fixed N: each x maps to an exclusion
// radius, drives a disorder-averaged run, and fits both observables.
// x = 0 means unconstrained uniform positions. Pass grid_jnn to override the
// default time window (in nearest-neighbour units).
DisorderScanResult scan_beta_vs_disorder(int d, double alpha, std::size_t n_spins,
                                         std::size_t n_samples, std::span<const double> x_values,
                                         std::uint64_t master_seed, unsigned threads = 1,
                                         const TimeGrid* grid_jnn = nullptr);

// One (N, rb) cell of a finite-size scan.
struct SizeScanCell {
    std::size_t n_spins = 0;
    double rb = 0.0;
    double x = 0.0;
    double jnn = 0.0;
    StretchedExpFit magnetization;
    StretchedExpFit purity;
    bool ok = false;
    std::string note;
};

// Per-observable aggregation: beta averaged over the exclusion radii at each
// N, its deviation from d/alpha, the scatter-based standard error, and the
// power law fitted to the deviations. Deviations below 1% of d/alpha (or
// non-positive) stay out of the power-law fit, mirroring the resolution floor
// of the fitted betas.
struct SizeScanSeries {
    std::vector<double> mean_beta;
    std::vector<double> deviation;
    std::vector<double> sem;
    std::vector<std::size_t> power_law_n;  // N values that entered the fit
    PowerLawFit power_law;
    bool power_law_ok = false;
    std::string power_law_note;
};

struct SizeScanResult {
    int d = 0;
    double alpha = 0.0;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
    std::vector<std::size_t> n_values;
    std::vector<double> rb_set;
    std::vector<SizeScanCell> cells;  // n_values major, rb_set minor
    SizeScanSeries magnetization;
    SizeScanSeries purity;
};

// Finite-size scan: every N runs once per exclusion radius, betas are
// averaged over the radii, and the deviation from d/alpha feeds a power-law
// fit in N. An empty rb_set defaults to five radii log-spaced over
// x in [1e-4, 1e-2] at the largest N; a provided set must keep x <= 0.01
// at the largest N.
SizeScanResult scan_beta_vs_N(int d, double alpha, std::span<const std::size_t> n_values,
                              std::size_t n_samples, std::span<const double> rb_set,
                              std::uint64_t master_seed, unsigned threads = 1);

// Table defaults for the convergence-exponent sweep, per dimension.
struct SizeScanDefaults {
    std::vector<std::size_t> n_values_magnetization;
    std::size_t n_samples_magnetization = 0;
    std::vector<std::size_t> n_values_purity;
    std::size_t n_samples_purity = 0;
};

SizeScanDefaults default_size_scan_lists(int d);

struct PTableEntry {
    int d = 0;
    double alpha = 0.0;
    PowerLawFit magnetization;
    PowerLawFit purity;
    bool magnetization_ok = false;
    bool purity_ok = false;
    std::string note;
    SizeScanResult magnetization_scan;
    SizeScanResult purity_scan;  // equals magnetization_scan unless the lists differ
};

struct PTableOptions {
    // Empty -> every integer alpha from d to 10 for d = 1, 2, 3.
    std::vector<std::pair<int, double>> cases;
    // Non-empty values override the per-dimension defaults (for scaled-down runs).
    std::vector<std::size_t> n_values_magnetization;
    std::vector<std::size_t> n_values_purity;
    std::size_t n_samples_magnetization = 0;
    std::size_t n_samples_purity = 0;
};

struct PTableResult {
    std::uint64_t seed = 0;
    std::vector<PTableEntry> entries;
};

// Convergence exponent p for a grid of (d, alpha) cases. In one dimension the
// two observables use different size ranges, so each case may run two scans.
PTableResult scan_p_table(const PTableOptions& options, std::uint64_t master_seed,
                          unsigned threads = 1);

// Time window used by the scans when none is given: log-spaced in
// nearest-neighbour units, upper end clipped where the closed-form decay
// reaches exp(-8) so fully decayed noise stays out of the fits.
TimeGrid scan_time_grid(int d, double alpha);

}  // namespace glassy
