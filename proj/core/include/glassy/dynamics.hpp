#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "glassy/couplings.hpp"
#include "glassy/ensemble.hpp"

namespace glassy {

enum class Observable { magnetization, purity, moment };

std::string observable_name(Observable obs, int moment_j = 1);

// Provenance attached to every curve; enough to re-run the computation.
struct CurveMeta {
    int d = 0;
    double alpha = 0.0;
    double c_alpha = 1.0;
    std::string anisotropy = "none";
    std::size_t n_spins = 0;
    std::size_t n_samples = 1;
    double r0 = 0.0;
    double rb = 0.0;
    double x = 0.0;
    std::uint64_t seed = 0;
    double jnn = 0.0; // ensemble-median nearest-neighbour coupling, 0 = unset
};

class TimeGrid {
public:
    TimeGrid() = default;
    explicit TimeGrid(std::vector<double> times); // strictly increasing, all >= 0

    static TimeGrid log_spaced(double lo, double hi, std::size_t n);

    std::size_t size() const { return times_.size(); }
    double operator[](std::size_t i) const { return times_[i]; }
    const std::vector<double>& times() const { return times_; }
    bool empty() const { return times_.empty(); }

private:
    std::vector<double> times_;
};

// Time-resolved observable with optional per-point standard error (present
// for disorder-averaged curves, absent for single realizations).
struct RelaxationCurve {
    TimeGrid grid;
    std::vector<double> values;
    std::vector<double> errors; // empty or same length as values
    Observable observable = Observable::magnetization;
    int moment_j = 1;
    CurveMeta meta;

    void validate() const; // range invariants and the t=0 starting value
};

struct SpinHistogram {
    double time = 0.0;
    std::vector<double> bin_edges; // bins+1 uniform edges over [-1, 1]
    std::vector<std::size_t> counts;
    std::size_t n_spins = 0;
};

// ---------------------------------------------------------------------------
// Single-configuration evaluation
// ---------------------------------------------------------------------------

// <sigma_x^i(t)> = prod_{k != i} cos(2 J_ik t), the exact single-spin
// coherence of one disorder realization.
double spin_magnetization(const CouplingMatrix& matrix, std::size_t i, double tau);
std::vector<double> spin_magnetizations(const CouplingMatrix& matrix, double tau);

// Precomputed per-spin coupling tables for evaluating cos-power products over
// many times.  Pairs whose phase 2|J|t is below a fixed threshold contribute
// through their summed J^2 (log cos x = -x^2/2 + O(x^4)), which keeps the
// per-time cost proportional to the number of dynamically active pairs
// instead of N^2.  The folding error per spin is below 1e-13.
class ProductEvaluator {
public:
    explicit ProductEvaluator(const CouplingMatrix& matrix);

    std::size_t size() const { return n_; }

    // out[ji][i] = prod_{k != i} cos(2 J_ik tau)^js[ji]
    void eval(double tau, std::span<const int> js,
              std::vector<std::vector<double>>& out) const;

private:
    std::size_t n_ = 0;
    std::vector<double> sorted_j_;   // per spin, |J| descending, pitch n-1
    std::vector<double> suffix_sq_;  // per spin, suffix sums of J^2, pitch n
};

// Spin-averaged cos-power curves, one pass over pair phases per time point:
// moment j is (1/N) sum_i prod_k cos^j(2 J_ik t).
std::vector<RelaxationCurve> moment_curves(const CouplingMatrix& matrix, const TimeGrid& grid,
                                           std::span<const int> js);

RelaxationCurve magnetization_curve(const CouplingMatrix& matrix, const TimeGrid& grid);
RelaxationCurve moment_curve(const CouplingMatrix& matrix, const TimeGrid& grid, int j);
RelaxationCurve purity_curve(const CouplingMatrix& matrix, const TimeGrid& grid);

SpinHistogram spin_histogram(const CouplingMatrix& matrix, double tau, std::size_t bins);

// ---------------------------------------------------------------------------
// Exact reference
// ---------------------------------------------------------------------------

struct OracleCurves {
    RelaxationCurve magnetization;
    RelaxationCurve purity;
};

// Full 2^N state-vector evolution (the Hamiltonian is diagonal in the z
// basis) with per-spin reduced density matrices contracted exactly.
// Throws TooLarge for N > 24.
OracleCurves exact_oracle(const CouplingMatrix& matrix, const TimeGrid& grid);

// ---------------------------------------------------------------------------
// Disorder ensembles
// ---------------------------------------------------------------------------

struct EnsembleTask {
    BallGeometry geometry;
    std::size_t n_spins = 0;
    CouplingModel model;
    std::size_t n_samples = 1;
    std::uint64_t master_seed = 0;
    unsigned threads = 1; // 0 = hardware concurrency
};

// Ensemble-averaged raw moment curves (one per requested j) sharing one set
// of disorder realizations, plus the ensemble-median nearest-neighbour
// coupling.  Realization r uses the derived stream seed (master_seed, r);
// reductions are in fixed realization order, so results are independent of
// the thread count.
struct EnsembleMoments {
    TimeGrid grid;
    std::vector<int> js;
    std::vector<RelaxationCurve> curves; // parallel to js
    double jnn = 0.0;
};

EnsembleMoments ensemble_moments(const EnsembleTask& task, const TimeGrid& grid,
                                 std::span<const int> js);

RelaxationCurve ensemble_average(const EnsembleTask& task, const TimeGrid& grid,
                                 Observable obs, int moment_j = 1);

// Derived-observable views of raw moment curves.
RelaxationCurve to_magnetization(const RelaxationCurve& moment1);
RelaxationCurve to_purity(const RelaxationCurve& moment2);

// Two-pass run with the grid given in units of the inverse median
// nearest-neighbour coupling: a calibration pass over the same realization
// seeds fixes the ensemble-median J_NN, the physical grid is the requested
// one divided by it, and the evaluation pass shares that grid across all
// realizations.
struct EnsembleRun {
    EnsembleMoments moments;
    TimeGrid grid_jnn; // the requested grid, J_NN units
    double jnn = 0.0;  // calibrated scale: physical t = grid_jnn / jnn
};

EnsembleRun ensemble_run(const EnsembleTask& task, const TimeGrid& grid_in_jnn_units,
                         std::span<const int> js);

// Default grid of the study: 200 logarithmic points, J_NN t in [1e-2, 1e2].
TimeGrid default_jnn_grid(std::size_t points = 200);

} // namespace glassy
