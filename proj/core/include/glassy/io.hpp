#pragma once

#include <string>
#include <vector>

#include "glassy/analytic.hpp"
#include "glassy/dynamics.hpp"
#include "glassy/scans.hpp"

namespace glassy {

// All serializers return the full file content as a string; callers decide
// where it goes. Floating point is written with %.17g so files round-trip
// exactly, and nothing here depends on wall-clock time: identical inputs give
// byte-identical output.

std::string format_double(double value);

// Relaxation curve as CSV. Times appear twice, raw and in nearest-neighbour
// units (tau_jnn = tau * jnn from the metadata); run parameters live in the
// JSON sidecar, not the CSV.
std::string curve_csv(const RelaxationCurve& curve);
std::string curve_metadata_json(const RelaxationCurve& curve);

std::string histogram_csv(const SpinHistogram& histogram);

// Per-spin coherence curves of a single disorder sample, one column per spin.
std::string spin_curves_csv(const TimeGrid& grid, const std::vector<std::vector<double>>& values,
                            double jnn);

// Closed-form decay constants for one parameter set.
std::string rates_json(const ModelParameters& params, const AnalyticPrediction& prediction,
                       const std::string& anisotropy_name = "none");

std::string disorder_scan_csv(const DisorderScanResult& scan);
std::string disorder_scan_json(const DisorderScanResult& scan);

// Aggregated beta-vs-N table (one row per N) and the raw per-cell data.
std::string size_scan_csv(const SizeScanResult& scan);
std::string size_scan_cells_csv(const SizeScanResult& scan);
std::string size_scan_json(const SizeScanResult& scan);

std::string p_table_csv(const PTableResult& table);
std::string p_table_json(const PTableResult& table);

// Overwrites the file; throws std::runtime_error if it cannot be written.
void write_text(const std::string& path, const std::string& content);

}  // namespace glassy
