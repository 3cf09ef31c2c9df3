#include "glassy/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace glassy {

namespace {

using nlohmann::json;

std::string fmt(double value) { return format_double(value); }

// Quote a field if it contains separators; notes from exception messages can
// hold anything.
std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void append_fit_columns(std::string& row, const StretchedExpFit& fit) {
    row += fmt(fit.beta) + ',' + fmt(fit.beta_stderr()) + ',';
    row += fmt(fit.gamma) + ',' + fmt(fit.gamma_stderr()) + ',';
    row += fmt(fit.amplitude);
}

json power_law_json(const PowerLawFit& fit, bool ok, const std::string& note) {
    json j;
    j["ok"] = ok;
    if (ok) {
        j["exponent"] = fit.exponent;
        j["exponent_stderr"] = fit.stderr_p;
        j["prefactor"] = fit.prefactor;
        j["r_squared"] = fit.r_squared;
    } else {
        j["note"] = note;
    }
    return j;
}

json meta_json(const CurveMeta& meta) {
    json j;
    j["alpha"] = meta.alpha;
    j["anisotropy"] = meta.anisotropy;
    j["c_alpha"] = meta.c_alpha;
    j["d"] = meta.d;
    j["jnn"] = meta.jnn;
    j["n_samples"] = meta.n_samples;
    j["n_spins"] = meta.n_spins;
    j["r0"] = meta.r0;
    j["rb"] = meta.rb;
    j["seed"] = meta.seed;
    j["x"] = meta.x;
    return j;
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string curve_csv(const RelaxationCurve& curve) {
    std::string out;
    out += "# " + observable_name(curve.observable, curve.moment_j) + " relaxation curve\n";
    out += "# tau_jnn = tau * jnn with jnn = " + fmt(curve.meta.jnn) +
           "; run parameters in the JSON sidecar\n";
    out += "tau,tau_jnn,value,stderr\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        const double tau = curve.grid[i];
        out += fmt(tau) + ',' + fmt(tau * curve.meta.jnn) + ',' + fmt(curve.values[i]) + ',' +
               fmt(curve.errors.empty() ? 0.0 : curve.errors[i]) + '\n';
    }
    return out;
}

std::string curve_metadata_json(const RelaxationCurve& curve) {
    json j = meta_json(curve.meta);
    j["moment_j"] = curve.moment_j;
    j["n_points"] = curve.grid.size();
    j["observable"] = observable_name(curve.observable, curve.moment_j);
    if (!curve.grid.empty()) {
        j["tau_max"] = curve.grid[curve.grid.size() - 1];
        j["tau_min"] = curve.grid[0];
    }
    return j.dump(2) + "\n";
}

std::string histogram_csv(const SpinHistogram& histogram) {
    std::string out;
    out += "# distribution of single-spin coherences at tau = " + fmt(histogram.time) + " over " +
           std::to_string(histogram.n_spins) + " spins\n";
    out += "bin_left,bin_right,count\n";
    for (std::size_t i = 0; i < histogram.counts.size(); ++i) {
        out += fmt(histogram.bin_edges[i]) + ',' + fmt(histogram.bin_edges[i + 1]) + ',' +
               std::to_string(histogram.counts[i]) + '\n';
    }
    return out;
}

std::string spin_curves_csv(const TimeGrid& grid, const std::vector<std::vector<double>>& values,
                            double jnn) {
    const std::size_t n_spins = values.empty() ? 0 : values[0].size();
    std::string out;
    out += "# single-sample coherence of each spin; tau_jnn = tau * " + fmt(jnn) + "\n";
    out += "tau,tau_jnn";
    for (std::size_t s = 0; s < n_spins; ++s) out += ",spin_" + std::to_string(s);
    out += '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out += fmt(grid[i]) + ',' + fmt(grid[i] * jnn);
        for (std::size_t s = 0; s < n_spins; ++s) out += ',' + fmt(values[i][s]);
        out += '\n';
    }
    return out;
}

std::string rates_json(const ModelParameters& params, const AnalyticPrediction& prediction,
                       const std::string& anisotropy_name) {
    json j;
    j["alpha"] = params.alpha;
    j["anisotropy"] = anisotropy_name;
    j["beta_magnetization"] = prediction.beta_m;
    j["beta_purity"] = prediction.beta_p;
    j["c_alpha"] = params.c_alpha;
    j["chi"] = prediction.chi;
    j["d"] = params.d;
    j["density"] = params.density;
    j["gamma_magnetization"] = prediction.gamma_m;
    j["gamma_purity"] = prediction.gamma_p;
    j["gamma_ratio"] = prediction.gamma_p / prediction.gamma_m;
    j["jnn_continuum"] = continuum_median_nn_coupling(params);
    j["kappa"] = prediction.kappa;
    // At alpha = d the stretching exponent hits 1 and the decay is a plain
    // exponential.
    j["pure_exponential"] = params.alpha == static_cast<double>(params.d);
    return j.dump(2) + "\n";
}

std::string disorder_scan_csv(const DisorderScanResult& scan) {
    std::string out;
    out += "# stretching exponents vs disorder strength x at fixed N\n";
    out += "# d = " + std::to_string(scan.d) + ", alpha = " + fmt(scan.alpha) +
           ", n_spins = " + std::to_string(scan.n_spins) +
           ", n_samples = " + std::to_string(scan.n_samples) +
           ", seed = " + std::to_string(scan.seed) + "\n";
    out += "# plateau means over x <= 0.01 (" + std::to_string(scan.plateau_points) +
           " points): beta_magnetization = " + fmt(scan.plateau_beta_magnetization) +
           ", beta_purity = " + fmt(scan.plateau_beta_purity) + "\n";
    out +=
        "x,rb,jnn,beta_magnetization,beta_magnetization_stderr,gamma_magnetization,"
        "gamma_magnetization_stderr,a_magnetization,beta_purity,beta_purity_stderr,gamma_purity,"
        "gamma_purity_stderr,a_purity,ok,packing_failed,note\n";
    for (const DisorderScanPoint& p : scan.points) {
        std::string row = fmt(p.x) + ',' + fmt(p.rb) + ',' + fmt(p.jnn) + ',';
        append_fit_columns(row, p.magnetization);
        row += ',';
        append_fit_columns(row, p.purity);
        row += ',' + std::to_string(p.ok ? 1 : 0) + ',' + std::to_string(p.packing_failed ? 1 : 0) +
               ',' + csv_quote(p.note) + '\n';
        out += row;
    }
    return out;
}

std::string disorder_scan_json(const DisorderScanResult& scan) {
    json j;
    j["alpha"] = scan.alpha;
    j["d"] = scan.d;
    j["n_samples"] = scan.n_samples;
    j["n_spins"] = scan.n_spins;
    j["plateau_beta_magnetization"] = scan.plateau_beta_magnetization;
    j["plateau_beta_purity"] = scan.plateau_beta_purity;
    j["plateau_points"] = scan.plateau_points;
    j["seed"] = scan.seed;
    json points = json::array();
    for (const DisorderScanPoint& p : scan.points) {
        json pj;
        pj["beta_magnetization"] = p.magnetization.beta;
        pj["beta_purity"] = p.purity.beta;
        pj["jnn"] = p.jnn;
        pj["note"] = p.note;
        pj["ok"] = p.ok;
        pj["packing_failed"] = p.packing_failed;
        pj["rb"] = p.rb;
        pj["x"] = p.x;
        points.push_back(std::move(pj));
    }
    j["points"] = std::move(points);
    return j.dump(2) + "\n";
}

std::string size_scan_csv(const SizeScanResult& scan) {
    std::string out;
    out += "# finite-size deviation of the stretching exponent, averaged over exclusion radii\n";
    out += "# d = " + std::to_string(scan.d) + ", alpha = " + fmt(scan.alpha) +
           ", n_samples = " + std::to_string(scan.n_samples) +
           ", seed = " + std::to_string(scan.seed) + ", rb_set =";
    for (double rb : scan.rb_set) out += ' ' + fmt(rb);
    out += '\n';
    const auto series_line = [&](const char* name, const SizeScanSeries& s) {
        std::string line = std::string("# power law ") + name + ": ";
        if (s.power_law_ok) {
            line += "p = " + fmt(s.power_law.exponent) + " +- " + fmt(s.power_law.stderr_p) +
                    ", prefactor = " + fmt(s.power_law.prefactor) +
                    ", r_squared = " + fmt(s.power_law.r_squared) + ", points = " +
                    std::to_string(s.power_law_n.size());
        } else {
            line += "not fitted (" + s.power_law_note + ")";
        }
        return line + '\n';
    };
    out += series_line("magnetization", scan.magnetization);
    out += series_line("purity", scan.purity);
    out +=
        "n,beta_magnetization,sem_magnetization,deviation_magnetization,"
        "beta_purity,sem_purity,deviation_purity\n";
    for (std::size_t i = 0; i < scan.n_values.size(); ++i) {
        out += std::to_string(scan.n_values[i]) + ',' + fmt(scan.magnetization.mean_beta[i]) + ',' +
               fmt(scan.magnetization.sem[i]) + ',' + fmt(scan.magnetization.deviation[i]) + ',' +
               fmt(scan.purity.mean_beta[i]) + ',' + fmt(scan.purity.sem[i]) + ',' +
               fmt(scan.purity.deviation[i]) + '\n';
    }
    return out;
}

std::string size_scan_cells_csv(const SizeScanResult& scan) {
    std::string out;
    out += "# per-run fits behind the finite-size scan (one row per N x rb cell)\n";
    out +=
        "n,rb,x,jnn,beta_magnetization,beta_magnetization_stderr,gamma_magnetization,"
        "gamma_magnetization_stderr,a_magnetization,beta_purity,beta_purity_stderr,gamma_purity,"
        "gamma_purity_stderr,a_purity,ok,note\n";
    for (const SizeScanCell& c : scan.cells) {
        std::string row = std::to_string(c.n_spins) + ',' + fmt(c.rb) + ',' + fmt(c.x) + ',' +
                          fmt(c.jnn) + ',';
        append_fit_columns(row, c.magnetization);
        row += ',';
        append_fit_columns(row, c.purity);
        row += ',' + std::to_string(c.ok ? 1 : 0) + ',' + csv_quote(c.note) + '\n';
        out += row;
    }
    return out;
}

std::string size_scan_json(const SizeScanResult& scan) {
    json j;
    j["alpha"] = scan.alpha;
    j["d"] = scan.d;
    j["n_samples"] = scan.n_samples;
    j["n_values"] = scan.n_values;
    j["rb_set"] = scan.rb_set;
    j["seed"] = scan.seed;
    const auto series = [](const SizeScanSeries& s) {
        json sj;
        sj["deviation"] = s.deviation;
        sj["mean_beta"] = s.mean_beta;
        sj["power_law"] = power_law_json(s.power_law, s.power_law_ok, s.power_law_note);
        sj["power_law_n"] = s.power_law_n;
        sj["sem"] = s.sem;
        return sj;
    };
    j["magnetization"] = series(scan.magnetization);
    j["purity"] = series(scan.purity);
    return j.dump(2) + "\n";
}

std::string p_table_csv(const PTableResult& table) {
    std::string out;
    out += "# convergence exponent p of the finite-size deviation, per (d, alpha)\n";
    out += "# seed = " + std::to_string(table.seed) + "\n";
    out +=
        "d,alpha,p_magnetization,p_magnetization_stderr,r2_magnetization,ok_magnetization,"
        "p_purity,p_purity_stderr,r2_purity,ok_purity,note\n";
    for (const PTableEntry& e : table.entries) {
        out += std::to_string(e.d) + ',' + fmt(e.alpha) + ',' + fmt(e.magnetization.exponent) +
               ',' + fmt(e.magnetization.stderr_p) + ',' + fmt(e.magnetization.r_squared) + ',' +
               std::to_string(e.magnetization_ok ? 1 : 0) + ',' + fmt(e.purity.exponent) + ',' +
               fmt(e.purity.stderr_p) + ',' + fmt(e.purity.r_squared) + ',' +
               std::to_string(e.purity_ok ? 1 : 0) + ',' + csv_quote(e.note) + '\n';
    }
    return out;
}

std::string p_table_json(const PTableResult& table) {
    json j;
    j["seed"] = table.seed;
    json entries = json::array();
    for (const PTableEntry& e : table.entries) {
        json ej;
        ej["alpha"] = e.alpha;
        ej["d"] = e.d;
        ej["magnetization"] = power_law_json(e.magnetization, e.magnetization_ok, e.note);
        ej["note"] = e.note;
        ej["purity"] = power_law_json(e.purity, e.purity_ok, e.note);
        entries.push_back(std::move(ej));
    }
    j["entries"] = std::move(entries);
    return j.dump(2) + "\n";
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace glassy
