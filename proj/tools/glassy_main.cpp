// Command-line front end: disorder-averaged simulations, closed-form
// predictions, and the parameter scans, all writing CSV/JSON into --out.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "glassy/analytic.hpp"
#include "glassy/couplings.hpp"
#include "glassy/dynamics.hpp"
#include "glassy/ensemble.hpp"
#include "glassy/errors.hpp"
#include "glassy/io.hpp"
#include "glassy/numeric.hpp"
#include "glassy/rng.hpp"
#include "glassy/scans.hpp"

namespace fs = std::filesystem;
using namespace glassy;

namespace {

struct CommonOpts {
    std::string out = ".";
    std::uint64_t seed = 1;
    unsigned threads = 0;  // 0 = all hardware threads
};

void add_common(CLI::App* sub, CommonOpts& c) {
    sub->add_option("-o,--out", c.out, "Output directory (created if missing)");
    sub->add_option("--seed", c.seed, "Master seed; every derived run is deterministic in it");
    sub->add_option("--threads", c.threads, "Worker threads, 0 = hardware concurrency");
}

std::string emit(const CommonOpts& c, const std::string& name, const std::string& content) {
    fs::create_directories(c.out);
    const std::string path = (fs::path(c.out) / name).string();
    write_text(path, content);
    std::cout << "wrote " << path << "\n";
    return path;
}

Anisotropy anisotropy_by_name(const std::string& name) {
    if (name == "none") return Anisotropy::none();
    if (name == "dipolar") return Anisotropy::dipolar();
    throw ValidationError("unknown anisotropy: " + name);
}

void write_curve(const CommonOpts& c, const std::string& stem, const RelaxationCurve& curve) {
    emit(c, stem + ".csv", curve_csv(curve));
    emit(c, stem + ".json", curve_metadata_json(curve));
}

// --------------------------------------------------------------------------
// simulate
// --------------------------------------------------------------------------

struct SimulateOpts {
    CommonOpts common;
    int d = 3;
    double alpha = 6.0;
    std::size_t n_spins = 400;
    std::size_t n_samples = 200;
    double x = 0.0;
    double rb = 0.0;
    bool have_x = false;
    bool have_rb = false;
    double c_alpha = 1.0;
    std::string anisotropy = "none";
    double grid_lo = 1e-2;
    double grid_hi = 1e2;
    std::size_t grid_points = 200;
    std::vector<int> extra_moments;
    bool per_spin = false;
    std::vector<double> hist_times;
    std::size_t hist_bins = 40;
};

int run_simulate(const SimulateOpts& o) {
    double rb = 0.0;
    if (o.have_rb) rb = o.rb;
    if (o.have_x) rb = exclusion_radius_for_x(o.x, o.n_spins, o.d, 1.0);

    EnsembleTask task;
    task.geometry = BallGeometry(o.d, 1.0, rb);
    task.n_spins = o.n_spins;
    task.model = CouplingModel(o.alpha, o.c_alpha, anisotropy_by_name(o.anisotropy));
    task.n_samples = o.n_samples;
    task.master_seed = o.common.seed;
    task.threads = o.common.threads;

    std::vector<int> js = {1, 2};
    for (int j : o.extra_moments)
        if (std::find(js.begin(), js.end(), j) == js.end()) js.push_back(j);
    std::sort(js.begin(), js.end());

    const TimeGrid grid_jnn = TimeGrid::log_spaced(o.grid_lo, o.grid_hi, o.grid_points);
    EnsembleRun run = ensemble_run(task, grid_jnn, js);
    std::cout << "ensemble median nearest-neighbour coupling: " << format_double(run.jnn) << "\n";

    for (std::size_t ji = 0; ji < js.size(); ++ji) {
        const RelaxationCurve& raw = run.moments.curves[ji];
        if (js[ji] == 1) {
            write_curve(o.common, "magnetization", to_magnetization(raw));
        } else if (js[ji] == 2) {
            write_curve(o.common, "purity", to_purity(raw));
        }
        if (js[ji] != 1 && js[ji] != 2)
            write_curve(o.common, "moment" + std::to_string(js[ji]), raw);
    }

    if (o.per_spin || !o.hist_times.empty()) {
        // first realization of the same ensemble, matching seed derivation
        SpinConfiguration config =
            sample_rsa(o.n_spins, task.geometry, derive_stream_seed(task.master_seed, 0));
        CouplingMatrix matrix = coupling_matrix(config, task.model);
        if (o.per_spin) {
            const TimeGrid& raw_grid = run.moments.grid;
            std::vector<std::vector<double>> rows(raw_grid.size());
            for (std::size_t t = 0; t < raw_grid.size(); ++t)
                rows[t] = spin_magnetizations(matrix, raw_grid[t]);
            emit(o.common, "spins.csv", spin_curves_csv(raw_grid, rows, run.jnn));
        }
        for (std::size_t k = 0; k < o.hist_times.size(); ++k) {
            SpinHistogram h = spin_histogram(matrix, o.hist_times[k] / run.jnn, o.hist_bins);
            emit(o.common, "hist_" + std::to_string(k) + ".csv", histogram_csv(h));
        }
    }
    return 0;
}

// --------------------------------------------------------------------------
// analytic
// --------------------------------------------------------------------------

struct AnalyticOpts {
    CommonOpts common;
    int d = 3;
    double alpha = 6.0;
    double density = 1.0;
    double c_alpha = 1.0;
    std::string anisotropy = "none";
    double grid_lo = 1e-2;
    double grid_hi = 1e2;
    std::size_t grid_points = 200;
    std::size_t cutoff_n = 0;
    double cutoff_rb_ratio = 1e-3;
    int cutoff_moment = 1;
};

int run_analytic(const AnalyticOpts& o) {
    const ModelParameters params(o.d, o.alpha, o.density, o.c_alpha);
    const Anisotropy an = anisotropy_by_name(o.anisotropy);
    const AnalyticPrediction pred = an.isotropic() ? rates(params) : rates(params, an);
    emit(o.common, "rates.json", rates_json(params, pred, o.anisotropy));

    const double jnn = continuum_median_nn_coupling(params);
    const TimeGrid grid =
        TimeGrid::log_spaced(o.grid_lo / jnn, o.grid_hi / jnn, o.grid_points);

    RelaxationCurve mag = analytic_magnetization_curve(params, grid, pred.chi);
    RelaxationCurve pur = analytic_purity_curve(params, grid, pred.chi);
    mag.meta.anisotropy = o.anisotropy;
    pur.meta.anisotropy = o.anisotropy;
    write_curve(o.common, "magnetization", mag);
    write_curve(o.common, "purity", pur);

    if (o.cutoff_n > 0) {
        // Numerical check of the infinite-system form at finite spin number;
        // the kernel is isotropic, so any anisotropy choice is ignored here.
        CutoffIntegralConfig cfg = cutoff_config_for(params, o.cutoff_n, o.cutoff_rb_ratio);
        if (o.cutoff_moment == 1) {
            write_curve(o.common, "cutoff_magnetization",
                        verify_thermodynamic_limit(params, cfg, grid));
        } else {
            write_curve(o.common, "cutoff_moment" + std::to_string(o.cutoff_moment),
                        verify_moment_limit(o.cutoff_moment, params, cfg, grid));
        }
    }
    return 0;
}

// --------------------------------------------------------------------------
// scan
// --------------------------------------------------------------------------

struct ScanXOpts {
    CommonOpts common;
    int d = 3;
    double alpha = 6.0;
    std::size_t n_spins = 100;
    std::size_t n_samples = 200;
    std::vector<double> x_values;
};

int run_scan_x(const ScanXOpts& o) {
    std::vector<double> xs = o.x_values;
    if (xs.empty()) xs = log_spaced(1e-4, 0.5, 12);
    DisorderScanResult res = scan_beta_vs_disorder(o.d, o.alpha, o.n_spins, o.n_samples, xs,
                                                   o.common.seed, o.common.threads);
    emit(o.common, "beta_vs_x.csv", disorder_scan_csv(res));
    emit(o.common, "beta_vs_x.json", disorder_scan_json(res));
    std::cout << "plateau beta (magnetization): " << format_double(res.plateau_beta_magnetization)
              << " over " << res.plateau_points << " points\n";
    return 0;
}

struct ScanNOpts {
    CommonOpts common;
    int d = 3;
    double alpha = 6.0;
    std::vector<std::size_t> n_values;
    std::size_t n_samples = 0;
    std::vector<double> rb_values;
};

int run_scan_n(const ScanNOpts& o) {
    std::vector<std::size_t> ns = o.n_values;
    std::size_t samples = o.n_samples;
    const SizeScanDefaults defs = default_size_scan_lists(o.d);
    if (ns.empty()) ns = defs.n_values_magnetization;
    if (samples == 0) samples = defs.n_samples_magnetization;
    SizeScanResult res =
        scan_beta_vs_N(o.d, o.alpha, ns, samples, o.rb_values, o.common.seed, o.common.threads);
    emit(o.common, "beta_vs_n.csv", size_scan_csv(res));
    emit(o.common, "beta_vs_n_cells.csv", size_scan_cells_csv(res));
    emit(o.common, "beta_vs_n.json", size_scan_json(res));
    if (res.magnetization.power_law_ok)
        std::cout << "deviation power law (magnetization): p = "
                  << format_double(res.magnetization.power_law.exponent) << "\n";
    return 0;
}

struct ScanPOpts {
    CommonOpts common;
    std::vector<std::string> cases;
    std::vector<std::size_t> n_values_mag;
    std::vector<std::size_t> n_values_pur;
    std::size_t samples_mag = 0;
    std::size_t samples_pur = 0;
};

int run_scan_p(const ScanPOpts& o) {
    PTableOptions opts;
    for (const std::string& spec : o.cases) {
        const auto colon = spec.find(':');
        if (colon == std::string::npos)
            throw ValidationError("case must be d:alpha, got '" + spec + "'");
        try {
            opts.cases.emplace_back(std::stoi(spec.substr(0, colon)),
                                    std::stod(spec.substr(colon + 1)));
        } catch (const std::exception&) {
            throw ValidationError("case must be d:alpha, got '" + spec + "'");
        }
    }
    opts.n_values_magnetization = o.n_values_mag;
    opts.n_values_purity = o.n_values_pur;
    opts.n_samples_magnetization = o.samples_mag;
    opts.n_samples_purity = o.samples_pur;
    PTableResult res = scan_p_table(opts, o.common.seed, o.common.threads);
    emit(o.common, "p_table.csv", p_table_csv(res));
    emit(o.common, "p_table.json", p_table_json(res));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relaxation of randomly placed Ising spins with power-law couplings"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from an INI/TOML file; flags take precedence");

    SimulateOpts sim;
    CLI::App* s = app.add_subcommand(
        "simulate", "Disorder-averaged relaxation curves from exact spin dynamics");
    add_common(s, sim.common);
    s->add_option("-d,--dim", sim.d, "Spatial dimension")->check(CLI::Range(1, 16));
    s->add_option("-a,--alpha", sim.alpha, "Coupling power-law exponent");
    s->add_option("-N,--spins", sim.n_spins, "Spins per realization");
    s->add_option("-S,--samples", sim.n_samples, "Disorder realizations");
    auto* opt_x = s->add_option("-x,--disorder", sim.x,
                                "Disorder parameter; 0 = unconstrained uniform positions");
    auto* opt_rb = s->add_option("--rb", sim.rb, "Exclusion radius in units of the ball radius");
    opt_x->excludes(opt_rb);
    opt_rb->excludes(opt_x);
    s->add_option("--c-alpha", sim.c_alpha, "Coupling prefactor");
    s->add_option("--anisotropy", sim.anisotropy, "none or dipolar");
    s->add_option("--grid-lo", sim.grid_lo, "Smallest time, nearest-neighbour units");
    s->add_option("--grid-hi", sim.grid_hi, "Largest time, nearest-neighbour units");
    s->add_option("--grid-points", sim.grid_points, "Grid size")->check(CLI::Range(2, 100000));
    s->add_option("--moment", sim.extra_moments, "Extra cosine moments to record")
        ->check(CLI::Range(1, 128));
    s->add_flag("--per-spin", sim.per_spin, "Also write per-spin curves of the first realization");
    s->add_option("--hist-time", sim.hist_times,
                  "Times (nearest-neighbour units) for per-spin histograms of realization 0");
    s->add_option("--hist-bins", sim.hist_bins, "Histogram bins")->check(CLI::Range(2, 100000));

    AnalyticOpts ana;
    CLI::App* a = app.add_subcommand("analytic", "Closed-form decay constants and curves");
    add_common(a, ana.common);
    a->add_option("-d,--dim", ana.d, "Spatial dimension")->check(CLI::Range(1, 16));
    a->add_option("-a,--alpha", ana.alpha, "Coupling power-law exponent");
    a->add_option("--density", ana.density, "Spin number density");
    a->add_option("--c-alpha", ana.c_alpha, "Coupling prefactor");
    a->add_option("--anisotropy", ana.anisotropy, "none or dipolar");
    a->add_option("--grid-lo", ana.grid_lo, "Smallest time, nearest-neighbour units");
    a->add_option("--grid-hi", ana.grid_hi, "Largest time, nearest-neighbour units");
    a->add_option("--grid-points", ana.grid_points, "Grid size")->check(CLI::Range(2, 100000));
    a->add_option("--cutoff-n", ana.cutoff_n,
                  "If set, also integrate the finite-N cutoff form for this many spins");
    a->add_option("--cutoff-rb-ratio", ana.cutoff_rb_ratio, "Inner/outer cutoff ratio");
    a->add_option("--cutoff-moment", ana.cutoff_moment, "Moment order for the cutoff check")
        ->check(CLI::Range(1, 128));

    CLI::App* sc = app.add_subcommand("scan", "Parameter scans of the fitted decay exponents");
    sc->require_subcommand(1);

    ScanXOpts sx;
    CLI::App* scx = sc->add_subcommand("beta-vs-x", "Fitted exponents vs disorder strength");
    add_common(scx, sx.common);
    scx->add_option("-d,--dim", sx.d, "Spatial dimension")->check(CLI::Range(1, 16));
    scx->add_option("-a,--alpha", sx.alpha, "Coupling power-law exponent");
    scx->add_option("-N,--spins", sx.n_spins, "Spins per realization");
    scx->add_option("-S,--samples", sx.n_samples, "Disorder realizations per point");
    scx->add_option("--x-values", sx.x_values, "Disorder parameters to scan");

    ScanNOpts sn;
    CLI::App* scn = sc->add_subcommand("beta-vs-n", "Fitted exponents vs system size");
    add_common(scn, sn.common);
    scn->add_option("-d,--dim", sn.d, "Spatial dimension")->check(CLI::Range(1, 16));
    scn->add_option("-a,--alpha", sn.alpha, "Coupling power-law exponent");
    scn->add_option("--n-values", sn.n_values, "System sizes to scan");
    scn->add_option("-S,--samples", sn.n_samples, "Disorder realizations per cell");
    scn->add_option("--rb-values", sn.rb_values,
                    "Exclusion radii to average over (default: five spanning x 1e-4..1e-2)");

    ScanPOpts sp;
    CLI::App* scp = sc->add_subcommand("p-table", "Convergence exponents over a (d, alpha) grid");
    add_common(scp, sp.common);
    scp->add_option("--case", sp.cases, "Cases as d:alpha (default: full integer grid)");
    scp->add_option("--n-values-mag", sp.n_values_mag, "Override magnetization size list");
    scp->add_option("--n-values-pur", sp.n_values_pur, "Override purity size list");
    scp->add_option("--samples-mag", sp.samples_mag, "Override magnetization sample count");
    scp->add_option("--samples-pur", sp.samples_pur, "Override purity sample count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (s->parsed()) {
            sim.have_x = opt_x->count() > 0;
            sim.have_rb = opt_rb->count() > 0;
            return run_simulate(sim);
        }
        if (a->parsed()) return run_analytic(ana);
        if (scx->parsed()) return run_scan_x(sx);
        if (scn->parsed()) return run_scan_n(sn);
        if (scp->parsed()) return run_scan_p(sp);
    } catch (const PackingFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
