#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "glassy/couplings.hpp"
#include "glassy/dynamics.hpp"
#include "glassy/ensemble.hpp"
#include "glassy/errors.hpp"

using namespace glassy;

namespace {

CouplingMatrix sampled_matrix(std::size_t n, std::uint64_t seed, double alpha = 6.0,
                              double rb = 0.0) {
    SpinConfiguration config = sample_rsa(n, BallGeometry(3, 1.0, rb), seed);
    return coupling_matrix(config, CouplingModel(alpha, 1.0));
}

double naive_product(const CouplingMatrix& m, std::size_t i, double tau, int j) {
    double p = 1.0;
    for (std::size_t k = 0; k < m.size(); ++k)
        if (k != i) p *= std::pow(std::cos(2.0 * m.at(i, k) * tau), j);
    return p;
}

}  // namespace

TEST_CASE("time grids") {
    TimeGrid g = TimeGrid::log_spaced(1e-3, 10.0, 40);
    REQUIRE(g.size() == 40);
    CHECK(g[0] == doctest::Approx(1e-3).epsilon(1e-14));
    CHECK(g[39] == doctest::Approx(10.0).epsilon(1e-14));
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);

    CHECK_THROWS_AS(TimeGrid(std::vector<double>{}), ValidationError);
    CHECK_THROWS_AS(TimeGrid(std::vector<double>{-1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(TimeGrid(std::vector<double>{1.0, 1.0}), ValidationError);
    TimeGrid with_zero(std::vector<double>{0.0, 1.0});
    CHECK(with_zero[0] == 0.0);
}

TEST_CASE("observable names") {
    CHECK(observable_name(Observable::magnetization) == "magnetization");
    CHECK(observable_name(Observable::purity) == "purity");
    CHECK(observable_name(Observable::moment, 3) == "moment3");
}

TEST_CASE("two-spin coherence is a pure cosine") {
    CouplingMatrix m = sampled_matrix(2, 71);
    const double j01 = m.at(0, 1);
    for (double tau : {0.0, 1e-4, 0.3, 2.0}) {
        const double want = std::cos(2.0 * j01 * tau);
        CHECK(spin_magnetization(m, 0, tau) == doctest::Approx(want).epsilon(1e-14));
        CHECK(spin_magnetization(m, 1, tau) == doctest::Approx(want).epsilon(1e-14));
    }
}

TEST_CASE("single-spin products match the naive evaluation") {
    CouplingMatrix m = sampled_matrix(24, 72);
    for (double tau : {1e-6, 1e-3, 0.05, 1.0}) {
        std::vector<double> all = spin_magnetizations(m, tau);
        for (std::size_t i = 0; i < m.size(); ++i) {
            CHECK(all[i] == doctest::Approx(naive_product(m, i, tau, 1)).epsilon(1e-12));
        }
    }
}

TEST_CASE("product evaluator folds far pairs without losing accuracy") {
    CouplingMatrix m = sampled_matrix(60, 73);
    ProductEvaluator ev(m);
    REQUIRE(ev.size() == 60);
    const std::array<int, 3> js{1, 2, 5};
    std::vector<std::vector<double>> out;
    // times spanning seven decades so both the folded and the active branch
    // get exercised
    for (double tau : {1e-7, 1e-5, 1e-3, 0.02, 0.3, 4.0}) {
        ev.eval(tau, js, out);
        REQUIRE(out.size() == js.size());
        for (std::size_t ji = 0; ji < js.size(); ++ji) {
            for (std::size_t i = 0; i < m.size(); ++i) {
                const double want = naive_product(m, i, tau, js[ji]);
                CHECK(out[ji][i] == doctest::Approx(want).epsilon(1e-10).scale(1.0));
            }
        }
    }
}

TEST_CASE("curves: moments, magnetization, purity") {
    CouplingMatrix m = sampled_matrix(20, 74);
    TimeGrid grid(std::vector<double>{0.0, 1e-3, 0.05, 0.4});
    const std::array<int, 2> js{1, 2};
    std::vector<RelaxationCurve> curves = moment_curves(m, grid, js);
    REQUIRE(curves.size() == 2);

    RelaxationCurve mag = magnetization_curve(m, grid);
    RelaxationCurve pur = purity_curve(m, grid);
    mag.validate();
    pur.validate();
    CHECK(mag.values[0] == 0.5);
    CHECK(pur.values[0] == 1.0);

    for (std::size_t t = 0; t < grid.size(); ++t) {
        double m1 = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            const double p = naive_product(m, i, grid[t], 1);
            m1 += p;
            m2 += p * p;
        }
        m1 /= static_cast<double>(m.size());
        m2 /= static_cast<double>(m.size());
        CHECK(curves[0].values[t] == doctest::Approx(m1).epsilon(1e-12));
        CHECK(curves[1].values[t] == doctest::Approx(m2).epsilon(1e-12));
        CHECK(mag.values[t] == doctest::Approx(0.5 * m1).epsilon(1e-12));
        CHECK(pur.values[t] == doctest::Approx(0.5 * (1.0 + m2)).epsilon(1e-12));
    }
}

TEST_CASE("curve validation catches inconsistencies") {
    CouplingMatrix m = sampled_matrix(6, 75);
    TimeGrid grid(std::vector<double>{0.0, 0.1});
    RelaxationCurve mag = magnetization_curve(m, grid);
    RelaxationCurve broken = mag;
    broken.values.push_back(0.1);
    CHECK_THROWS_AS(broken.validate(), ValidationError);
    broken = mag;
    broken.values[0] = 0.4;  // wrong start value for a magnetization curve
    CHECK_THROWS_AS(broken.validate(), ValidationError);
    broken = mag;
    broken.values[1] = 0.7;  // outside [-1/2, 1/2]
    CHECK_THROWS_AS(broken.validate(), ValidationError);
}

TEST_CASE("histograms count every spin into uniform bins") {
    CouplingMatrix m = sampled_matrix(50, 76);
    SpinHistogram h = spin_histogram(m, 0.02, 20);
    REQUIRE(h.bin_edges.size() == 21);
    CHECK(h.bin_edges.front() == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(h.bin_edges.back() == doctest::Approx(1.0).epsilon(1e-14));
    std::size_t total = 0;
    for (std::size_t c : h.counts) total += c;
    CHECK(total == 50);
    CHECK(h.n_spins == 50);
    CHECK(h.time == 0.02);

    // at tau = 0 every coherence is exactly 1 and lands in the last bin
    SpinHistogram h0 = spin_histogram(m, 0.0, 10);
    CHECK(h0.counts.back() == 50);
}

TEST_CASE("exact quantum evolution agrees with the closed product form") {
    for (std::uint64_t seed : {81u, 82u}) {
        CouplingMatrix m = sampled_matrix(9, seed);
        TimeGrid grid = TimeGrid::log_spaced(1e-3, 2.0, 9);
        OracleCurves oracle = exact_oracle(m, grid);
        RelaxationCurve mag = magnetization_curve(m, grid);
        RelaxationCurve pur = purity_curve(m, grid);
        for (std::size_t t = 0; t < grid.size(); ++t) {
            CHECK(oracle.magnetization.values[t] ==
                  doctest::Approx(mag.values[t]).epsilon(1e-12).scale(1.0));
            CHECK(oracle.purity.values[t] ==
                  doctest::Approx(pur.values[t]).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("exact evolution also covers anisotropic couplings") {
    SpinConfiguration config = sample_rsa(8, BallGeometry(3, 1.0), 83);
    CouplingMatrix m = coupling_matrix(config, CouplingModel(3.0, 1.0, Anisotropy::dipolar()));
    TimeGrid grid = TimeGrid::log_spaced(1e-2, 1.0, 6);
    OracleCurves oracle = exact_oracle(m, grid);
    RelaxationCurve mag = magnetization_curve(m, grid);
    for (std::size_t t = 0; t < grid.size(); ++t)
        CHECK(oracle.magnetization.values[t] ==
              doctest::Approx(mag.values[t]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("oracle refuses oversized systems") {
    CouplingMatrix m = sampled_matrix(25, 84);
    TimeGrid grid(std::vector<double>{0.1});
    CHECK_THROWS_AS(exact_oracle(m, grid), TooLarge);
}

TEST_CASE("ensemble averages are deterministic and thread independent") {
    EnsembleTask task;
    task.geometry = BallGeometry(3, 1.0, 0.02);
    task.n_spins = 40;
    task.model = CouplingModel(6.0, 1.0);
    task.n_samples = 12;
    task.master_seed = 2024;
    task.threads = 1;
    TimeGrid grid = TimeGrid::log_spaced(1e-6, 1e-2, 25);
    const std::array<int, 2> js{1, 2};

    EnsembleMoments a = ensemble_moments(task, grid, js);
    EnsembleMoments b = ensemble_moments(task, grid, js);
    task.threads = 4;
    EnsembleMoments c = ensemble_moments(task, grid, js);

    for (std::size_t ji = 0; ji < 2; ++ji) {
        for (std::size_t t = 0; t < grid.size(); ++t) {
            CHECK(a.curves[ji].values[t] == b.curves[ji].values[t]);
            CHECK(a.curves[ji].values[t] == c.curves[ji].values[t]);
            CHECK(a.curves[ji].errors[t] == c.curves[ji].errors[t]);
        }
    }
    CHECK(a.jnn == c.jnn);

    task.master_seed = 2025;
    EnsembleMoments other = ensemble_moments(task, grid, js);
    bool any_diff = false;
    for (std::size_t t = 0; t < grid.size(); ++t)
        any_diff = any_diff || other.curves[0].values[t] != a.curves[0].values[t];
    CHECK(any_diff);
}

TEST_CASE("ensemble error bars vanish for a single realization") {
    EnsembleTask task;
    task.geometry = BallGeometry(3, 1.0);
    task.n_spins = 30;
    task.model = CouplingModel(6.0, 1.0);
    task.n_samples = 1;
    task.master_seed = 5;
    TimeGrid grid = TimeGrid::log_spaced(1e-5, 1e-3, 8);
    RelaxationCurve curve = ensemble_average(task, grid, Observable::magnetization);
    for (double e : curve.errors) CHECK(e == 0.0);
    task.n_samples = 6;
    curve = ensemble_average(task, grid, Observable::magnetization);
    bool any_positive = false;
    for (double e : curve.errors) any_positive = any_positive || e > 0.0;
    CHECK(any_positive);
}

TEST_CASE("calibrated runs rescale the grid by the sampled coupling") {
    EnsembleTask task;
    task.geometry = BallGeometry(3, 1.0);
    task.n_spins = 60;
    task.model = CouplingModel(6.0, 1.0);
    task.n_samples = 10;
    task.master_seed = 77;
    const std::array<int, 2> js{1, 2};
    TimeGrid grid_jnn = TimeGrid::log_spaced(1e-2, 10.0, 15);
    EnsembleRun run = ensemble_run(task, grid_jnn, js);

    REQUIRE(run.jnn > 0.0);
    // the calibration shortcut must agree exactly with the matrix-based
    // median computed during the evaluation pass
    CHECK(run.jnn == run.moments.jnn);
    for (std::size_t t = 0; t < grid_jnn.size(); ++t)
        CHECK(run.moments.grid[t] == doctest::Approx(grid_jnn[t] / run.jnn).epsilon(1e-15));

    task.n_spins = 1;
    CHECK_THROWS_AS(ensemble_run(task, grid_jnn, js), InsufficientSpins);
}

TEST_CASE("moment views map to magnetization and purity") {
    EnsembleTask task;
    task.geometry = BallGeometry(3, 1.0);
    task.n_spins = 25;
    task.model = CouplingModel(6.0, 1.0);
    task.n_samples = 4;
    task.master_seed = 31;
    TimeGrid grid(std::vector<double>{0.0, 1e-4, 1e-2});
    const std::array<int, 2> js{1, 2};
    EnsembleMoments moments = ensemble_moments(task, grid, js);
    RelaxationCurve mag = to_magnetization(moments.curves[0]);
    RelaxationCurve pur = to_purity(moments.curves[1]);
    mag.validate();
    pur.validate();
    for (std::size_t t = 0; t < grid.size(); ++t) {
        CHECK(mag.values[t] == doctest::Approx(0.5 * moments.curves[0].values[t]).epsilon(1e-15));
        CHECK(pur.values[t] ==
              doctest::Approx(0.5 * (1.0 + moments.curves[1].values[t])).epsilon(1e-15));
        CHECK(mag.errors[t] == doctest::Approx(0.5 * moments.curves[0].errors[t]).epsilon(1e-15));
    }
    CHECK(mag.observable == Observable::magnetization);
    CHECK(pur.observable == Observable::purity);
    CHECK_THROWS_AS(to_magnetization(moments.curves[1]), ValidationError);
    CHECK_THROWS_AS(to_purity(moments.curves[0]), ValidationError);
}
