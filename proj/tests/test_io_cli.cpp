#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "glassy/analytic.hpp"
#include "glassy/dynamics.hpp"
#include "glassy/io.hpp"
#include "glassy/scans.hpp"

using namespace glassy;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Rows of a CSV file with '#' comment lines removed; row 0 is the header.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

double to_double(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    REQUIRE(pos == s.size());
    return v;
}

// ---------------------------------------------------------------------------
// serializer units
// ---------------------------------------------------------------------------

TEST_CASE("format_double round-trips arbitrary doubles") {
    for (double v : {1.0 / 3.0, 0.1, 1e-300, 6.02214076e23, -2.5e-7, 0.0, 42.0}) {
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(format_double(2.0) == "2");
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("curve CSV layout is stable") {
    RelaxationCurve c;
    c.grid = TimeGrid({0.5, 2.0});
    c.values = {0.5, 0.25};
    c.observable = Observable::magnetization;
    c.moment_j = 1;
    c.meta.jnn = 2.0;

    const std::string expected =
        "# magnetization relaxation curve\n"
        "# tau_jnn = tau * jnn with jnn = 2; run parameters in the JSON sidecar\n"
        "tau,tau_jnn,value,stderr\n"
        "0.5,1,0.5,0\n"
        "2,4,0.25,0\n";
    CHECK(curve_csv(c) == expected);

    c.errors = {0.01, 0.02};
    const auto rows = parse_csv(curve_csv(c));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"tau", "tau_jnn", "value", "stderr"});
    CHECK(to_double(rows[1][3]) == 0.01);
}

TEST_CASE("curve metadata JSON parses back") {
    RelaxationCurve c;
    c.grid = TimeGrid({0.1, 1.0, 10.0});
    c.values = {0.5, 0.3, 0.01};
    c.observable = Observable::purity;
    c.moment_j = 2;
    c.meta.d = 3;
    c.meta.alpha = 6.0;
    c.meta.n_spins = 40;
    c.meta.n_samples = 7;
    c.meta.seed = 123456789012345ull;
    c.meta.jnn = 3.5;

    const nlohmann::json j = nlohmann::json::parse(curve_metadata_json(c));
    CHECK(j.at("d").get<int>() == 3);
    CHECK(j.at("alpha").get<double>() == 6.0);
    CHECK(j.at("n_spins").get<std::size_t>() == 40);
    CHECK(j.at("n_samples").get<std::size_t>() == 7);
    CHECK(j.at("seed").get<std::uint64_t>() == 123456789012345ull);
    CHECK(j.at("jnn").get<double>() == 3.5);
    CHECK(j.at("n_points").get<std::size_t>() == 3);
    CHECK(j.at("tau_min").get<double>() == 0.1);
    CHECK(j.at("tau_max").get<double>() == 10.0);
    CHECK(j.at("observable").get<std::string>() == observable_name(Observable::purity, 2));
}

TEST_CASE("rates JSON carries the closed-form constants") {
    const ModelParameters p36(3, 6.0, 1.0, 1.0);
    const nlohmann::json j = nlohmann::json::parse(rates_json(p36, rates(p36)));
    CHECK(j.at("beta_magnetization").get<double>() == 0.5);
    CHECK(j.at("beta_purity").get<double>() == 0.5);
    CHECK(j.at("gamma_ratio").get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(j.at("chi").get<double>() == 1.0);
    CHECK(j.at("anisotropy").get<std::string>() == "none");
    CHECK_FALSE(j.at("pure_exponential").get<bool>());
    CHECK(j.at("jnn_continuum").get<double>() > 0.0);

    const ModelParameters p22(2, 2.0, 1.0, 1.0);
    const nlohmann::json k = nlohmann::json::parse(rates_json(p22, rates(p22)));
    CHECK(k.at("pure_exponential").get<bool>());
    CHECK(k.at("beta_magnetization").get<double>() == 1.0);
}

TEST_CASE("notes with separators are quoted in scan CSV") {
    DisorderScanResult scan;
    scan.d = 3;
    scan.alpha = 6.0;
    DisorderScanPoint p;
    p.x = 0.5;
    p.note = "bad, \"stuff\"";
    scan.points.push_back(p);
    const std::string csv = disorder_scan_csv(scan);
    CHECK(csv.find("\"bad, \"\"stuff\"\"\"") != std::string::npos);
}

TEST_CASE("write_text writes exactly and reports failure") {
    const fs::path dir = fs::temp_directory_path() / "glassy_io_test";
    fs::create_directories(dir);
    const fs::path file = dir / "probe.txt";
    const std::string content = "line1\nline2\n\x01 binary-ish\n";
    write_text(file.string(), content);
    CHECK(read_file(file) == content);

    CHECK_THROWS_AS(write_text("/glassy_no_such_dir/x.txt", "y"), std::runtime_error);
}

// ---------------------------------------------------------------------------
// command-line front end, driven through the installed binary
// ---------------------------------------------------------------------------

const char* cli_path() { return GLASSY_CLI_PATH; }

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + cli_path() + "\" " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("glassy_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

TEST_CASE("two spins reduce to a single cosine") {
    const fs::path dir = fresh_dir("pair");
    const std::string args = "simulate -d 3 -a 6 -N 2 -S 1 --seed 42 --grid-lo 0.05 --grid-hi 3 "
                             "--grid-points 20 --per-spin --hist-time 0.5 --hist-bins 8 -o " +
                             dir.string();
    REQUIRE(run_cli(args) == 0);

    const nlohmann::json meta = nlohmann::json::parse(read_file(dir / "magnetization.json"));
    const double jnn = meta.at("jnn").get<double>();
    CHECK(jnn > 0.0);
    CHECK(meta.at("n_spins").get<std::size_t>() == 2);
    CHECK(meta.at("seed").get<std::uint64_t>() == 42);

    const auto mag = parse_csv(read_file(dir / "magnetization.csv"));
    REQUIRE(mag.size() == 21);  // header + 20 rows
    for (std::size_t r = 1; r < mag.size(); ++r) {
        const double tau = to_double(mag[r][0]);
        const double u = to_double(mag[r][1]);
        const double value = to_double(mag[r][2]);
        CHECK(std::abs(u - tau * jnn) < 1e-12 * u);
        // with one pair the ensemble magnetization is cos(2 J tau) / 2 and
        // J equals the calibrated nearest-neighbour scale, so only the
        // dimensionless time enters
        CHECK(std::abs(value - 0.5 * std::cos(2.0 * u)) < 1e-10);
    }

    const auto pur = parse_csv(read_file(dir / "purity.csv"));
    REQUIRE(pur.size() == 21);
    for (std::size_t r = 1; r < pur.size(); ++r) {
        const double u = to_double(pur[r][1]);
        const double c = std::cos(2.0 * u);
        CHECK(std::abs(to_double(pur[r][2]) - 0.5 * (1.0 + c * c)) < 1e-10);
    }

    // both spins see the same single coupling
    const auto spins = parse_csv(read_file(dir / "spins.csv"));
    REQUIRE(spins.size() == 21);
    REQUIRE(spins[0].size() == 4);
    CHECK(spins[0][2] == "spin_0");
    for (std::size_t r = 1; r < spins.size(); ++r) CHECK(spins[r][2] == spins[r][3]);

    const auto hist = parse_csv(read_file(dir / "hist_0.csv"));
    REQUIRE(hist.size() == 9);  // header + 8 bins
    std::size_t total = 0;
    for (std::size_t r = 1; r < hist.size(); ++r)
        total += static_cast<std::size_t>(to_double(hist[r][2]));
    CHECK(total == 2);
}

TEST_CASE("identical invocations produce identical bytes") {
    const fs::path a = fresh_dir("rerun_a");
    const fs::path b = fresh_dir("rerun_b");
    const std::string base = "simulate -d 2 -a 4 -N 12 -S 3 --seed 7 --grid-lo 0.1 --grid-hi 5 "
                             "--grid-points 12 -o ";
    REQUIRE(run_cli(base + a.string()) == 0);
    REQUIRE(run_cli(base + b.string()) == 0);
    CHECK(read_file(a / "magnetization.csv") == read_file(b / "magnetization.csv"));
    CHECK(read_file(a / "magnetization.json") == read_file(b / "magnetization.json"));
    CHECK(read_file(a / "purity.csv") == read_file(b / "purity.csv"));
}

TEST_CASE("exit codes distinguish bad input from failed packing") {
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("simulate --help") == 0);
    CHECK(run_cli("") == 2);               // missing subcommand
    CHECK(run_cli("frobnicate") == 2);     // unknown subcommand
    CHECK(run_cli("simulate --no-such-flag") == 2);
    CHECK(run_cli("simulate -x 0.1 --rb 0.2") == 2);  // mutually exclusive
    CHECK(run_cli("analytic -d 3 -a 2") == 2);        // exponent below dimension
    CHECK(run_cli("analytic --anisotropy sideways") == 2);

    // a 1d chain cannot hold 50 spins at this exclusion radius
    const fs::path dir = fresh_dir("packing");
    CHECK(run_cli("simulate -d 1 -a 2 -N 50 --rb 0.08 -S 1 -o " + dir.string()) == 3);
}

TEST_CASE("analytic subcommand writes rates and curves") {
    const fs::path dir = fresh_dir("analytic");
    REQUIRE(run_cli("analytic -d 3 -a 3 --anisotropy dipolar --grid-points 10 -o " +
                    dir.string()) == 0);

    const nlohmann::json rates = nlohmann::json::parse(read_file(dir / "rates.json"));
    CHECK(rates.at("anisotropy").get<std::string>() == "dipolar");
    CHECK(rates.at("chi").get<double>() ==
          doctest::Approx(4.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-9));
    CHECK(rates.at("gamma_ratio").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rates.at("beta_magnetization").get<double>() == 1.0);
    CHECK(rates.at("pure_exponential").get<bool>());

    const auto mag = parse_csv(read_file(dir / "magnetization.csv"));
    REQUIRE(mag.size() == 11);
    CHECK(to_double(mag[1][2]) <= 0.5);
    const nlohmann::json meta = nlohmann::json::parse(read_file(dir / "magnetization.json"));
    CHECK(meta.at("anisotropy").get<std::string>() == "dipolar");
}

TEST_CASE("finite-cutoff check tracks the closed form") {
    const fs::path dir = fresh_dir("cutoff");
    REQUIRE(run_cli("analytic -d 3 -a 6 --cutoff-n 1000 --grid-lo 0.1 --grid-hi 10 "
                    "--grid-points 12 -o " +
                    dir.string()) == 0);
    const auto closed = parse_csv(read_file(dir / "magnetization.csv"));
    const auto cutoff = parse_csv(read_file(dir / "cutoff_magnetization.csv"));
    REQUIRE(closed.size() == 13);
    REQUIRE(cutoff.size() == 13);
    for (std::size_t r = 1; r < closed.size(); ++r) {
        const double a = to_double(closed[r][2]);
        const double b = to_double(cutoff[r][2]);
        CHECK(std::abs(b - a) < 2e-2 * a);
    }
    // early times probe the bulk of the coupling distribution where a
    // thousand shells are plenty
    CHECK(std::abs(to_double(cutoff[1][2]) - to_double(closed[1][2])) <
          1e-3 * to_double(closed[1][2]));
}

TEST_CASE("scan subcommands emit their tables") {
    const fs::path xdir = fresh_dir("scan_x");
    REQUIRE(run_cli("scan beta-vs-x -d 3 -a 6 -N 30 -S 4 --x-values 0.001 --seed 3 -o " +
                    xdir.string()) == 0);
    const nlohmann::json xj = nlohmann::json::parse(read_file(xdir / "beta_vs_x.json"));
    REQUIRE(xj.at("points").size() == 1);
    CHECK(xj.at("points")[0].at("ok").get<bool>());
    CHECK(xj.at("points")[0].at("beta_magnetization").get<double>() > 0.0);
    const auto xcsv = parse_csv(read_file(xdir / "beta_vs_x.csv"));
    REQUIRE(xcsv.size() == 2);
    CHECK(to_double(xcsv[1][0]) == 0.001);

    const fs::path ndir = fresh_dir("scan_n");
    REQUIRE(run_cli("scan beta-vs-n -d 3 -a 6 --n-values 20 30 -S 3 --seed 3 -o " +
                    ndir.string()) == 0);
    const nlohmann::json nj = nlohmann::json::parse(read_file(ndir / "beta_vs_n.json"));
    CHECK(nj.at("rb_set").size() == 5);
    CHECK(nj.at("n_values") == nlohmann::json::array({20, 30}));
    const auto cells = parse_csv(read_file(ndir / "beta_vs_n_cells.csv"));
    CHECK(cells.size() == 11);  // header + 2 sizes x 5 radii

    // an exclusion radius outside the dilute regime is rejected up front
    CHECK(run_cli("scan beta-vs-n -d 3 -a 6 --n-values 20 30 -S 3 --rb-values 0.3") == 2);

    const fs::path pdir = fresh_dir("scan_p");
    REQUIRE(run_cli("scan p-table --case 3:6 --n-values-mag 20 30 --n-values-pur 20 30 "
                    "--samples-mag 3 --samples-pur 3 --seed 3 -o " +
                    pdir.string()) == 0);
    const nlohmann::json pj = nlohmann::json::parse(read_file(pdir / "p_table.json"));
    REQUIRE(pj.at("entries").size() == 1);
    CHECK(pj.at("entries")[0].at("d").get<int>() == 3);
    CHECK(pj.at("entries")[0].at("alpha").get<double>() == 6.0);
}

TEST_CASE("config file seeds the run and flags override it") {
    const fs::path dir = fresh_dir("config");
    const fs::path ini = dir / "run.ini";
    write_text(ini.string(), "[simulate]\nseed=77\n");

    const std::string tail = " simulate -d 3 -a 6 -N 2 -S 1 --grid-lo 0.1 --grid-hi 1 "
                             "--grid-points 5 -o ";
    const fs::path out1 = fresh_dir("config_out1");
    REQUIRE(run_cli("--config " + ini.string() + tail + out1.string()) == 0);
    const nlohmann::json m1 = nlohmann::json::parse(read_file(out1 / "magnetization.json"));
    CHECK(m1.at("seed").get<std::uint64_t>() == 77);

    const fs::path out2 = fresh_dir("config_out2");
    REQUIRE(run_cli("--config " + ini.string() + tail + out2.string() + " --seed 5") == 0);
    const nlohmann::json m2 = nlohmann::json::parse(read_file(out2 / "magnetization.json"));
    CHECK(m2.at("seed").get<std::uint64_t>() == 5);
}

}  // namespace
