#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "featcomp/runner.hpp"

using namespace featcomp;
using namespace featcomp::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const char* tag) {
        path = fs::temp_directory_path() / (std::string("featcomp_cli_") + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

RunConfig from_text(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

// Tiny but real: two rho points each way, few hundred examples, one epoch.
RunConfig tiny(const fs::path& out) {
    RunConfig c;
    c.out_dir = out;
    c.data.per_class = 40;
    c.data.train_size = 300;
    c.data.test_size = 100;
    c.sweep_rho_l = {0.0, 1.0};
    c.sweep_rho_r = {0.0, 1.0};
    c.phase1.epochs = 1;
    c.probe.epochs = 1;
    c.generative.epochs = 1;
    return c;
}

fs::path source_dir() { return fs::path(FEATCOMP_SOURCE_DIR); }

}  // namespace

TEST_CASE("pearson_r") {
    std::vector<double> xs{0.5, 1, 2, 3.5, 4, 7};
    std::vector<double> lin, neg;
    for (double x : xs) {
        lin.push_back(2 * x + 3);
        neg.push_back(-x);
    }
    CHECK(pearson_r(xs, lin) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pearson_r(xs, neg) == doctest::Approx(-1.0).epsilon(1e-15));

    // independent oracle: sample covariance over the product of sample deviations, in long double
    const std::vector<double> a{0.12, 0.93, 0.45, 0.77, 0.31, 0.58, 0.02, 0.66, 0.89, 0.24};
    const std::vector<double> b{0.91, 0.63, 0.88, 0.93, 0.72, 0.85, 0.64, 0.80, 0.97, 0.59};
    long double ma = 0, mb = 0;
    for (int i = 0; i < 10; ++i) {
        ma += a[i] / 10.0L;
        mb += b[i] / 10.0L;
    }
    long double cov = 0, va = 0, vb = 0;
    for (int i = 0; i < 10; ++i) {
        cov += (a[i] - ma) * (b[i] - mb) / 9.0L;
        va += (a[i] - ma) * (a[i] - ma) / 9.0L;
        vb += (b[i] - mb) * (b[i] - mb) / 9.0L;
    }
    const double oracle = static_cast<double>(cov / (std::sqrt(va) * std::sqrt(vb)));
    CHECK(std::abs(pearson_r(a, b) - oracle) < 1e-12);

    CHECK_THROWS_AS(pearson_r({1.0}, {2.0}), std::invalid_argument);
    CHECK_THROWS_AS(pearson_r({1, 2, 3}, {4, 4, 4}), std::invalid_argument);
    CHECK_THROWS_AS(pearson_r({2, 2}, {1, 3}), std::invalid_argument);
    CHECK_THROWS_AS(pearson_r({1, 2}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("config parsing") {
    RunConfig c = from_text("schema = 1\n[run]\nseed = 42\n[sweep]\nrho_l = 0, 0.5\nreplicates = 3\n"
                            "[probe]\noptimizer = sgd\nlr = 0.01\nscaling = none\n");
    CHECK(c.seed == 42);
    CHECK(c.sweep_rho_l == std::vector<double>{0.0, 0.5});
    CHECK(c.sweep_replicates == 3);
    CHECK(c.probe.optimizer.learning_rate == 0.01);
    CHECK(c.probe_scaling == train::ProbeScaling::None);

    // canonical rendering round-trips exactly
    const std::string text = render_config(c);
    CHECK(render_config(from_text(text)) == text);
    CHECK(render_config(RunConfig{}) == render_config(from_text(render_config(RunConfig{}))));

    CHECK_THROWS_AS(from_text("[run]\nsed = 1\n"), ConfigError);
    CHECK_THROWS_AS(from_text("[nope]\nseed = 1\n"), ConfigError);
    CHECK_THROWS_AS(from_text("schema = 2\n"), ConfigError);
    CHECK_THROWS_AS(from_text("[run]\nseed = -1\n"), ConfigError);
    CHECK_THROWS_AS(from_text("[sweep]\nrho_r = 0, 1.5\n"), ConfigError);
    CHECK_THROWS_AS(from_text("[sweep]\nreplicates = 0\n"), ConfigError);
    CHECK_THROWS_AS(from_text("[phase1]\nlr = fast\n"), ConfigError);
    CHECK_THROWS_AS(from_text("[phase1]\noptimizer = rmsprop\n"), ConfigError);
    CHECK_THROWS_AS(from_text("[generative]\nbalance = sometimes\n"), ConfigError);
    CHECK_THROWS_AS(from_text("[gansim]\npolicies = g-catchup, shuffle\n"), ConfigError);
    CHECK_THROWS_AS(from_text("[data]\nsource = idx\n"), ConfigError);

    // relative paths follow the config file
    std::istringstream in("[gansim]\nscenario = s/lead.scn\n");
    CHECK(parse_config(in, "/etc/x").scenario == fs::path("/etc/x/s/lead.scn"));

    RunConfig o;
    set_key(o, "run.seed", "9");
    CHECK(o.seed == 9);
    CHECK_THROWS_AS(set_key(o, "run.colour", "red"), ConfigError);
}

TEST_CASE("bundled configs parse") {
    for (const auto& e : fs::directory_iterator(source_dir() / "configs")) {
        CAPTURE(e.path().string());
        CHECK_NOTHROW(load_config(e.path()));
    }
}

TEST_CASE("surface command") {
    TempDir tmp("surface");
    RunConfig c;
    c.out_dir = tmp.path;
    const auto r = cmd_surface(c);
    CHECK(r.exit_code == 0);
    CHECK(slurp(tmp.path / "summary.txt") == r.summary);

    // parse the CSV back and scan it
    std::ifstream in(tmp.path / "surface.csv");
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> m;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        m.push_back(row);
    }
    REQUIRE(m.size() == 11);
    std::size_t cells = 0;
    for (const auto& row : m) cells += row.size();
    CHECK(cells == 121);
    for (std::size_t i = 0; i < 11; ++i) {
        CHECK(m[10][i] == 0.0);
        CHECK(m[i][0] == 0.0);
    }
    CHECK(m[0][10] == doctest::Approx(std::log2(10.0)).epsilon(1e-6));
    for (std::size_t i = 0; i < 11; ++i)
        for (std::size_t j = 0; j < 11; ++j) {
            if (i + 1 < 11) CHECK(m[i + 1][j] <= m[i][j]);
            if (j + 1 < 11) CHECK(m[i][j + 1] >= m[i][j]);
        }
}

TEST_CASE("gansim on bundled scenarios") {
    TempDir tmp("gansim");
    RunConfig c;
    c.out_dir = tmp.path;

    c.scenario = source_dir() / "data/scenarios/matched.scn";
    auto r = cmd_gansim(c);
    CHECK(r.exit_code == 0);
    CHECK(r.summary.find("FAIL") == std::string::npos);
    CHECK(r.summary.find("exact 0.000000000000") != std::string::npos);
    CHECK(r.summary.find("confusion on the features D knows: yes") != std::string::npos);

    c.scenario = source_dir() / "data/scenarios/lead.scn";
    r = cmd_gansim(c);
    CHECK(r.exit_code == 0);
    for (const char* name : {"PASS lead motivation k=2 l=2", "PASS generator incentive", "PASS motivation sum",
                             "PASS g-catchup ends at confusion"}) {
        CHECK(r.summary.find(name) != std::string::npos);
    }
    const std::string trace = slurp(tmp.path / "gansim_trace.csv");
    CHECK(trace.rfind("step,actor,feature,motivation_bits,V_nats\n", 0) == 0);
    CHECK(trace.find("1.386294361120\n") != std::string::npos);

    // asking for a lead the scenario does not have is a failed check, not a crash
    c.lead_k = 3;  // f_2 is not matched, so D is not confused on f_1..f_2
    c.lead_l = 1;
    r = cmd_gansim(c);
    CHECK(r.exit_code == 2);
    CHECK(r.summary.find("precondition violated") != std::string::npos);
    c.lead_k = 2;
    c.lead_l = 5;
    CHECK(cmd_gansim(c).exit_code == 2);

    c.scenario = tmp.path / "missing.scn";
    CHECK_THROWS_AS(cmd_gansim(c), ConfigError);
}

TEST_CASE("micalc") {
    TempDir tmp("micalc");
    {
        std::ofstream f(tmp.path / "p.pmf");
        f << "vars: y:2,x:2\n0,0\t0.5\n1,1\t0.5\n";
    }
    RunConfig c;
    c.out_dir = tmp.path;
    c.pmf = tmp.path / "p.pmf";
    c.mi_a = {0};
    c.mi_b = {1};
    const auto r = cmd_micalc(c);
    CHECK(r.exit_code == 0);
    CHECK(r.summary.find("I(0; 1 | ) = 1.000000000000 bits") != std::string::npos);
    c.mi_b = {5};
    CHECK_THROWS_AS(cmd_micalc(c), ConfigError);
}

TEST_CASE("sweep and table1 at toy scale") {
    TempDir a("sweep_a"), b("sweep_b");
    RunConfig c = tiny(a.path);
    auto r1 = cmd_sweep(c);
    CHECK(r1.exit_code == 0);
    const SweepReport rep = run_sweep(c);
    REQUIRE(rep.cells.size() == 4);
    for (const auto& cell : rep.cells) {
        REQUIRE(cell.accuracy);
        CHECK(*cell.accuracy >= 0.0);
        CHECK(*cell.accuracy <= 1.0);
        CHECK(cell.signal_bits >= 0.0);
        CHECK(cell.signal_bits <= std::log2(10.0) + 1e-12);
    }
    CHECK(slurp(a.path / "sweep.csv").rfind("rho_l,rho_r,signal_bits,accuracy,seed,status\n", 0) == 0);

    // order independence: a lone cell matches its slot in the full run
    const SweepCell lone = run_sweep_cell(c, make_bank(c.data), 1.0, 0.0, 0);
    CHECK(lone.accuracy == rep.cells[1].accuracy);
    CHECK(lone.seed == rep.cells[1].seed);

    // same config and seed, byte-identical files
    c.out_dir = b.path;
    CHECK(cmd_sweep(c).exit_code == 0);
    CHECK(slurp(a.path / "sweep.csv") == slurp(b.path / "sweep.csv"));
    CHECK(slurp(a.path / "summary.txt") == slurp(b.path / "summary.txt"));

    c.seed = 5;
    CHECK(cmd_sweep(c).exit_code == 0);
    CHECK(slurp(a.path / "sweep.csv") != slurp(b.path / "sweep.csv"));

    TempDir t("table1");
    c = tiny(t.path);
    const auto tr = cmd_table1(c);
    CHECK(tr.exit_code == 0);
    const std::string csv = slurp(t.path / "table1.csv");
    CHECK(csv.rfind("model,trained_acc,untrained_acc,seed\n", 0) == 0);
    for (const char* m : {"supervised,", "autoencoder,", "gan,", "wgan,"}) CHECK(csv.find(m) != std::string::npos);
    CHECK(tr.summary.find("(") != std::string::npos);
}

TEST_CASE("diverging cells are marked and give exit code 2") {
    TempDir tmp("diverge");
    RunConfig c = tiny(tmp.path);
    c.sweep_rho_l = {0.0};
    c.sweep_rho_r = {1.0};
    c.phase1.optimizer.kind = nn::OptimizerKind::Sgd;
    c.phase1.optimizer.learning_rate = 1e300;
    c.phase1.batch_size = 1;
    const auto r = cmd_sweep(c);
    CHECK(r.exit_code == 2);
    const std::string csv = slurp(tmp.path / "sweep.csv");
    CHECK(csv.find("failed:") != std::string::npos);
    CHECK(r.summary.find("1 failed") != std::string::npos);
}
