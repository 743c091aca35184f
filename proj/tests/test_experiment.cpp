#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "driftlab/experiment.hpp"

using namespace driftlab;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    return std::string((std::istreambuf_iterator<char>(f)), {});
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

ExperimentConfig tiny_config(const fs::path& out) {
    ExperimentConfig cfg;
    cfg.scenario = Scenario::fixed_prior;
    cfg.truth_beta = 1.0;
    cfg.truth_norm = 1.0;
    cfg.truth_K = 20;
    cfg.T_ladder = {5.0};
    cfg.seeds = {1};
    cfg.dt = 1e-3;
    cfg.ball_n = 128;
    cfg.out_dir = out.string();
    cfg.workers = 1;
    return cfg;
}

#ifdef DRIFTLAB_CLI
int run_cli(const std::string& args) {
    const std::string cmd = std::string(DRIFTLAB_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}
#endif

} // namespace

TEST_CASE("config files parse into the documented keys", "[experiment]") {
    const std::string text = R"(
# comment
scenario = scale_hier
truth_beta = 1.5
truth_norm = 0.8
truth_profile = random_sign
truth_K = 64
T_ladder = 100, 400
seeds = 3, 5, 8
dt = 1e-3
grid_size = 12
scale_alpha = 1.25
out = somewhere
workers = 2
)";
    const ExperimentConfig cfg = parse_config_text(text);
    REQUIRE(cfg.scenario == Scenario::scale_hier);
    REQUIRE(cfg.truth_beta == 1.5);
    REQUIRE(cfg.truth_profile == TestDriftProfile::random_sign);
    REQUIRE(cfg.T_ladder == std::vector<double>{100.0, 400.0});
    REQUIRE(cfg.seeds == std::vector<std::uint64_t>{3, 5, 8});
    REQUIRE(cfg.grid_size == 12);
    REQUIRE(cfg.scale_alpha == 1.25);
    REQUIRE(cfg.out_dir == "somewhere");
    REQUIRE(cfg.workers == 2);
    cfg.validate();

    REQUIRE_THROWS_AS(parse_config_text("no_such_key = 1"), ValidationError);
    REQUIRE_THROWS_AS(parse_config_text("dt = banana"), ValidationError);
    REQUIRE_THROWS_AS(parse_config_text("just a line"), ValidationError);
}

TEST_CASE("config validation catches bad designs", "[experiment]") {
    ExperimentConfig cfg = tiny_config("unused");
    SECTION("unsorted ladder") {
        cfg.T_ladder = {100.0, 50.0};
        REQUIRE_THROWS_AS(cfg.validate(), ValidationError);
    }
    SECTION("duplicate seeds") {
        cfg.seeds = {1, 1};
        REQUIRE_THROWS_AS(cfg.validate(), ValidationError);
    }
    SECTION("dt too coarse for the shortest horizon") {
        cfg.dt = 0.1; // min(T)/100 = 0.05
        REQUIRE_THROWS_AS(cfg.validate(), ValidationError);
    }
    SECTION("grid too small") {
        cfg.grid_size = 4;
        REQUIRE_THROWS_AS(cfg.validate(), ValidationError);
    }
}

TEST_CASE("config hash is deterministic and sensitive", "[experiment]") {
    const ExperimentConfig a = tiny_config("x");
    ExperimentConfig b = tiny_config("y"); // output dir is not part of the hash
    REQUIRE(a.config_hash() == b.config_hash());
    b.truth_beta = 2.0;
    REQUIRE(a.config_hash() != b.config_hash());
    ExperimentConfig c = tiny_config("x");
    c.seeds = {2};
    REQUIRE(a.config_hash() != c.config_hash());
}

TEST_CASE("simulate stage writes deterministic path files", "[experiment]") {
    TempDir dir("driftlab_sim_test");
    ExperimentConfig cfg = tiny_config(dir.path);

    const auto files = run_simulate(cfg);
    REQUIRE(files.size() == 1);
    REQUIRE(fs::exists(dir.path / "path_T5_s1.dlab"));
    const std::string first = slurp(files[0]);

    // rerun: byte-identical
    run_simulate(cfg);
    REQUIRE(slurp(files[0]) == first);

    // a second seed gives a different path
    cfg.seeds = {1, 2};
    const auto files2 = run_simulate(cfg);
    REQUIRE(files2.size() == 2);
    REQUIRE(slurp(dir.path / "path_T5_s1.dlab") !=
            slurp(dir.path / "path_T5_s2.dlab"));

    // manifest records rows and the config hash
    const auto manifest = nlohmann::json::parse(slurp(dir.path / "manifest_simulate.json"));
    REQUIRE(manifest.at("config_hash") == cfg.config_hash());
    REQUIRE(manifest.at("rows").size() == 2);
    REQUIRE(manifest.at("rows")[0].contains("seed"));
}

TEST_CASE("file and streaming sources produce identical rate rows", "[experiment]") {
    TempDir dir("driftlab_infer_test");
    ExperimentConfig cfg = tiny_config(dir.path);
    cfg.T_ladder = {5.0, 10.0};
    cfg.seeds = {1, 2};
    run_simulate(cfg);

    const InferResult from_files = run_infer(cfg, FilePathSource(dir.path), false);
    const InferResult streamed = run_infer(cfg, StreamingPathSource(), false);
    REQUIRE(from_files.table.size() == 4);
    REQUIRE(streamed.table.size() == 4);
    for (std::size_t i = 0; i < from_files.table.size(); ++i) {
        REQUIRE(from_files.table[i].error ==
                Approx(streamed.table[i].error).epsilon(1e-9));
        REQUIRE(from_files.table[i].mass_outside ==
                Approx(streamed.table[i].mass_outside).margin(1e-12));
        REQUIRE(from_files.table[i].seed == streamed.table[i].seed);
    }
}

TEST_CASE("infer names the missing path file", "[experiment]") {
    TempDir dir("driftlab_missing_test");
    ExperimentConfig cfg = tiny_config(dir.path);
    try {
        run_infer(cfg, FilePathSource(dir.path), false);
        FAIL("expected IoError");
    } catch (const IoError& e) {
        REQUIRE(std::string(e.what()).find("path_T5_s1.dlab") != std::string::npos);
    }
}

TEST_CASE("rate tables round trip through CSV byte-identically", "[experiment]") {
    TempDir dir("driftlab_csv_test");
    ExperimentConfig cfg = tiny_config(dir.path);
    cfg.seeds = {1, 2};
    run_simulate(cfg);
    run_infer(cfg, FilePathSource(dir.path));
    const std::string bytes = slurp(dir.path / "rate_table.csv");
    REQUIRE(bytes.rfind("T,error,mass_outside,seed,hyper\n", 0) == 0);

    run_infer(cfg, FilePathSource(dir.path));
    REQUIRE(slurp(dir.path / "rate_table.csv") == bytes);

    const RateTable t = read_rate_csv(dir.path / "rate_table.csv");
    REQUIRE(t.size() == 2);
    REQUIRE(t[0].hyper == "fixed_prior(alpha=1;L=1)");
}

TEST_CASE("hierarchical scenarios run end to end at toy scale", "[experiment]") {
    TempDir dir("driftlab_hier_test");
    for (Scenario sc : {Scenario::scale_hier, Scenario::alpha_hier}) {
        ExperimentConfig cfg = tiny_config(dir.path / scenario_name(sc));
        cfg.scenario = sc;
        cfg.T_ladder = {50.0};
        cfg.seeds = {7};
        cfg.grid_size = 8;
        cfg.k_cap = 64;
        const InferResult r = run_infer(cfg, StreamingPathSource(), false);
        REQUIRE(r.table.size() == 1);
        REQUIRE(std::isfinite(r.table[0].error));
        REQUIRE(r.rows[0].K <= 64);
        if (sc == Scenario::alpha_hier) {
            REQUIRE(r.rows[0].weighted_alpha > 0.0);
            REQUIRE(r.rows[0].weighted_alpha < std::log(50.0));
        } else {
            REQUIRE(r.rows[0].weighted_scale > 0.0);
        }
    }
}

TEST_CASE("report merges tables and appends fit columns", "[experiment]") {
    TempDir dir("driftlab_report_test");
    const fs::path d1 = dir.path / "a";
    const fs::path d2 = dir.path / "b";
    fs::create_directories(d1);
    fs::create_directories(d2);

    // synthetic tables with disjoint horizons, 3 + 3 horizons, 5 seeds each
    RateTable t1, t2;
    for (double T : {100.0, 200.0, 400.0})
        for (std::uint64_t s = 1; s <= 5; ++s)
            t1.push_back({T, std::pow(T, -1.0 / 3.0), 0.1, s, "fixed_prior(alpha=1;L=1)"});
    for (double T : {800.0, 1600.0, 3200.0})
        for (std::uint64_t s = 1; s <= 5; ++s)
            t2.push_back({T, std::pow(T, -1.0 / 3.0), 0.1, s, "fixed_prior(alpha=1;L=1)"});
    write_rate_csv(t1, d1 / "rate_table.csv");
    write_rate_csv(t2, d2 / "rate_table.csv");

    SECTION("one directory: rows preserved, fit columns added") {
        const RateTable merged = run_report({d1}, dir.path / "out1");
        REQUIRE(merged.size() == t1.size());
        std::ifstream f(dir.path / "out1" / "report.csv");
        std::string header;
        std::getline(f, header);
        REQUIRE(header == "T,error,mass_outside,seed,hyper,log_T,log_error,fit_log_error");
        std::size_t lines = 0;
        std::string line;
        while (std::getline(f, line)) ++lines;
        REQUIRE(lines == t1.size());
        const std::string fits = slurp(dir.path / "out1" / "fits.csv");
        REQUIRE(fits.find("fixed_prior") != std::string::npos);
    }
    SECTION("two directories: union of rows") {
        const RateTable merged = run_report({d1, d2}, dir.path / "out2");
        REQUIRE(merged.size() == t1.size() + t2.size());
    }
    SECTION("directory without a table is an explicit error") {
        const fs::path empty = dir.path / "empty";
        fs::create_directories(empty);
        REQUIRE_THROWS_AS(run_report({empty}, dir.path / "out3"), IoError);
    }
    SECTION("schema mismatch is an explicit error") {
        const fs::path bad = dir.path / "bad";
        fs::create_directories(bad);
        std::ofstream f(bad / "rate_table.csv");
        f << "T,error,seed\n1,2,3\n";
        f.close();
        REQUIRE_THROWS_AS(run_report({bad}, dir.path / "out4"), IoError);
    }
    SECTION("no input directories") {
        REQUIRE_THROWS_AS(run_report({}, dir.path / "out5"), ValidationError);
    }
}

TEST_CASE("theory stage writes ladders, the grid, and the summary",
          "[experiment][slow]") {
    TempDir dir("driftlab_theory_test");
    const TheoryReport rep = run_theory(0x7e0, 20000);
    write_theory_outputs(rep, dir.path);
    REQUIRE(fs::exists(dir.path / "smallball.csv"));
    REQUIRE(fs::exists(dir.path / "rkhs_grid.csv"));
    REQUIRE(fs::exists(dir.path / "normalizer.csv"));
    const auto summary = nlohmann::json::parse(slurp(dir.path / "theory_summary.json"));
    REQUIRE(summary.at("normalizers_ok") == true);
    REQUIRE(summary.at("rkhs_l2_always") == true);
    REQUIRE(summary.at("rkhs_all_pass") == true);
    REQUIRE(rep.rkhs_grid.size() > 30); // admissible subset of the 3x3x2x4 grid
    // smallball.csv carries a header plus one row per ladder point
    std::ifstream f(dir.path / "smallball.csv");
    std::string header;
    std::getline(f, header);
    REQUIRE(header.rfind("alpha,", 0) == 0);
}

#ifdef DRIFTLAB_CLI
TEST_CASE("command line exit codes", "[experiment][cli]") {
    TempDir dir("driftlab_cli_test");
    const fs::path cfg_file = dir.path / "exp.cfg";
    {
        std::ofstream f(cfg_file);
        f << "scenario = fixed_prior\nT_ladder = 5\nseeds = 1\ndt = 1e-3\n"
          << "truth_K = 20\nball_n = 128\nout = " << (dir.path / "run").string()
          << "\nworkers = 1\n";
    }
    SECTION("simulate then infer succeeds") {
        REQUIRE(run_cli("simulate --config " + cfg_file.string()) == 0);
        REQUIRE(fs::exists(dir.path / "run" / "path_T5_s1.dlab"));
        REQUIRE(run_cli("infer --config " + cfg_file.string()) == 0);
        REQUIRE(fs::exists(dir.path / "run" / "rate_table.csv"));
        REQUIRE(run_cli("report " + (dir.path / "run").string() + " --out " +
                        (dir.path / "rep").string()) == 0);
        REQUIRE(fs::exists(dir.path / "rep" / "report.csv"));
    }
    SECTION("validation failures exit 1") {
        const fs::path bad = dir.path / "bad.cfg";
        std::ofstream f(bad);
        f << "dt = 0\n";
        f.close();
        REQUIRE(run_cli("simulate --config " + bad.string()) == 1);
        REQUIRE(run_cli("simulate") == 1); // --config required
        REQUIRE(run_cli("frobnicate") == 1);
    }
    SECTION("missing inputs exit 2") {
        REQUIRE(run_cli("infer --config " + cfg_file.string() + " --out " +
                        (dir.path / "nowhere").string()) == 2);
        REQUIRE(run_cli("simulate --config " + (dir.path / "absent.cfg").string()) == 2);
    }
    SECTION("scenario and seed-base overrides are honored") {
        REQUIRE(run_cli("simulate --config " + cfg_file.string() +
                        " --scenario alpha_hier --seed-base 9 --out " +
                        (dir.path / "run2").string()) == 0);
        REQUIRE(fs::exists(dir.path / "run2" / "path_T5_s9.dlab"));
    }
}
#endif
