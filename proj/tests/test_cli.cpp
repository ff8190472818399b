#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "experiments.hpp"

namespace fs = std::filesystem;
using betasparse::experiments::run_cli;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("betasparse_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "betasparse");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (header[k] == name) return k;
    }
    FAIL("missing column " << name);
    return 0;
}

}  // namespace

TEST_CASE("exit codes") {
    const auto dir = scratch("exit");
    CHECK(cli({"--out", dir.string(), "--iters", "200", "toy"}) == 0);
    CHECK(cli({"--beta", "3", "--out", dir.string(), "toy"}) == 2);
    CHECK(cli({"--beta", "1", "--out", dir.string(), "rho-sweep"}) == 2);
    CHECK(cli({"--out", dir.string()}) != 0);
    CHECK(cli({"--no-such-flag", "toy"}) != 0);
    fs::remove_all(dir);
}

TEST_CASE("toy run recovers the half-mass Dirac at x = 1") {
    const auto dir = scratch("toy");
    REQUIRE(cli({"--out", dir.string(), "--points", "0:1", "--rho", "0", "toy"}) == 0);
    const auto rows = read_csv(dir / "toy_summary.csv");
    REQUIRE(rows.size() >= 2);
    const auto& header = rows[0];
    bool seen = false;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r][column(header, "method")] != "multiplicative") continue;
        seen = true;
        CHECK(std::stod(rows[r][column(header, "oracle_xi")]) == doctest::Approx(0.5));
        CHECK(std::stod(rows[r][column(header, "total_mass")]) == doctest::Approx(0.5).epsilon(0.05));
        CHECK(std::stod(rows[r][column(header, "loss")]) == doctest::Approx(0.25).epsilon(0.004));
    }
    CHECK(seen);
    CHECK(fs::exists(dir / "toy_point0_multiplicative.png"));
    CHECK(fs::exists(dir / "toy_point0_multiplicative.png.meta.txt"));
    CHECK(fs::exists(dir / "toy_point0_profile.csv"));
    fs::remove_all(dir);
}

TEST_CASE("same seed gives byte-identical csv output") {
    const auto a = scratch("seed_a");
    const auto b = scratch("seed_b");
    for (const auto& dir : {a, b}) {
        REQUIRE(cli({"--out", dir.string(), "--n_pixels", "16", "--n_angles", "12", "--n_tangential", "23",
                     "--iters", "40", "--seed", "7", "tomo"}) == 0);
    }
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        if (entry.path().extension() != ".csv") continue;
        ++compared;
        CAPTURE(entry.path().filename().string());
        CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
    }
    CHECK(compared >= 5);
    CHECK(fs::exists(a / "tomo_phantom.png"));
    CHECK(fs::exists(a / "tomo_phantom.png.meta.txt"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("config file is read and command-line flags override it") {
    const auto dir = scratch("config");
    fs::create_directories(dir);
    const auto cfg = dir / "sweep.cfg";
    {
        std::ofstream out(cfg);
        out << "n_pixels = 12\nn_angles = 8\nn_tangential = 17\niters = 30\nrho = 0,1,10\n";
    }
    const auto out_dir = dir / "run";
    REQUIRE(cli({"--config", cfg.string(), "--rho", "0,5", "--out", out_dir.string(), "rho-sweep"}) == 0);
    auto rows = read_csv(out_dir / "rho_sweep.csv");
    REQUIRE(rows.size() == 3);
    CHECK(std::stod(rows[2][column(rows[0], "rho")]) == doctest::Approx(5.0));

    const auto out_dir2 = dir / "run2";
    REQUIRE(cli({"--config", cfg.string(), "--out", out_dir2.string(), "rho-sweep"}) == 0);
    rows = read_csv(out_dir2 / "rho_sweep.csv");
    CHECK(rows.size() == 4);
    const auto meta = slurp(out_dir2 / "rho_sweep_phantom.png.meta.txt");
    CHECK(meta.find("width=12") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("noise-demo writes one row per model, dispersion and component") {
    const auto dir = scratch("noise");
    REQUIRE(cli({"--out", dir.string(), "--phis", "0.1,1", "--draws", "500", "noise-demo"}) == 0);
    const auto rows = read_csv(dir / "noise_demo.csv");
    REQUIRE(rows.size() > 1);
    const auto& header = rows[0];
    CHECK(header == std::vector<std::string>{"model", "phi", "component", "w", "mean", "variance", "std_error",
                                             "median_abs_error"});
    std::set<std::string> keys;
    for (std::size_t r = 1; r < rows.size(); ++r) keys.insert(rows[r][0] + "|" + rows[r][1] + "|" + rows[r][2]);
    CHECK(keys.size() == rows.size() - 1);
    CHECK(rows.size() - 1 == 4 * 2 * 4);
    fs::remove_all(dir);
}
