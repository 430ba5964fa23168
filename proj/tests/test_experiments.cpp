#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cdops/experiments.hpp"

using namespace cdops;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("cdops_test_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

}  // namespace

TEST_CASE("config parsing") {
    ExperimentConfig cfg = parse_config(
        "# comment line\n"
        "group Rd_grid d=1 q=8\n"
        "experiment invert\n"
        "windows 16 32 64\n"
        "preset geometric\n"
        "tol 1e-9\n"
        "eps 0.2 0.1\n"
        "seed 7\n");
    CHECK(cfg.group == "Rd_grid d=1 q=8");
    CHECK(cfg.kind == ExperimentKind::Invert);
    CHECK(cfg.radii == std::vector<int>{16, 32, 64});
    CHECK(cfg.preset == "geometric");
    CHECK(cfg.tol == 1e-9);
    CHECK(cfg.seed == 7);

    CHECK_THROWS_AS(parse_config("bogus statement\n"), ConfigParseError);
    CHECK_THROWS_AS(parse_config("tol notanumber\n"), ConfigParseError);
    CHECK_THROWS_AS(parse_config("experiment fly\n"), ConfigParseError);
}

TEST_CASE("config validation") {
    ExperimentConfig cfg;
    cfg.group = "Zd d=1";
    cfg.kind = ExperimentKind::Invert;
    cfg.radii = {8, 4};
    CHECK_THROWS_AS(validate_config(cfg), ConfigValidationError);

    cfg.radii = {4, 8};
    cfg.tol = -1.0;
    CHECK_THROWS_AS(validate_config(cfg), ConfigValidationError);

    cfg.tol = 1e-8;
    cfg.preset = "heisenberg-walk";  // wrong group
    CHECK_THROWS_AS(validate_config(cfg), ConfigValidationError);

    cfg.preset = "geometric";
    validate_config(cfg);
    CHECK(cfg.window_kind == WindowKind::Box);
    CHECK(cfg.trials > 0);

    ExperimentConfig heis;
    heis.group = "heisenberg";
    heis.kind = ExperimentKind::Invert;
    validate_config(heis);
    CHECK(heis.window_kind == WindowKind::WordBall);
    CHECK(heis.radii == std::vector<int>{6, 8, 10});
}

TEST_CASE("geometric invert run writes the geometric profile") {
    ExperimentConfig cfg;
    cfg.group = "Zd d=1";
    cfg.kind = ExperimentKind::Invert;
    cfg.preset = "geometric";
    cfg.radii = {16, 32, 64};
    cfg.out_dir = temp_dir("geom");
    validate_config(cfg);
    RunResult res = run_experiment(cfg);
    CHECK(res.exit_code == kExitOk);

    // CSV rows for the final window must equal 0.5^k to 1e-10
    std::istringstream csv(slurp(cfg.out_dir + "/profile.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "window,label,d");
    int rows = 0;
    while (std::getline(csv, line)) {
        auto c1 = line.find(','), c2 = line.rfind(',');
        if (std::stoi(line.substr(0, c1)) != 64) continue;
        std::int64_t k = std::stoll(line.substr(c1 + 1, c2 - c1 - 1));
        double d = std::stod(line.substr(c2 + 1));
        REQUIRE(k >= 0);
        CHECK(std::abs(d - std::pow(0.5, static_cast<double>(k))) <= 1e-10);
        ++rows;
    }
    CHECK(rows > 100);

    std::string report = slurp(cfg.out_dir + "/report.txt");
    CHECK(report.find("verdict stable") != std::string::npos);
    CHECK(report.find("neumann") != std::string::npos);  // cross-check ran
}

TEST_CASE("identity norms run reports unit norms") {
    ExperimentConfig cfg;
    cfg.group = "Zd d=1";
    cfg.kind = ExperimentKind::Norms;
    cfg.preset = "identity";
    cfg.radii = {8};
    cfg.out_dir = temp_dir("norms");
    validate_config(cfg);
    RunResult res = run_experiment(cfg);
    CHECK(res.exit_code == kExitOk);
    std::string report = slurp(cfg.out_dir + "/report.txt");
    CHECK(report.find("cd_norm 1\n") != std::string::npos);
    CHECK(report.find("op_norm 1 ") != std::string::npos);
}

TEST_CASE("continuum norms run reports the quadrature refinement rate") {
    ExperimentConfig cfg;
    cfg.group = "Rd_grid d=1 q=4";
    cfg.kind = ExperimentKind::Norms;
    cfg.preset = "identity";
    cfg.radii = {6};
    cfg.out_dir = temp_dir("norms_rd");
    validate_config(cfg);
    CHECK(run_experiment(cfg).exit_code == kExitOk);
    std::string report = slurp(cfg.out_dir + "/report.txt");
    auto pos = report.find("conv-refinement q=4");
    REQUIRE(pos != std::string::npos);
    auto rpos = report.find("ratio=", pos);
    REQUIRE(rpos != std::string::npos);
    double ratio = std::stod(report.substr(rpos + 6));
    // midpoint rule: error falls like q^-2, so halving the step gains ~4x
    CHECK(ratio >= 2.5);
    CHECK(ratio <= 5.0);
}

TEST_CASE("reports are byte-identical for identical config and seed") {
    for (ExperimentKind kind : {ExperimentKind::MultiplyCheck, ExperimentKind::Overlap}) {
        ExperimentConfig cfg;
        cfg.group = "ZxS3";
        cfg.kind = kind;
        cfg.radii = {4};
        cfg.trials = 25;
        cfg.seed = 99;
        cfg.out_dir = temp_dir("repro1");
        validate_config(cfg);
        CHECK(run_experiment(cfg).exit_code == kExitOk);
        std::string first = slurp(cfg.out_dir + "/report.txt");
        cfg.out_dir = temp_dir("repro2");
        CHECK(run_experiment(cfg).exit_code == kExitOk);
        CHECK(slurp(cfg.out_dir + "/report.txt") == first);
    }
}

TEST_CASE("rudin-shapiro invert: stable verdict, aggregate matches the symbol oracle") {
    ExperimentConfig cfg;
    cfg.group = "Zd d=1";
    cfg.kind = ExperimentKind::Invert;
    cfg.preset = "rudin-shapiro";
    cfg.radii = {32, 48, 64};
    cfg.out_dir = temp_dir("rs");
    validate_config(cfg);
    RunResult res = run_experiment(cfg);
    CHECK(res.exit_code == kExitOk);
    std::string report = slurp(cfg.out_dir + "/report.txt");
    CHECK(report.find("verdict stable") != std::string::npos);

    // Fourier oracle of 1/(1 - 0.3(1+z+z^2-z^3)): aggregate of |c_k|
    const int n = 1 << 14;
    std::vector<cplx> inv_m(n);
    for (int i = 0; i < n; ++i) {
        cplx z = std::polar(1.0, 2.0 * M_PI * i / n);
        inv_m[i] = 1.0 / (1.0 - 0.3 * (1.0 + z + z * z - z * z * z));
    }
    double aggregate = 0.0;
    for (int k = -64; k <= 128; ++k) {
        cplx c = 0.0;
        for (int i = 0; i < n; ++i) {
            c += inv_m[i] * std::polar(1.0, -2.0 * M_PI * k * i / n);
        }
        aggregate += std::abs(c) / n;
    }
    auto pos = report.rfind("aggregate=");
    REQUIRE(pos != std::string::npos);
    double got = std::stod(report.substr(pos + 10));
    CHECK(got == doctest::Approx(aggregate).epsilon(0.01));
}

TEST_CASE("folner and intertwine runs succeed end to end") {
    ExperimentConfig folner;
    folner.group = "ZxS3";
    folner.kind = ExperimentKind::Folner;
    folner.eps = {0.2};
    folner.out_dir = temp_dir("folner");
    validate_config(folner);
    CHECK(run_experiment(folner).exit_code == kExitOk);

    ExperimentConfig inter;
    inter.group = "Zd d=1";
    inter.kind = ExperimentKind::Intertwine;
    inter.radii = {5};
    inter.trials = 4;
    inter.out_dir = temp_dir("inter");
    validate_config(inter);
    CHECK(run_experiment(inter).exit_code == kExitOk);
}

TEST_CASE("spectral run on the random-walk preset") {
    ExperimentConfig cfg;
    cfg.group = "Zd d=1";
    cfg.kind = ExperimentKind::Spectral;
    cfg.preset = "random-walk";
    cfg.radii = {100};
    cfg.n_max = 16;
    cfg.out_dir = temp_dir("spec");
    validate_config(cfg);
    RunResult res = run_experiment(cfg);
    CHECK(res.exit_code == kExitOk);
    std::string report = slurp(cfg.out_dir + "/report.txt");
    CHECK(report.find("self_adjoint 1") != std::string::npos);
    std::string csv = slurp(cfg.out_dir + "/spectral.csv");
    CHECK(csv.find("16,65536,2\n") != std::string::npos);  // |walk^16|_cd = 2^16 exactly
}
