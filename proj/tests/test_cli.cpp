#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "testing.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path scratch()
{
    static const fs::path d = [] {
        fs::path p = fs::temp_directory_path() / ("lamegf_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return d;
}

fs::path write_config(const std::string& name, const std::string& text)
{
    const fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p;
}

Run run(const std::string& args)
{
    const fs::path o = scratch() / "stdout.txt", e = scratch() / "stderr.txt";
    const std::string cmd = std::string(LAMEGF_CLI_PATH) + " " + args + " >" + o.string() + " 2>" + e.string();
    const int st = std::system(cmd.c_str());
    return {WEXITSTATUS(st), slurp(o), slurp(e)};
}

const char* eval_cfg = R"({
  "geometry": "qp2d",
  "medium": {"lambda": 2, "mu": 1, "rho": 1, "omega": 3},
  "quasi_momentum": {"alpha": 0.4},
  "eval": {"y": [0, 0], "x1": {"min": 0.1, "max": 0.9, "n": 3}, "x2": {"min": 0.3, "max": 0.6, "n": 2}}
})";

} // namespace

TEST(Cli, VerifyQuasiPeriodicity)
{
    auto r = run("verify --suite quasiperiodicity");
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["pass"].get<bool>());
    for (auto& c : j["checks"])
        EXPECT_LE(c["worst"].get<double>(), 1e-12);
}

TEST(Cli, MissingMu)
{
    auto p = write_config("nomu.json", R"({"medium": {"lambda": 2, "rho": 1, "omega": 3},
        "eval": {"x1": {"min": 0, "max": 1}, "x2": {"min": 0.5, "max": 0.5}}})");
    auto r = run("eval --config " + p.string());
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("ConfigError"), std::string::npos);
    EXPECT_NE(r.err.find("medium.mu"), std::string::npos);
}

TEST(Cli, BadJsonAndBadArgs)
{
    auto p = write_config("broken.json", "{\"medium\": ");
    EXPECT_EQ(run("eval --config " + p.string()).code, 2);
    EXPECT_EQ(run("eval").code, 2);
    EXPECT_EQ(run("nosuchcommand").code, 2);
    EXPECT_EQ(run("verify --suite nosuchsuite").code, 2);
}

TEST(Cli, EvalDeterministic)
{
    auto p = write_config("eval.json", eval_cfg);
    auto a = run("eval --config " + p.string());
    auto b = run("eval --config " + p.string());
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out.rfind("# config: ", 0), 0u);
    int lines = 0;
    for (char c : a.out)
        lines += c == '\n';
    EXPECT_EQ(lines, 2 + 6);
    const fs::path o = scratch() / "eval.csv";
    ASSERT_EQ(run("eval --config " + p.string() + " --out " + o.string()).code, 0);
    EXPECT_EQ(slurp(o), a.out);
}

TEST(Cli, EvalOtherGeometries)
{
    auto p = write_config("eval3.json", R"({
      "medium": {"lambda": 2, "mu": 1, "rho": 1, "omega": 3},
      "quasi_momentum": {"alpha": 0.4, "alpha2": 0.2},
      "eval": {"y": [0, 0, 0], "x1": {"min": 0.1, "max": 0.1}, "x2": {"min": 0.3, "max": 0.3},
               "x3": {"min": 0.5, "max": 0.7, "n": 2}}})");
    for (const char* g : {"qp3d", "biqp3d"}) {
        auto r = run(std::string("eval --geometry ") + g + " --config " + p.string());
        EXPECT_EQ(r.code, 0) << r.err;
        EXPECT_NE(r.out.find("G33_re"), std::string::npos);
    }
}

TEST(Cli, DomainErrorsExitThree)
{
    auto p = write_config("near.json", R"({
      "medium": {"lambda": 2, "mu": 1, "rho": 1, "omega": 3},
      "eval": {"y": [0, 0], "x1": {"min": 0.1, "max": 0.1}, "x2": {"min": 0.0, "max": 0.0}}})");
    auto r = run("eval --config " + p.string());
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("NearSourceLine"), std::string::npos);
}

TEST(Cli, Solve2D)
{
    auto p = write_config("solve.json", R"({
      "medium": {"lambda": 2, "mu": 1, "rho": 1, "omega": 3},
      "profile": {"a": [0.1]},
      "solver": {"N": 64, "incident": {"kind": "plane_p", "theta": 0.3}}})");
    auto r = run("solve2d --config " + p.string());
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["config"]["quasi_momentum"]["alpha"].get<double>(), 1.5 * std::sin(0.3), 1e-15);
    EXPECT_LT(j["boundary_residual"].get<double>(), 1e-6);
    EXPECT_LT(j["energy"]["relative"].get<double>(), 1e-3);
    EXPECT_EQ(j["density"].size(), 64u);
}

TEST(Cli, RayleighRoundtrip)
{
    auto pe = write_config("reval.json", R"({
      "medium": {"lambda": 2, "mu": 1, "rho": 1, "omega": 9},
      "quasi_momentum": {"alpha": 0.6},
      "rayleigh": {"coefficients": [{"m": 0, "up": [1, 0], "us": [0.5, -0.2]}, {"m": 1, "up": [0, 0.3], "us": [0.1, 0]}],
                   "points": [[0, 0.2], [0.125, 0.2], [0.25, 0.2], [0.375, 0.2], [0.5, 0.2], [0.625, 0.2], [0.75, 0.2], [0.875, 0.2]]}})");
    auto r = run("rayleigh eval --config " + pe.string());
    ASSERT_EQ(r.code, 0) << r.err;
    std::stringstream ss(r.out);
    std::string line;
    nlohmann::json samples = nlohmann::json::array();
    std::getline(ss, line);
    std::getline(ss, line);
    while (std::getline(ss, line)) {
        std::stringstream ls(line);
        std::string cell;
        std::vector<double> v;
        while (std::getline(ls, cell, ','))
            v.push_back(std::stod(cell));
        samples.push_back({v[2], v[3], v[4], v[5]});
    }
    ASSERT_EQ(samples.size(), 8u);
    nlohmann::json cfg = {{"medium", {{"lambda", 2}, {"mu", 1}, {"rho", 1}, {"omega", 9}}},
                          {"quasi_momentum", {{"alpha", 0.6}}},
                          {"rayleigh", {{"h", 0.2}, {"M", 1}, {"samples", samples}}}};
    auto px = write_config("rext.json", cfg.dump());
    auto x = run("rayleigh extract --config " + px.string());
    ASSERT_EQ(x.code, 0) << x.err;
    auto j = nlohmann::json::parse(x.out);
    for (auto& t : j["coefficients"]) {
        const int m = t["m"];
        const std::vector<double> up = t["up"], us = t["us"];
        if (m == 0) {
            EXPECT_NEAR(up[0], 1, 1e-10);
            EXPECT_NEAR(us[0], 0.5, 1e-10);
            EXPECT_NEAR(us[1], -0.2, 1e-10);
        } else if (m == 1) {
            EXPECT_NEAR(up[1], 0.3, 1e-10);
            EXPECT_NEAR(us[0], 0.1, 1e-10);
        } else {
            EXPECT_NEAR(std::hypot(up[0], up[1]) + std::hypot(us[0], us[1]), 0, 1e-10);
        }
    }
}

TEST(Cli, PhaselessSynthAndCheck)
{
    auto p = write_config("ph.json", R"({
      "medium": {"lambda": 2, "mu": 1, "rho": 1, "omega": 3},
      "quasi_momentum": {"alpha": 0.4},
      "profile": {"a": [0.1]},
      "phaseless": {"N": 32, "sources": {"n_movable": 2, "n_meas": 4}}})");
    const fs::path ds = scratch() / "ds.json";
    auto r = run("phaseless synth --config " + p.string() + " --out " + ds.string());
    ASSERT_EQ(r.code, 0) << r.err;
    auto c = write_config("chk.json", "{\"phaseless\": {\"check\": {\"a\": \"" + ds.string() + "\"}}}");
    auto k = run("phaseless check --config " + c.string());
    ASSERT_EQ(k.code, 0) << k.err;
    auto j = nlohmann::json::parse(k.out);
    EXPECT_EQ(j["per_frequency"][0]["cosine_discrepancy"].get<double>(), 0.0);
    EXPECT_LE(j["triangle_excess"].get<double>(), 1e-14);
    EXPECT_TRUE(j["per_frequency"][0]["zero_tracks"].empty());
}

TEST(Cli, ThreadsAcceptedAndRecorded)
{
    auto r = run("verify --suite reciprocity --geometry qp2d --threads 4 --seed 7");
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["config"]["verify"]["threads"].get<int>(), 4);
    EXPECT_EQ(j["seed"].get<int>(), 7);
}
