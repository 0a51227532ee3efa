#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

std::string tmp_dir() {
    static int counter = 0;
    std::string dir = "cli_test_tmp_" + std::to_string(counter++);
    std::system(("mkdir -p " + dir).c_str());
    return dir;
}

RunResult run_cli(const std::string& args, const std::string& config_json = "") {
    const std::string dir = tmp_dir();
    std::string cmd = std::string(DDC_CLI_PATH) + " " + args;
    if (!config_json.empty()) {
        const std::string cfg = dir + "/config.json";
        std::ofstream(cfg) << config_json;
        cmd += " --config " + cfg;
    }
    const std::string out_file = dir + "/stdout.txt";
    cmd += " > " + out_file + " 2> " + dir + "/stderr.txt";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WEXITSTATUS(status), ss.str()};
}

const char* kBmDrawdown = R"({
  "model": {"type": "bm", "mu": 0.03, "sigma": 0.4},
  "contract": {"kind": "drawdown", "a": 10, "r": 0.01, "d": 0},
  "reward": {"type": "constant", "alpha": 100}
})";

}  // namespace

TEST_CASE("price quotes the fair premium when p is omitted") {
    const RunResult r = run_cli("price", kBmDrawdown);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("fair_premium: 0.010651645") != std::string::npos);
    CHECK(r.out.find("value: 0") != std::string::npos);  // at the fair premium the value vanishes
}

TEST_CASE("price reports the cancellation threshold and conditions") {
    const char* cfg = R"({
      "model": {"type": "bm", "mu": 0.03, "sigma": 0.4},
      "contract": {"kind": "drawdown-cancellable", "a": 10, "r": 0.01, "p": 0.2, "d": 6},
      "reward": {"type": "constant", "alpha": 100},
      "penalty": {"type": "linear_c1"}
    })";
    const RunResult r = run_cli("price", cfg);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("theta_star: 4.590426") != std::string::npos);
    CHECK(r.out.find("war1: holds") != std::string::npos);
    CHECK(r.out.find("smooth_fit: holds") != std::string::npos);
}

TEST_CASE("validation failures exit with code 2 and print the violated invariant") {
    const char* bad_b = R"({
      "model": {"type": "bm", "mu": 0.03, "sigma": 0.4},
      "contract": {"kind": "drawup", "a": 10, "b": 12, "r": 0.01, "p": 0.1, "d": 0, "u": 0},
      "reward": {"type": "constant", "alpha": 100}
    })";
    CHECK(run_cli("price", bad_b).exit_code == 2);
    const char* r0 = R"({
      "model": {"type": "bm", "mu": 0.03, "sigma": 0.4},
      "contract": {"kind": "drawdown", "a": 10, "r": 0.0, "p": 0.1, "d": 0},
      "reward": {"type": "constant", "alpha": 100}
    })";
    CHECK(run_cli("price", r0).exit_code == 2);
    CHECK(run_cli("price --config /nonexistent.json").exit_code == 2);
    CHECK(run_cli("sweep --preset no_such_preset").exit_code == 2);
}

TEST_CASE("analytically unsupported configurations exit with code 3") {
    const char* cl_unequal = R"({
      "model": {"type": "cl", "mu_hat": 0.05, "beta": 0.1, "rho": 2.5},
      "contract": {"kind": "drawup", "a": 10, "b": 8, "r": 0.01, "p": 0.1, "d": 2, "u": 1},
      "reward": {"type": "constant", "alpha": 100}
    })";
    CHECK(run_cli("price", cl_unequal).exit_code == 3);
}

TEST_CASE("degenerate contracts exit with code 4") {
    const char* at_trigger = R"({
      "model": {"type": "bm", "mu": 0.03, "sigma": 0.4},
      "contract": {"kind": "drawdown", "a": 10, "r": 0.01, "d": 10},
      "reward": {"type": "constant", "alpha": 100},
      "solve_premium": true
    })";
    CHECK(run_cli("price", at_trigger).exit_code == 4);
}

TEST_CASE("sweep presets emit deterministic well-formed CSV") {
    const std::string dir = tmp_dir();
    const RunResult r1 = run_cli("sweep --preset p_star_bm --out " + dir + "/a.csv");
    const RunResult r2 = run_cli("sweep --preset p_star_bm --out " + dir + "/b.csv");
    CHECK(r1.exit_code == 0);
    CHECK(r2.exit_code == 0);
    std::ifstream fa(dir + "/a.csv"), fb(dir + "/b.csv");
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    REQUIRE(!sa.str().empty());
    CHECK(sa.str() == sb.str());  // byte-identical reruns

    std::istringstream in(sa.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "d,p_star_alpha50,p_star_alpha100,p_star_alpha150");
    std::string line;
    int rows = 0;
    double prev = 0.0;
    bool increasing_tail = true;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string cell;
        std::getline(ls, cell, ',');
        std::getline(ls, cell, ',');
        const double v = std::stod(cell);
        CHECK(v > 0.0);
        if (rows > 150 && v < prev) increasing_tail = false;  // blows up toward the trigger
        prev = v;
        ++rows;
    }
    CHECK(rows == 199);
    CHECK(increasing_tail);
}

TEST_CASE("sweep round trip preserves values") {
    const std::string dir = tmp_dir();
    const char* cfg = R"({
      "model": {"type": "bm", "mu": 0.03, "sigma": 0.4},
      "contract": {"kind": "drawdown", "a": 10, "r": 0.01, "p": 0.05, "d": 0},
      "reward": {"type": "constant", "alpha": 100},
      "sweep": {"variable": "d", "from": 0, "to": 9, "points": 10}
    })";
    const std::string cfg_path = dir + "/cfg.json";
    std::ofstream(cfg_path) << cfg;
    const std::string csv = dir + "/out.csv";
    const int code = WEXITSTATUS(
        std::system((std::string(DDC_CLI_PATH) + " sweep --config " + cfg_path + " --out " + csv +
                     " >/dev/null 2>&1")
                        .c_str()));
    REQUIRE(code == 0);
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "d,value,fair_premium");
    std::string line;
    REQUIRE(std::getline(in, line));
    // shortest round-trip formatting reparses exactly
    std::istringstream ls(line);
    std::string x, v;
    std::getline(ls, x, ',');
    std::getline(ls, v, ',');
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", std::stod(v));
    CHECK(std::stod(buf) == std::stod(v));
}

TEST_CASE("sweep over theta produces the surplus curve") {
    const char* cfg = R"({
      "model": {"type": "cl", "mu_hat": 0.04, "beta": 0.1, "rho": 2.5},
      "contract": {"kind": "drawup-cancellable", "a": 10, "b": 10, "r": 0.01, "p": 0.6, "d": 5, "u": 2},
      "reward": {"type": "linear", "alpha1": 100, "alpha2": 20},
      "penalty": {"type": "linear_c3", "c_end": 35},
      "sweep": {"variable": "theta", "from": -2.5, "to": 5.0, "points": 16}
    })";
    const RunResult r = run_cli("sweep", cfg);
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("theta,h_surplus", 0) == 0);
}

TEST_CASE("validate runs a suite end to end and flags corruption") {
    const char* ok_cfg = R"({
      "model": {"type": "cl", "mu_hat": 0.05, "beta": 0.1, "rho": 2.5},
      "contract": {"kind": "drawdown", "a": 10, "r": 0.01, "d": 0},
      "reward": {"type": "linear", "alpha1": 100, "alpha2": 10},
      "mc": {"n_paths": 20000, "seed": 5, "suite": "exit-cl"}
    })";
    const RunResult ok = run_cli("validate", ok_cfg);
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("ALL OK") != std::string::npos);

    const char* corrupt_cfg = R"({
      "model": {"type": "cl", "mu_hat": 0.05, "beta": 0.1, "rho": 2.5},
      "contract": {"kind": "drawdown", "a": 10, "r": 0.01, "d": 0},
      "reward": {"type": "linear", "alpha1": 100, "alpha2": 10},
      "mc": {"n_paths": 20000, "seed": 5, "suite": "exit-cl",
             "model_override": {"type": "cl", "mu_hat": 0.08, "beta": 0.1, "rho": 2.5}}
    })";
    const RunResult bad = run_cli("validate", corrupt_cfg);
    CHECK(bad.exit_code == 5);
}
