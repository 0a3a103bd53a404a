#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "persuasion/csv.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args, const std::string& tag) {
    const std::string out_path = "cli_out_" + tag + ".txt";
    const std::string cmd = std::string(CLI_BINARY) + " " + args + " > " + out_path + " 2> cli_err_" + tag + ".txt";
    const int status = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    res.output = ss.str();
    return res;
}

std::string scenario(const std::string& name) { return std::string(SCENARIO_DIR) + "/" + name; }

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

double parse_after(const std::string& text, const std::string& prefix) {
    const size_t pos = text.find(prefix);
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + prefix.size()));
}

}  // namespace

TEST_CASE("solve prints the worked-example summary") {
    const RunResult res = run_cli("solve " + scenario("appendix_a.json"), "solve");
    CHECK(res.exit_code == 0);
    CHECK(contains(res.output, "baseline: action=share platform=0.45"));
    CHECK(contains(res.output, "platform utility: 0.75"));
    CHECK(contains(res.output, "P(s=1)=0.8"));
    CHECK(contains(res.output, "persuasive: yes"));
}

TEST_CASE("solve writes a CSV that round-trips") {
    const RunResult res = run_cli("solve " + scenario("appendix_a.json") + " --csv cli_solve.csv", "solvecsv");
    CHECK(res.exit_code == 0);

    std::ifstream in("cli_solve.csv");
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(contains(line, "kind,theta_hat"));
    int scheme_rows = 0;
    std::string summary;
    while (std::getline(in, line)) {
        if (line.rfind("scheme,", 0) == 0) ++scheme_rows;
        if (line.rfind("summary,", 0) == 0) summary = line;
    }
    CHECK(scheme_rows == 4);
    REQUIRE(!summary.empty());

    // values re-parsed from CSV reproduce their shortest representation exactly
    std::stringstream ss(summary);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() >= 11);
    CHECK(cells[6] == "0.8");   // p_share
    CHECK(cells[9] == "0.75");  // platform utility
    for (size_t i = 5; i <= 10; ++i) {
        if (cells[i].empty()) continue;
        const double v = std::stod(cells[i]);
        CHECK(persuasion::format_double(v) == cells[i]);
    }
}

TEST_CASE("solve reports missing files on exit code 1") {
    const RunResult res = run_cli("solve " + scenario("no_such_scenario.json"), "missing");
    CHECK(res.exit_code == 1);
}

TEST_CASE("oracle agrees with the LP when the grid holds the optimum") {
    const RunResult res = run_cli("oracle " + scenario("appendix_a.json") + " --grid 0.333333", "oracle3");
    CHECK(res.exit_code == 0);
    const double gap = parse_after(res.output, "gap (lp - oracle): ");
    CHECK(gap >= -1e-9);
    CHECK(gap <= 1e-9);
}

TEST_CASE("coarser oracle grids stay below the LP value") {
    const RunResult res = run_cli("oracle " + scenario("appendix_a.json") + " --grid 0.25", "oracle4");
    CHECK(res.exit_code == 0);
    const double oracle_value = parse_after(res.output, "oracle value: ");
    CHECK(oracle_value <= 0.75 + 1e-9);
    const double gap = parse_after(res.output, "gap (lp - oracle): ");
    CHECK(gap >= -1e-9);
}

TEST_CASE("oracle refuses oversized grids with exit code 3") {
    const RunResult res = run_cli("oracle " + scenario("big_scenario.json") + " --grid 0.05", "oraclebig");
    CHECK(res.exit_code == 3);
}

TEST_CASE("performative run reports stabilization") {
    const RunResult res =
        run_cli("performative " + scenario("appendix_a.json") + " --lambda 0 --rounds 10", "perf0");
    CHECK(res.exit_code == 0);
    CHECK(contains(res.output, "stable_at: 1"));
    CHECK(contains(res.output, "0.9375"));
    CHECK(contains(res.output, "monotone utility: yes"));
}

TEST_CASE("performative halving distances under lambda one half") {
    const RunResult res = run_cli(
        "performative " + scenario("appendix_a.json") + " --lambda 0.5 --tol 1e-3 --rounds 16 --csv cli_perf.csv",
        "perf5");
    CHECK(res.exit_code == 0);
    CHECK(contains(res.output, "converged_at: 8"));

    std::ifstream in("cli_perf.csv");
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,alpha,p_share,platform_utility,distance_to_target");
    double prev_dist = -1.0;
    int rows = 0;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() == 5);
        const double dist = std::stod(cells[4]);
        if (rows > 0 && prev_dist > 1e-4) CHECK(dist == doctest::Approx(0.5 * prev_dist).epsilon(1e-6));
        prev_dist = dist;
        ++rows;
    }
    CHECK(rows >= 9);
}

TEST_CASE("lambda one trace is immediately stable") {
    const RunResult res = run_cli("performative " + scenario("appendix_a.json") + " --lambda 1", "perf1");
    CHECK(res.exit_code == 0);
    CHECK(contains(res.output, "stable_at: 0"));
}

TEST_CASE("monotone check certifies improvement toward the identity classifier") {
    const RunResult res = run_cli(
        "check-monotone " + scenario("appendix_a_noisy.json") + " " + scenario("appendix_a.json"), "monoyes");
    CHECK(res.exit_code == 0);
    CHECK(contains(res.output, "guaranteed for all instances: yes"));

    const RunResult rev = run_cli(
        "check-monotone " + scenario("appendix_a.json") + " " + scenario("appendix_a_noisy.json"), "monono");
    CHECK(rev.exit_code == 0);
    CHECK(contains(rev.output, "guaranteed for all instances: no"));
    CHECK(contains(rev.output, "NOT member"));
}

TEST_CASE("verify passes and is byte-identical for a fixed seed") {
    const RunResult a = run_cli("verify " + scenario("appendix_a.json") + " --seed 7 --trials 12", "verify_a");
    CHECK(a.exit_code == 0);
    CHECK(contains(a.output, "all properties passed"));
    const RunResult b = run_cli("verify " + scenario("appendix_a.json") + " --seed 7 --trials 12", "verify_b");
    CHECK(b.exit_code == 0);
    CHECK(a.output == b.output);

    const RunResult c = run_cli("verify " + scenario("appendix_a.json") + " --seed 8 --trials 12", "verify_c");
    CHECK(c.exit_code == 0);  // same verdicts on a different sample
    CHECK(c.output != a.output);
}
