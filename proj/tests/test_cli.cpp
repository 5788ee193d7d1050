#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef INTEGRA_CLI_PATH
#define INTEGRA_CLI_PATH "integra"
#endif
#ifndef INTEGRA_FIXTURES
#define INTEGRA_FIXTURES "fixtures"
#endif

namespace {

struct TempPath {
    std::string path;
    explicit TempPath(const std::string& name) : path("integra_cli_" + name) {}
    ~TempPath() { std::remove(path.c_str()); }
};

int run(const std::string& args) {
    const std::string cmd = std::string(INTEGRA_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace

TEST_CASE("cli: gen then solve round-trips through a market file") {
    TempPath market("gen.market");
    CHECK(run("gen --n 3 --kappa 2 --seed 7 --out " + market.path) == 0);
    const std::string text = slurp(market.path);
    CHECK(text.substr(0, 8) == "2 3,3 3,");

    TempPath solved("solve.json");
    CHECK(run("solve --market-file " + market.path + " --format json --out " + solved.path) == 0);
    const std::string solution = slurp(solved.path);
    CHECK(solution.find("\"total_proposals\"") != std::string::npos);
    CHECK(solution.find("\"pairs\"") != std::string::npos);
}

TEST_CASE("cli: solve accepts a population restriction") {
    TempPath out("solve_pop.txt");
    CHECK(run("solve --n 2 --kappa 2 --seed 1 --population 0 --out " + out.path) == 0);
    const std::string text = slurp(out.path);
    CHECK(text.find("m0.0") != std::string::npos);
    CHECK(text.find("m1.0") == std::string::npos); // community 1 not in play
}

TEST_CASE("cli: verify reports scheme properties on a fixture") {
    TempPath out("verify.json");
    CHECK(run(std::string("verify --market-file ") + INTEGRA_FIXTURES +
              "/prop1_2x2.market --out " + out.path) == 0);
    const std::string text = slurp(out.path);
    CHECK(text.find("\"mosm_stable\": true") != std::string::npos);
    CHECK(text.find("\"mosm_scheme_wim\": false") != std::string::npos);
    CHECK(text.find("\"half_society_bound\": true") != std::string::npos);
    CHECK(text.find("\"frac_worse\": 0.5") != std::string::npos);
}

TEST_CASE("cli: a small campaign emits aggregate and record files") {
    TempPath agg("table1.csv"), records("records.csv");
    CHECK(run("table1 --n 3 --kappa 2 --runs 5 --seed 2 --workers 2 --out " + agg.path +
              " --records " + records.path) == 0);
    const std::string table = slurp(agg.path);
    CHECK(table.find("# schema: integra.table.fractions.v1") != std::string::npos);
    CHECK(table.find("pct_worse_mean") != std::string::npos);
    const std::string recs = slurp(records.path);
    CHECK(recs.find("# schema: integra.runrecord.v1") != std::string::npos);
}

TEST_CASE("cli: bad arguments exit nonzero") {
    CHECK(run("solve --market-file does_not_exist.market") != 0);
    CHECK(run("gen --rho 1.5 --n 2") != 0);
    CHECK(run("unknown-subcommand") != 0);
}
