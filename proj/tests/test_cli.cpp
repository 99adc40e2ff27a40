#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "parkfn/parking.hpp"

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = parkfn::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("pmf emits the exact law of the first place") {
    const auto r = run_cli({"pmf", "--n", "2", "--k", "1"});
    CHECK(r.code == 0);
    CHECK(r.out == "i1,probability\n1,0.666666666667\n2,0.333333333333\n");
}

TEST_CASE("enumerate count-only") {
    const auto r = run_cli({"enumerate", "--n", "3", "--count-only"});
    CHECK(r.code == 0);
    CHECK(r.out == "count\n16\n");
}

TEST_CASE("enumerate lists parking functions") {
    const auto r = run_cli({"enumerate", "--n", "2"});
    CHECK(r.code == 0);
    CHECK(r.out == "index,places\n0,1 1\n1,1 2\n2,2 1\n");
}

TEST_CASE("sample is reproducible and valid") {
    const auto a = run_cli({"sample", "--n", "9", "--samples", "1", "--seed", "0"});
    const auto b = run_cli({"sample", "--n", "9", "--samples", "1", "--seed", "0"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);

    const auto lines = lines_of(a.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "sample,places");
    std::istringstream row(lines[1].substr(lines[1].find(',') + 1));
    std::vector<int> places;
    int v;
    while (row >> v) places.push_back(v);
    REQUIRE(places.size() == 9);
    CHECK(parkfn::parking::is_parking(places));
}

TEST_CASE("every emitted sample is a parking function") {
    const auto r = run_cli({"sample", "--n", "20", "--samples", "5", "--seed", "4"});
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 6);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::istringstream row(lines[i].substr(lines[i].find(',') + 1));
        std::vector<int> places;
        int v;
        while (row >> v) places.push_back(v);
        CHECK(parkfn::parking::is_parking(places));
    }
}

TEST_CASE("exit codes") {
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"frobnicate"}).code == 2);
    CHECK(run_cli({"sample", "--n", "5", "--bogus"}).code == 2);
    CHECK(run_cli({"sample"}).code == 2);                              // missing --n
    CHECK(run_cli({"enumerate", "--n", "9"}).code == 1);               // size guard
    CHECK(run_cli({"pmf", "--n", "300", "--k", "3"}).code == 1);       // no feasible method
    CHECK(run_cli({"pmf", "--n", "4", "--k", "1", "--method", "monte-carlo"}).code == 2);
    CHECK(run_cli({"tail", "--n", "100", "--c", "0", "--a", "1"}).code == 2);
    CHECK(run_cli({"tail", "--n", "100", "--c", "0.5", "--a", "25"}).code == 1);
    CHECK(run_cli({"tv", "--n", "300", "--k", "1", "--method", "exact-dp"}).code == 1);
    CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("json output carries config and results") {
    const auto r = run_cli({"sample", "--n", "5", "--samples", "2", "--seed", "1",
                            "--format", "json"});
    CHECK(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc.at("config").at("command") == "sample");
    CHECK(doc.at("config").at("seed") == 1);
    CHECK(doc.at("config").at("n").at(0) == 5);
    REQUIRE(doc.at("results").size() == 2);
    for (const auto& row : doc.at("results")) {
        std::vector<int> places = row.at("places");
        CHECK(parkfn::parking::is_parking(places));
    }
}

TEST_CASE("csv bodies are independent of the worker count") {
    const auto t1 = run_cli({"limit-sum", "--n", "100", "--k", "5", "--samples", "300",
                             "--seed", "3", "--threads", "1"});
    const auto t2 = run_cli({"limit-sum", "--n", "100", "--k", "5", "--samples", "300",
                             "--seed", "3", "--threads", "2"});
    CHECK(t1.code == 0);
    CHECK(t1.out == t2.out);
}

TEST_CASE("tv sweep emits one row per n") {
    const auto r = run_cli({"tv", "--n", "2,4", "--k", "1", "--method", "exact-dp"});
    CHECK(r.code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "n,k,method,samples,stderr,value,sqrt_n_times_value");
    CHECK(lines[1].substr(0, 21) == "2,1,exact-dp,0,0,0.33");
}

TEST_CASE("kolmogorov emits its schema") {
    const auto r = run_cli({"kolmogorov", "--n", "2", "--k", "1"});
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "n,k,method,samples,grid_points,stderr,value");
    CHECK(lines[1] == "2,1,exact-dp,0,0,0,0.166666666667");
}

TEST_CASE("cdf emits one row per offset") {
    const auto single = run_cli({"cdf", "--n", "5", "--k", "2", "--a", "1"});
    CHECK(lines_of(single.out).size() == 2);
    const auto sweep = run_cli({"cdf", "--n", "5", "--k", "2"});
    CHECK(lines_of(sweep.out).size() == 6);
    const auto a0 = run_cli({"cdf", "--n", "5", "--k", "2", "--a", "0"});
    CHECK(lines_of(a0.out)[1] == "5,2,0,1");
}

TEST_CASE("output lands in --out unchanged") {
    const std::string path = "cli_out_test.tmp";
    const auto direct = run_cli({"pmf", "--n", "3", "--k", "1"});
    const auto filed = run_cli({"pmf", "--n", "3", "--k", "1", "--out", path});
    CHECK(filed.code == 0);
    CHECK(filed.out.empty());
    std::ifstream in(path, std::ios::binary);
    std::stringstream content;
    content << in.rdbuf();
    CHECK(content.str() == direct.out);
    std::remove(path.c_str());
}

TEST_CASE("per-command sample defaults do not bleed") {
    const auto lmax = run_cli({"limit-max", "--n", "20", "--k", "2", "--format", "json"});
    CHECK(nlohmann::json::parse(lmax.out).at("config").at("samples") == 2000);
    const auto tail = run_cli({"tail", "--n", "200", "--c", "0.5", "--a", "0", "--format", "json"});
    CHECK(nlohmann::json::parse(tail.out).at("config").at("samples") == 50000);
    const auto kol = run_cli({"kolmogorov", "--n", "2", "--k", "1", "--format", "json"});
    CHECK(nlohmann::json::parse(kol.out).at("config").at("samples") == 10000);
}

TEST_CASE("selftest passes and reports each check") {
    const auto r = run_cli({"selftest"});
    CHECK(r.code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() > 3);
    CHECK(lines[0] == "check,pass");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        CHECK(lines[i].substr(lines[i].find(',') + 1) == "true");
    }
}

}  // TEST_SUITE
