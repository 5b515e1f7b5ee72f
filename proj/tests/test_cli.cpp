#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include <json.hpp>

#include "gausscov/cli.hpp"
#include "gausscov/csv.hpp"

using namespace gausscov;
using json = nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct TempCsv {
    fs::path path;
    explicit TempCsv(const std::string& contents) {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("gausscov_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++) + ".csv");
        std::ofstream out(path);
        out << contents;
    }
    ~TempCsv() { std::error_code ec; fs::remove(path, ec); }
};

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

struct EnvGuard {
    std::string name;
    EnvGuard(const std::string& var, const std::string& value) : name(var) {
        ::setenv(var.c_str(), value.c_str(), 1);
    }
    ~EnvGuard() { ::unsetenv(name.c_str()); }
};

const std::string simple_csv =
    "y,x1,x2\n"
    "1.0,0.1,2.0\n"
    "2.0,0.2,1.0\n"
    "3.0,0.3,4.0\n"
    "4.0,0.4,3.0\n";

} // namespace

TEST_CASE("load_csv reads the documented layout") {
    TempCsv file(simple_csv);
    const Dataset d = load_csv(file.path.string(), "y");
    REQUIRE(d.n_obs() == 4);
    REQUIRE(d.n_cols() == 2);
    REQUIRE(d.names == std::vector<std::string>{"x1", "x2"});
    REQUIRE(d.response == std::vector<double>{1.0, 2.0, 3.0, 4.0});
    REQUIRE(d.columns[1] == std::vector<double>{2.0, 1.0, 4.0, 3.0});
    REQUIRE_FALSE(d.intercept_added);
}

TEST_CASE("load_csv diagnostics name the offending location") {
    SECTION("missing file") {
        REQUIRE_THROWS_WITH(load_csv("/nonexistent/nowhere.csv", "y"),
                            Catch::Matchers::ContainsSubstring("cannot open"));
    }
    SECTION("missing response column") {
        TempCsv file(simple_csv);
        REQUIRE_THROWS_WITH(load_csv(file.path.string(), "z"),
                            Catch::Matchers::ContainsSubstring("\"z\""));
    }
    SECTION("non-numeric cell cites row and column") {
        TempCsv file("y,x1,x2\n1,2,3\n4,5,6\n7,8,abc\n9,10,11\n");
        try {
            load_csv(file.path.string(), "y");
            FAIL("expected a parse error");
        } catch (const invalid_input_error& e) {
            const std::string msg = e.what();
            REQUIRE(msg.find("row 3") != std::string::npos);
            REQUIRE(msg.find("x2") != std::string::npos);
            REQUIRE(msg.find("abc") != std::string::npos);
        }
    }
    SECTION("non-finite cell is a distinct diagnostic") {
        TempCsv file("y,x1\n1,2\n4,inf\n7,8\n");
        REQUIRE_THROWS_WITH(load_csv(file.path.string(), "y"),
                            Catch::Matchers::ContainsSubstring("non-finite"));
    }
    SECTION("too few rows") {
        TempCsv file("y,x1\n1,2\n3,4\n");
        REQUIRE_THROWS_WITH(load_csv(file.path.string(), "y"),
                            Catch::Matchers::ContainsSubstring("at least 3"));
    }
    SECTION("ragged row") {
        TempCsv file("y,x1\n1,2\n3\n5,6\n");
        REQUIRE_THROWS_WITH(load_csv(file.path.string(), "y"),
                            Catch::Matchers::ContainsSubstring("row 2"));
    }
    SECTION("unknown drop column") {
        TempCsv file(simple_csv);
        REQUIRE_THROWS_WITH(load_csv(file.path.string(), "y", {"nope"}),
                            Catch::Matchers::ContainsSubstring("nope"));
    }
    SECTION("dropping every covariate") {
        TempCsv file(simple_csv);
        REQUIRE_THROWS_AS(load_csv(file.path.string(), "y", {"x1", "x2"}),
                          invalid_input_error);
    }
}

TEST_CASE("load_csv honours the drop list") {
    TempCsv file(simple_csv);
    const Dataset d = load_csv(file.path.string(), "y", {"x1"});
    REQUIRE(d.n_cols() == 1);
    REQUIRE(d.names == std::vector<std::string>{"x2"});
}

TEST_CASE("select subcommand produces a parseable report") {
    // x1 is a perfect linear image of y, so it must be chosen
    TempCsv file(
        "y,x1,x2\n"
        "1.0,2.0,0.3\n"
        "2.0,4.0,0.1\n"
        "3.0,6.0,0.4\n"
        "4.0,8.0,0.15\n"
        "5.0,10.0,0.05\n");
    const auto res = run_cli({"select", "--data", file.path.string(), "--response", "y",
                              "--alpha", "0.01"});
    INFO(res.err);
    REQUIRE(res.exit_code == 0);

    const json doc = json::parse(res.out);
    REQUIRE(doc["mode"] == "select");
    REQUIRE(doc["config"]["alpha"] == 0.01);
    REQUIRE(doc["config"]["with_intercept"] == true);
    REQUIRE(doc["result"]["stop_reason"] == "perfect_fit");
    REQUIRE(doc["result"]["steps"].size() == 1);
    REQUIRE(doc["result"]["steps"][0]["chosen"] == 1);
    REQUIRE(doc["result"]["steps"][0]["q"] == 2);
    REQUIRE(doc["result"]["steps"][0]["accepted"] == true);
    // the perfect fit serializes its F as the string sentinel
    REQUIRE(doc["result"]["steps"][0]["f_max"] == "inf");
    REQUIRE(res.out.find("\"F\":\"inf\"") != std::string::npos);
    // human summary goes to stderr only
    REQUIRE(res.err.find("select:") != std::string::npos);
}

TEST_CASE("select run twice is byte-identical") {
    TempCsv file(simple_csv);
    const std::vector<std::string> args{"select", "--data", file.path.string(),
                                        "--response", "y", "--alpha", "0.2"};
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    REQUIRE(a.out == b.out);
}

TEST_CASE("select input errors exit with code 1") {
    TempCsv file(simple_csv);
    SECTION("alpha out of range") {
        const auto res = run_cli({"select", "--data", file.path.string(), "--response", "y",
                                  "--alpha", "1.5"});
        REQUIRE(res.exit_code == 1);
        REQUIRE(res.err.find("alpha") != std::string::npos);
        REQUIRE(res.out.empty());
    }
    SECTION("missing file") {
        const auto res = run_cli({"select", "--data", "/nonexistent/x.csv", "--response", "y"});
        REQUIRE(res.exit_code == 1);
    }
    SECTION("unknown flag") {
        const auto res = run_cli({"select", "--data", file.path.string(), "--response", "y",
                                  "--frobnicate"});
        REQUIRE(res.exit_code == 1);
        REQUIRE_FALSE(res.err.empty());
    }
    SECTION("no subcommand") {
        const auto res = run_cli({});
        REQUIRE(res.exit_code == 1);
    }
}

TEST_CASE("help exits cleanly") {
    const auto res = run_cli({"--help"});
    REQUIRE(res.exit_code == 0);
    REQUIRE(res.out.find("select") != std::string::npos);
    REQUIRE(res.out.find("verify-beta") != std::string::npos);
}

TEST_CASE("verify-beta emits a verification report") {
    const auto res = run_cli({"verify-beta", "--n", "15", "--k", "2", "--reps", "2000",
                              "--seed", "9"});
    INFO(res.err);
    REQUIRE(res.exit_code == 0);
    const json doc = json::parse(res.out);
    REQUIRE(doc["mode"] == "verify_beta");
    REQUIRE(doc["config"]["n"] == 15);
    REQUIRE(doc["config"]["scheme"] == "covariate");
    REQUIRE(doc["result"]["scheme"] == "gaussian_covariate");
    REQUIRE(doc["result"]["beta_params"]["a"] == 6.0);
    REQUIRE(doc["result"]["beta_params"]["b"] == 0.5);
    const double ks = doc["result"]["ks_stat"];
    REQUIRE(ks > 0.0);
    REQUIRE(ks < 1.0);
    REQUIRE(doc["result"]["reps"] == 2000);
}

TEST_CASE("verify-beta both compares the two schemes") {
    const auto res = run_cli({"verify-beta", "--n", "12", "--k", "2", "--reps", "1500",
                              "--seed", "3", "--scheme", "both"});
    REQUIRE(res.exit_code == 0);
    const json doc = json::parse(res.out);
    REQUIRE(doc["result"]["gaussian_covariate"]["scheme"] == "gaussian_covariate");
    REQUIRE(doc["result"]["standard_model"]["scheme"] == "standard_model");
    REQUIRE(doc["result"]["two_sample_ks"].is_number());
}

TEST_CASE("verify-uniform reports against the uniform law") {
    const auto res = run_cli({"verify-uniform", "--n", "12", "--k", "2", "--reps", "1500",
                              "--seed", "3", "--q", "4"});
    REQUIRE(res.exit_code == 0);
    const json doc = json::parse(res.out);
    REQUIRE(doc["mode"] == "verify_uniform");
    REQUIRE(doc["config"]["q"] == 4);
    REQUIRE(doc["result"]["beta_params"]["a"] == 1.0);
    REQUIRE(doc["result"]["theoretical_mean"] == 0.5);
}

TEST_CASE("verify-beta rejects bad arguments with exit 1") {
    const auto res = run_cli({"verify-beta", "--n", "5", "--k", "10", "--reps", "1500"});
    REQUIRE(res.exit_code == 1);
    const auto res2 = run_cli({"verify-beta", "--reps", "10"});
    REQUIRE(res2.exit_code == 1);
}

TEST_CASE("re-running from the echoed config reproduces the payload") {
    const auto first = run_cli({"verify-uniform", "--n", "14", "--k", "3", "--reps", "1200",
                                "--seed", "77", "--q", "5"});
    REQUIRE(first.exit_code == 0);
    const json cfg = json::parse(first.out)["config"];

    const auto second = run_cli({"verify-uniform",
                                 "--n", std::to_string(cfg["n"].get<std::size_t>()),
                                 "--k", std::to_string(cfg["k"].get<std::size_t>()),
                                 "--reps", std::to_string(cfg["reps"].get<std::size_t>()),
                                 "--seed", std::to_string(cfg["seed"].get<std::uint64_t>()),
                                 "--q", std::to_string(cfg["q"].get<std::size_t>()),
                                 "--ydist", cfg["y_dist"].get<std::string>()});
    REQUIRE(second.exit_code == 0);
    REQUIRE(first.out == second.out);
}

TEST_CASE("GCOV_THREADS does not change the bytes on stdout") {
    std::string first, second;
    {
        EnvGuard guard("GCOV_THREADS", "1");
        first = run_cli({"verify-uniform", "--n", "12", "--k", "2", "--reps", "2000",
                         "--seed", "5", "--q", "2"}).out;
    }
    {
        EnvGuard guard("GCOV_THREADS", "4");
        second = run_cli({"verify-uniform", "--n", "12", "--k", "2", "--reps", "2000",
                          "--seed", "5", "--q", "2"}).out;
    }
    REQUIRE_FALSE(first.empty());
    REQUIRE(first == second);
}

TEST_CASE("invalid GCOV_THREADS is an input error") {
    EnvGuard guard("GCOV_THREADS", "many");
    const auto res = run_cli({"verify-beta", "--n", "12", "--k", "2", "--reps", "1500"});
    REQUIRE(res.exit_code == 1);
    REQUIRE(res.err.find("GCOV_THREADS") != std::string::npos);
}
