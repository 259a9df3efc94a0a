#include "cpd/cli.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <nlohmann/json.hpp>

#include "support/helpers.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cpd;
using cpd::cli::CliConfig;
using nlohmann::json;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path.string();
}

}  // namespace

TEST_CASE("csv reader handles headers, blanks and bad cells", "[cli]") {
    std::istringstream with_header("x,y\n1,2\n3,4\n\n5,6\n");
    const Eigen::MatrixXd m = cli::read_csv_matrix(with_header);
    REQUIRE(m.rows() == 3);
    REQUIRE(m.cols() == 2);
    REQUIRE(m(2, 1) == 6.0);

    std::istringstream no_header("1.5,2\n-3e2,nan\n");
    const Eigen::MatrixXd m2 = cli::read_csv_matrix(no_header);
    REQUIRE(m2(0, 0) == 1.5);
    REQUIRE(std::isnan(m2(1, 1)));  // rejected later by validate_sample

    std::istringstream bad("1,2\n3,oops\n");
    try {
        cli::read_csv_matrix(bad);
        FAIL("expected an error");
    } catch (const Error& e) {
        REQUIRE(e.code == ErrorCode::ParseError);
        REQUIRE(e.row == 2);
        REQUIRE(e.col == 2);
    }

    std::istringstream ragged("1,2\n3\n");
    REQUIRE_THROWS_AS(cli::read_csv_matrix(ragged), Error);

    std::istringstream only_header("name,other\n");
    REQUIRE_THROWS_AS(cli::read_csv_matrix(only_header), Error);
}

TEST_CASE("cmd_test emits a schema-stable JSON object", "[cli]") {
    const std::string path = write_temp("cpd_cli_test.csv", "0.1\n-0.4\n1.2\n0.3\n-1.1\n0.9\n");
    CliConfig config;
    config.input = path;
    config.families = {Family::S};
    config.combiners = {Combiner::Max};
    config.method = Method::Check;
    config.replicates = 25;
    config.seed = 11;
    config.seed_set = true;

    std::ostringstream out, err;
    REQUIRE(cli::cmd_test(config, out, err) == cli::kExitOk);
    const json j = json::parse(out.str());
    for (const char* key : {"statistic", "family", "combiner", "method", "n", "d", "m", "N",
                            "seed", "observed", "p_value", "k_hat"})
        REQUIRE(j.contains(key));
    REQUIRE(j["n"] == 6);
    REQUIRE(j["d"] == 1);
    REQUIRE(j["m"] == 0);
    REQUIRE(j["statistic"] == "s_max");

    std::ostringstream out2, err2;
    REQUIRE(cli::cmd_test(config, out2, err2) == cli::kExitOk);
    REQUIRE(out.str() == out2.str());  // byte-identical reruns
    std::filesystem::remove(path);
}

TEST_CASE("cmd_test covers multiple statistics in one run", "[cli]") {
    const std::string path =
        write_temp("cpd_cli_multi.csv", "0.1,3\n-0.4,2\n1.2,0\n0.3,1\n-1.1,4\n0.9,5\n");
    CliConfig config;
    config.input = path;
    config.families = {Family::S, Family::V};
    config.combiners = {Combiner::Max, Combiner::Mean};
    config.method = Method::Check;
    config.replicates = 10;
    config.seed = 3;
    config.seed_set = true;

    std::ostringstream out, err;
    REQUIRE(cli::cmd_test(config, out, err) == cli::kExitOk);
    const json j = json::parse(out.str());
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 4);
    REQUIRE(j[3]["statistic"] == "v_mean");
    REQUIRE(j[3]["m"] == 8);
    std::filesystem::remove(path);
}

TEST_CASE("cmd_test maps flag misuse and bad input to exit codes", "[cli]") {
    const std::string path = write_temp("cpd_cli_d2.csv", "1,2\n2,1\n3,4\n");
    CliConfig config;
    config.input = path;
    config.method = Method::Sim;
    config.seed = 1;
    config.seed_set = true;

    std::ostringstream out, err;
    REQUIRE(cli::cmd_test(config, out, err) == cli::kExitUsage);
    REQUIRE(err.str().find("univariate") != std::string::npos);
    std::filesystem::remove(path);

    CliConfig missing;
    missing.input = "/nonexistent/file.csv";
    missing.seed_set = true;
    std::ostringstream out2, err2;
    REQUIRE(cli::cmd_test(missing, out2, err2) == cli::kExitParse);

    const std::string bad = write_temp("cpd_cli_bad.csv", "1\nfoo\n");
    CliConfig bad_config;
    bad_config.input = bad;
    bad_config.seed_set = true;
    std::ostringstream out3, err3;
    REQUIRE(cli::cmd_test(bad_config, out3, err3) == cli::kExitParse);
    REQUIRE(err3.str().find("line 2") != std::string::npos);
    std::filesystem::remove(bad);

    const std::string nan_file = write_temp("cpd_cli_nan.csv", "1\nnan\n2\n");
    CliConfig nan_config;
    nan_config.input = nan_file;
    nan_config.seed_set = true;
    std::ostringstream out4, err4;
    REQUIRE(cli::cmd_test(nan_config, out4, err4) == cli::kExitParse);
    std::filesystem::remove(nan_file);
}

TEST_CASE("cmd_test reports a unit p-value for constant columns", "[cli]") {
    const std::string path = write_temp("cpd_cli_const.csv", "2.5\n2.5\n2.5\n2.5\n2.5\n");
    CliConfig config;
    config.input = path;
    config.replicates = 30;
    config.seed = 4;
    config.seed_set = true;
    std::ostringstream out, err;
    REQUIRE(cli::cmd_test(config, out, err) == cli::kExitOk);
    const json j = json::parse(out.str());
    REQUIRE(j["observed"] == 0.0);
    REQUIRE(j["p_value"] == 1.0);
    std::filesystem::remove(path);
}

TEST_CASE("cmd_estimate locates a strong synthetic shift", "[cli]") {
    // N(0,1) -> N(5,1) after observation 50.
    std::mt19937_64 rng(2718);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::ostringstream csv;
    for (int i = 0; i < 100; ++i) csv << normal(rng) + (i < 50 ? 0.0 : 5.0) << '\n';
    const std::string path = write_temp("cpd_cli_shift.csv", csv.str());

    CliConfig config;
    config.input = path;
    config.families = {Family::S};
    std::ostringstream out, err;
    REQUIRE(cli::cmd_estimate(config, out, err) == cli::kExitOk);
    const json j = json::parse(out.str());
    const long k_hat = j["k_hat"].get<long>();
    REQUIRE(k_hat >= 45);
    REQUIRE(k_hat <= 55);
    std::filesystem::remove(path);
}

TEST_CASE("cmd_estimate reports the first maximizer", "[cli]") {
    const std::string path = write_temp("cpd_cli_est.csv", "0\n1\n");
    CliConfig config;
    config.input = path;
    config.families = {Family::T};
    std::ostringstream out, err;
    REQUIRE(cli::cmd_estimate(config, out, err) == cli::kExitOk);
    const json j = json::parse(out.str());
    REQUIRE(j["k_hat"] == 1);
    REQUIRE(j["n"] == 2);
    REQUIRE_FALSE(j.contains("profile"));

    config.include_profile = true;
    std::ostringstream out2, err2;
    REQUIRE(cli::cmd_estimate(config, out2, err2) == cli::kExitOk);
    const json j2 = json::parse(out2.str());
    REQUIRE(j2["profile"].size() == 1);
    std::filesystem::remove(path);
}

TEST_CASE("cmd_simulate produces a two-line table for a minimal spec", "[cli]") {
    const std::string path = write_temp("cpd_cli_sim.spec",
                                        "n = 30\n"
                                        "seed = 8\n"
                                        "pre.margin1 = normal(0,1)\n"
                                        "R = 1\n"
                                        "N = 20\n");
    CliConfig config;
    config.spec_path = path;
    std::ostringstream out, err;
    REQUIRE(cli::cmd_simulate(config, out, err) == cli::kExitOk);
    std::istringstream lines(out.str());
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) ++count;
    REQUIRE(count == 2);
    std::filesystem::remove(path);

    const std::string bad = write_temp("cpd_cli_bad.spec",
                                       "n = 30\n"
                                       "seed = 8\n"
                                       "pre.margin1 = normal(0,1)\n"
                                       "R = 1\n"
                                       "mystery_key = 1\n");
    CliConfig bad_config;
    bad_config.spec_path = bad;
    std::ostringstream out2, err2;
    REQUIRE(cli::cmd_simulate(bad_config, out2, err2) == cli::kExitParse);
    REQUIRE(err2.str().find("mystery_key") != std::string::npos);
    std::filesystem::remove(bad);
}

TEST_CASE("cmd_discretize dumps a CSV direction table", "[cli]") {
    CliConfig config;
    config.dimension = 3;
    config.m = 4;
    std::ostringstream out, err;
    REQUIRE(cli::cmd_discretize(config, out, err) == cli::kExitOk);
    std::istringstream lines(out.str());
    std::string header;
    REQUIRE(std::getline(lines, header));
    REQUIRE(header == "a1,a2,a3");
    int rows = 0;
    std::string line;
    while (std::getline(lines, line)) ++rows;
    REQUIRE(rows == 4);
}
