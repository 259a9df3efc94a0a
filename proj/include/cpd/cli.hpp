#pragma once

#include "cpd/model.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cpd::cli {

/// Parsed command-line configuration; defaults follow the library defaults
/// (N = 1000, alpha = 0.05, m chosen by dimension, multipliers shared).
struct CliConfig {
    std::string command;
    std::string input;            // CSV data file (test/estimate)
    std::string spec_path;        // scenario file (simulate)
    std::vector<Family> families = {Family::S};
    std::vector<Combiner> combiners = {Combiner::Max};
    Method method = Method::Check;
    Eigen::Index replicates = 1000;  // N
    Eigen::Index m = 0;              // 0 = auto by dimension (1/8/32)
    Eigen::Index dimension = 0;      // discretize only
    double alpha = 0.05;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool share_multipliers = true;
    bool include_profile = false;  // estimate
    bool full_tables = false;      // simulate: force R = N = 1000
    int workers = 0;
};

/// Exit codes: 0 success, 2 input that fails to parse or validate,
/// 3 invalid option combinations.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitUsage = 3;

/// Reads comma-separated numeric columns. A non-numeric first line is taken
/// as a header and skipped. Throws Error{ParseError} with 1-based line and
/// column on malformed cells or ragged rows.
Eigen::MatrixXd read_csv_matrix(std::istream& in);

/// read_csv_matrix + validate_sample; throws Error{IoError} if the file
/// cannot be opened.
Sample load_sample(const std::string& path);

/// Full, lossless serialization of a report (profile and replicates
/// included); report_from_json(report_to_json(r)) reproduces r exactly.
nlohmann::json report_to_json(const TestReport& report);
TestReport report_from_json(const nlohmann::json& j);

int cmd_test(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_estimate(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const CliConfig& config, std::ostream& out, std::ostream& err);
int cmd_discretize(const CliConfig& config, std::ostream& out, std::ostream& err);

}  // namespace cpd::cli
