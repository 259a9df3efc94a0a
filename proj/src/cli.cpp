#include "cpd/cli.hpp"

#include "cpd/datagen.hpp"
#include "cpd/engine.hpp"
#include "cpd/montecarlo.hpp"
#include "cpd/multiplier.hpp"
#include "cpd/sphere.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

namespace cpd::cli {
namespace {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int exit_code_for(const Error& e) {
    switch (e.code) {
        case ErrorCode::ParseError:
        case ErrorCode::NonFinite:
        case ErrorCode::TooSmall:
        case ErrorCode::Empty:
        case ErrorCode::IoError:
            return kExitParse;
        default:
            return kExitUsage;
    }
}

int fail(const Error& e, std::ostream& err) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
}

bool parse_cell(const std::string& cell, double& value) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    while (first < last && (*first == ' ' || *first == '\t')) ++first;
    while (last > first && (*(last - 1) == ' ' || *(last - 1) == '\t')) --last;
    if (first == last) return false;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc() && ptr == last;
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(current);
            current.clear();
        } else if (c != '\r') {
            current.push_back(c);
        }
    }
    cells.push_back(current);
    return cells;
}

Eigen::Index auto_directions(Eigen::Index m, Eigen::Index d) {
    return m > 0 ? m : default_direction_count(d);
}

}  // namespace

Eigen::MatrixXd read_csv_matrix(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    long line_no = 0;
    Eigen::Index width = -1;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_cells(line);
        std::vector<double> row(cells.size());
        bool ok = true;
        std::size_t bad_col = 0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (!parse_cell(cells[c], row[c])) {
                ok = false;
                bad_col = c;
                break;
            }
        }
        if (!ok) {
            if (first_content_line) {  // header line, skip it
                first_content_line = false;
                continue;
            }
            throw Error(ErrorCode::ParseError,
                        "line " + std::to_string(line_no) + ", column " +
                            std::to_string(bad_col + 1) + ": '" + cells[bad_col] +
                            "' is not a number",
                        line_no, static_cast<long>(bad_col + 1));
        }
        if (width < 0) {
            width = static_cast<Eigen::Index>(row.size());
        } else if (static_cast<Eigen::Index>(row.size()) != width) {
            throw Error(ErrorCode::ParseError,
                        "line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                            " columns, got " + std::to_string(row.size()),
                        line_no);
        }
        first_content_line = false;
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw Error(ErrorCode::ParseError, "no data rows found");
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), width);
    for (Eigen::Index r = 0; r < out.rows(); ++r)
        for (Eigen::Index c = 0; c < out.cols(); ++c) out(r, c) = rows[r][c];
    return out;
}

Sample load_sample(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    return validate_sample(read_csv_matrix(in));
}

json report_to_json(const TestReport& report) {
    json j;
    j["family"] = to_token(report.stat.family);
    j["combiner"] = to_token(report.stat.combiner);
    j["method"] = to_token(report.method);
    j["observed"] = report.observed;
    j["p_value"] = report.p_value;
    j["k_hat"] = report.k_hat;
    j["seed"] = report.seed;
    j["m"] = report.m;
    j["n"] = report.n;
    j["d"] = report.d;
    j["profile"] = std::vector<double>(report.profile.values.begin(), report.profile.values.end());
    j["replicates"] = std::vector<double>(report.replicates.begin(), report.replicates.end());
    return j;
}

TestReport report_from_json(const json& j) {
    TestReport report;
    report.stat.family = family_from_token(j.at("family").get<std::string>());
    report.stat.combiner = combiner_from_token(j.at("combiner").get<std::string>());
    report.method = method_from_token(j.at("method").get<std::string>());
    report.observed = j.at("observed").get<double>();
    report.p_value = j.at("p_value").get<double>();
    report.k_hat = j.at("k_hat").get<Eigen::Index>();
    report.seed = j.at("seed").get<std::uint64_t>();
    report.m = j.at("m").get<Eigen::Index>();
    report.n = j.at("n").get<Eigen::Index>();
    report.d = j.at("d").get<Eigen::Index>();
    const auto profile = j.at("profile").get<std::vector<double>>();
    report.profile.n = report.n;
    report.profile.values =
        Eigen::Map<const Eigen::ArrayXd>(profile.data(), static_cast<Eigen::Index>(profile.size()));
    const auto reps = j.at("replicates").get<std::vector<double>>();
    report.replicates =
        Eigen::Map<const Eigen::ArrayXd>(reps.data(), static_cast<Eigen::Index>(reps.size()));
    return report;
}

int cmd_test(const CliConfig& config, std::ostream& out, std::ostream& err) {
    Sample sample;
    try {
        sample = load_sample(config.input);
    } catch (const Error& e) {
        return fail(e, err);
    }
    try {
        if (!config.seed_set)
            throw Error(ErrorCode::OutOfRange, "--seed is required");
        std::vector<std::pair<StatFamily, Method>> stats;
        bool needs_directions = false;
        for (Family f : config.families)
            for (Combiner c : config.combiners) {
                stats.push_back({StatFamily{f, c}, config.method});
                needs_directions |= uses_directions(f);
            }
        DirectionSet dirs;
        Eigen::Index m = 0;
        if (needs_directions) {
            m = auto_directions(config.m, sample.d());
            dirs = discretize(sample.d(), m);
        }
        const auto reports = run_tests(sample, stats, config.replicates, config.seed,
                                       needs_directions ? &dirs : nullptr,
                                       config.share_multipliers, config.workers);
        json output = json::array();
        for (const auto& report : reports) {
            json j;
            j["statistic"] = to_token(report.stat);
            j["family"] = to_token(report.stat.family);
            j["combiner"] = to_token(report.stat.combiner);
            j["method"] = to_token(report.method);
            j["n"] = report.n;
            j["d"] = report.d;
            j["m"] = report.m;
            j["N"] = config.replicates;
            j["seed"] = report.seed;
            j["observed"] = report.observed;
            j["p_value"] = report.p_value;
            j["k_hat"] = report.k_hat;
            output.push_back(std::move(j));
        }
        out << (output.size() == 1 ? output.front().dump(2) : output.dump(2)) << '\n';
        return kExitOk;
    } catch (const Error& e) {
        return fail(e, err);
    }
}

int cmd_estimate(const CliConfig& config, std::ostream& out, std::ostream& err) {
    Sample sample;
    try {
        sample = load_sample(config.input);
    } catch (const Error& e) {
        return fail(e, err);
    }
    try {
        const Family family = config.families.front();
        StatProfile profile;
        Eigen::Index m = 0;
        if (uses_directions(family)) {
            m = auto_directions(config.m, sample.d());
            const DirectionSet dirs = discretize(sample.d(), m);
            const ProjectionTable table = build_projection_table(sample, dirs);
            profile = observed_profile(family, nullptr, &table);
        } else {
            const OrthantTable table = build_orthant_table(sample);
            profile = observed_profile(family, &table, nullptr);
        }
        json j;
        j["family"] = to_token(family);
        j["n"] = sample.n();
        j["d"] = sample.d();
        j["m"] = m;
        j["k_hat"] = estimate_changepoint(profile);
        if (config.include_profile)
            j["profile"] =
                std::vector<double>(profile.values.begin(), profile.values.end());
        out << j.dump(2) << '\n';
        return kExitOk;
    } catch (const Error& e) {
        return fail(e, err);
    }
}

int cmd_simulate(const CliConfig& config, std::ostream& out, std::ostream& err) {
    try {
        std::ifstream in(config.spec_path);
        if (!in)
            throw Error(ErrorCode::IoError, "cannot open '" + config.spec_path + "'");
        KeyValues kv = KeyValues::parse(in);
        ExperimentSpec spec = parse_experiment(kv);
        if (config.seed_set) spec.scenario.seed = config.seed;
        if (config.full_tables) {
            spec.trials = 1000;
            spec.replicates = 1000;
        }
        const ExperimentResult result = run_experiment(spec, config.workers);
        emit_table(result, out);
        return kExitOk;
    } catch (const Error& e) {
        return fail(e, err);
    }
}

int cmd_discretize(const CliConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const Eigen::Index d = config.dimension;
        const Eigen::Index m = auto_directions(config.m, d);
        const DirectionSet dirs = discretize(d, m);
        for (Eigen::Index c = 0; c < dirs.d(); ++c)
            out << (c ? "," : "") << 'a' << (c + 1);
        out << '\n';
        for (Eigen::Index l = 0; l < dirs.m(); ++l) {
            for (Eigen::Index c = 0; c < dirs.d(); ++c)
                out << (c ? "," : "") << fmt17(dirs.directions(l, c));
            out << '\n';
        }
        return kExitOk;
    } catch (const Error& e) {
        return fail(e, err);
    }
}

}  // namespace cpd::cli
