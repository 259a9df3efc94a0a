#include "cpd/montecarlo.hpp"

#include "cpd/multiplier.hpp"
#include "cpd/rng.hpp"
#include "cpd/sphere.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace cpd {

Eigen::Index default_direction_count(Eigen::Index d) {
    if (d <= 1) return 1;
    if (d == 2) return 8;
    return 32;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, int workers) {
    if (spec.trials < 1)
        throw Error(ErrorCode::InvalidN, "experiment needs at least one trial");
    if (spec.replicates < 1)
        throw Error(ErrorCode::InvalidN, "experiment needs at least one replicate per trial");
    if (!(spec.alpha > 0.0 && spec.alpha < 1.0))
        throw Error(ErrorCode::OutOfRange, "alpha must lie in (0,1)");

    const Eigen::Index d = spec.scenario.d();
    const Eigen::Index m = spec.m > 0 ? spec.m : default_direction_count(d);
    bool needs_directions = false;
    for (const auto& req : spec.stats) needs_directions |= uses_directions(req.stat.family);
    const DirectionSet dirs = needs_directions ? discretize(d, m) : DirectionSet{};

    ExperimentResult result;
    result.trials = spec.trials;
    result.replicates = spec.replicates;
    result.alpha = spec.alpha;

    for (std::size_t cell_idx = 0; cell_idx < spec.stats.size(); ++cell_idx) {
        const StatRequest& req = spec.stats[cell_idx];
        std::vector<char> reject(spec.trials, 0);
        const auto t0 = std::chrono::steady_clock::now();
        parallel_for_index(spec.trials, workers, [&](Eigen::Index r) {
            const std::uint64_t trial = spec.scenario.seed ^ static_cast<std::uint64_t>(r);
            ScenarioSpec scenario = spec.scenario;
            scenario.seed = substream_seed(trial, 0);
            const Sample sample = generate(scenario);
            const std::uint64_t test_seed = substream_seed(
                trial, spec.share_multipliers ? 1 : 2 + static_cast<std::uint64_t>(cell_idx));
            const TestReport report =
                run_test(sample, req.stat, req.method, spec.replicates, test_seed,
                         needs_directions ? &dirs : nullptr, 1);
            reject[r] = report.p_value <= spec.alpha ? 1 : 0;
        });
        const auto t1 = std::chrono::steady_clock::now();

        Eigen::Index hits = 0;
        for (char c : reject) hits += c;
        const double p_hat = static_cast<double>(hits) / static_cast<double>(spec.trials);
        CellResult cell;
        cell.request = req;
        cell.rejection_pct = 100.0 * p_hat;
        cell.mc_se = std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(spec.trials));
        cell.seconds = std::chrono::duration<double>(t1 - t0).count();
        result.cells.push_back(cell);
    }
    return result;
}

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void emit_table(const ExperimentResult& result, std::ostream& out) {
    out << "stat,method,rejection_pct,mc_se,seconds\n";
    for (const auto& cell : result.cells) {
        out << to_token(cell.request.stat) << ',' << to_token(cell.request.method) << ','
            << fmt17(cell.rejection_pct) << ',' << fmt17(cell.mc_se) << ','
            << fmt17(cell.seconds) << '\n';
    }
    if (!out)
        throw Error(ErrorCode::IoError, "failed to write the result table");
}

std::vector<StatRequest> parse_stat_requests(const std::string& text) {
    std::vector<StatRequest> out;
    std::stringstream ss(text);
    std::string entry;
    while (std::getline(ss, entry, ',')) {
        std::string token = entry;
        token.erase(0, token.find_first_not_of(" \t"));
        token.erase(token.find_last_not_of(" \t") + 1);
        if (token.empty()) continue;
        const auto colon = token.find(':');
        if (colon == std::string::npos)
            throw Error(ErrorCode::ParseError,
                        "bad statistic entry '" + token + "' (expected e.g. s_max:check)");
        StatRequest req;
        req.stat = stat_from_token(token.substr(0, colon));
        req.method = method_from_token(token.substr(colon + 1));
        out.push_back(req);
    }
    if (out.empty())
        throw Error(ErrorCode::ParseError, "statistic list is empty");
    return out;
}

ExperimentSpec parse_experiment(KeyValues& kv) {
    ExperimentSpec spec;
    spec.scenario = parse_scenario(kv);

    const auto stats_text = kv.get("stats");
    spec.stats = parse_stat_requests(stats_text ? *stats_text : "s_max:check");

    const auto read_count = [&kv](const std::string& key, Eigen::Index fallback,
                                  bool required) -> Eigen::Index {
        const auto text = required ? std::optional<std::string>(kv.require(key)) : kv.get(key);
        if (!text) return fallback;
        try {
            std::size_t used = 0;
            const long long v = std::stoll(*text, &used);
            if (used != text->size()) throw std::invalid_argument(*text);
            return static_cast<Eigen::Index>(v);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError,
                        "expected an integer for '" + key + "', got '" + *text + "'");
        }
    };
    spec.trials = read_count("R", 0, true);
    spec.replicates = read_count("N", 1000, false);
    spec.m = read_count("m", 0, false);

    if (const auto alpha_text = kv.get("alpha")) {
        try {
            std::size_t used = 0;
            spec.alpha = std::stod(*alpha_text, &used);
            if (used != alpha_text->size()) throw std::invalid_argument(*alpha_text);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError,
                        "expected a number for 'alpha', got '" + *alpha_text + "'");
        }
    }
    if (const auto share_text = kv.get("share_multipliers")) {
        if (*share_text == "true" || *share_text == "1" || *share_text == "on")
            spec.share_multipliers = true;
        else if (*share_text == "false" || *share_text == "0" || *share_text == "off")
            spec.share_multipliers = false;
        else
            throw Error(ErrorCode::ParseError,
                        "expected true/false for 'share_multipliers', got '" + *share_text + "'");
    }
    kv.finish();
    return spec;
}

}  // namespace cpd
