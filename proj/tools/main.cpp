#include "cpd/cli.hpp"
#include "cpd/model.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

std::vector<cpd::Family> parse_family_list(const std::string& text) {
    if (text == "all") return {cpd::Family::S, cpd::Family::T, cpd::Family::U, cpd::Family::V};
    std::vector<cpd::Family> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                            : comma - pos);
        if (!tok.empty()) out.push_back(cpd::family_from_token(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw cpd::Error(cpd::ErrorCode::ParseError, "empty statistic list");
    return out;
}

std::vector<cpd::Combiner> parse_combiner_list(const std::string& text) {
    if (text == "both") return {cpd::Combiner::Max, cpd::Combiner::Mean};
    return {cpd::combiner_from_token(text)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonparametric change-point tests with multiplier-bootstrap p-values"};
    app.require_subcommand(1);

    cpd::cli::CliConfig config;
    std::string stat_text = "s";
    std::string combine_text = "max";
    std::string method_text = "check";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--workers", config.workers,
                        "worker threads (0 = all hardware threads)");
    };

    auto* test = app.add_subcommand("test", "run a change-point test on a CSV data file");
    test->add_option("--input,-i", config.input, "CSV file, one observation per row")->required();
    test->add_option("--stat", stat_text, "statistic family: s, t, u, v, a comma list, or 'all'");
    test->add_option("--combine", combine_text, "combiner: max, mean or both");
    test->add_option("--method", method_text, "resampling method: hat, check or sim");
    test->add_option("--N", config.replicates, "number of bootstrap replicates");
    test->add_option("--m", config.m, "direction count for u/v (default 8 if d=2, 32 if d>=3)");
    test->add_option("--seed", config.seed, "RNG seed (required, results are reproducible)")
        ->required();
    test->add_flag("--share-multipliers,!--no-share-multipliers", config.share_multipliers,
                   "reuse one multiplier matrix across the requested statistics");
    add_common(test);

    auto* estimate = app.add_subcommand("estimate", "report the estimated change point");
    estimate->add_option("--input,-i", config.input, "CSV file")->required();
    estimate->add_option("--stat", stat_text, "statistic family: s, t, u or v");
    estimate->add_option("--m", config.m, "direction count for u/v");
    estimate->add_flag("--profile", config.include_profile,
                       "include the per-split profile in the output");
    add_common(estimate);

    auto* simulate = app.add_subcommand("simulate", "run a Monte Carlo experiment from a spec file");
    simulate->add_option("--spec,-s", config.spec_path, "key = value experiment file")->required();
    simulate->add_option("--seed", config.seed, "override the base seed from the file");
    simulate->add_flag("--full", config.full_tables, "force R = 1000 trials and N = 1000 replicates");
    add_common(simulate);

    auto* discretize = app.add_subcommand("discretize", "dump the half-sphere direction set as CSV");
    discretize->add_option("--d", config.dimension, "dimension")->required();
    discretize->add_option("--m", config.m, "direction count (default 8 if d=2, 32 if d>=3)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cpd::cli::kExitUsage;
    }

    config.seed_set = test->count("--seed") > 0 || simulate->count("--seed") > 0;
    try {
        config.families = parse_family_list(stat_text);
        config.combiners = parse_combiner_list(combine_text);
        config.method = cpd::method_from_token(method_text);
    } catch (const cpd::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cpd::cli::kExitUsage;
    }

    if (test->parsed()) return cpd::cli::cmd_test(config, std::cout, std::cerr);
    if (estimate->parsed()) return cpd::cli::cmd_estimate(config, std::cout, std::cerr);
    if (simulate->parsed()) return cpd::cli::cmd_simulate(config, std::cout, std::cerr);
    return cpd::cli::cmd_discretize(config, std::cout, std::cerr);
}
