#pragma once

#include "cpd/datagen.hpp"
#include "cpd/model.hpp"

#include <iosfwd>
#include <vector>

namespace cpd {

struct StatRequest {
    StatFamily stat;
    Method method = Method::Check;
};

struct ExperimentSpec {
    ScenarioSpec scenario;  // scenario.seed acts as the experiment base seed
    std::vector<StatRequest> stats;
    Eigen::Index trials = 0;       // R
    Eigen::Index replicates = 0;   // N per trial
    double alpha = 0.05;
    Eigen::Index m = 0;            // 0 selects 1/8/32 by dimension
    bool share_multipliers = true;
};

struct CellResult {
    StatRequest request;
    double rejection_pct = 0.0;  // in [0,100]
    double mc_se = 0.0;          // sqrt(p(1-p)/R) on the proportion scale
    double seconds = 0.0;
};

struct ExperimentResult {
    std::vector<CellResult> cells;
    Eigen::Index trials = 0;
    Eigen::Index replicates = 0;
    double alpha = 0.05;
};

Eigen::Index default_direction_count(Eigen::Index d);

/// Runs R independent trials of generate -> run_test for every requested
/// statistic. Trial r derives its data seed from substream_seed(base ^ r, 0)
/// and its multiplier seed from substream_seed(base ^ r, 1) (with the cell
/// index mixed in when multipliers are not shared), so results do not depend
/// on the worker count. A trial rejects when p_value <= alpha.
ExperimentResult run_experiment(const ExperimentSpec& spec, int workers = 0);

/// CSV with columns stat,method,rejection_pct,mc_se,seconds; numbers carry
/// 17 significant digits so parsing the table back recovers them exactly.
void emit_table(const ExperimentResult& result, std::ostream& out);

/// Experiment keys on top of the scenario keys: stats (comma-separated
/// family_combiner:method entries, default s_max:check), R, N, alpha, m,
/// share_multipliers. Rejects unknown keys by name.
ExperimentSpec parse_experiment(KeyValues& kv);

std::vector<StatRequest> parse_stat_requests(const std::string& text);

}  // namespace cpd
