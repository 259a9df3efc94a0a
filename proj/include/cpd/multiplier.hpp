#pragma once

#include "cpd/engine.hpp"
#include "cpd/model.hpp"

#include <utility>
#include <vector>

namespace cpd {

/// One global-statistic value per multiplier replicate, reproducible
/// bit-exactly from (seed, method, statistic, sample).
struct ReplicateSet {
    Eigen::ArrayXd values;
    Method method = Method::Check;
    std::uint64_t seed = 0;
};

/// Per-split profiles of one multiplier replicate: mean_sq feeds the S/U
/// statistics, max_abs the T/V statistics. Both come out of a single sweep
/// over the shared table, so testing several statistics reuses the work.
struct ReplicateProfiles {
    StatProfile mean_sq;
    StatProfile max_abs;
};

/// Multiplier-process profiles for one weight row. The check variant centers
/// observations at the full-sample empirical mean; the hat variant centers
/// the head weights at their prefix mean and the tail weights at their
/// suffix mean. Cost is O(n^2) per row for orthant tables and O(n^2 m) for
/// projection tables. Throws Error{LengthMismatch} if xi has the wrong size.
ReplicateProfiles replicate_profiles(const OrthantTable& t, const Eigen::VectorXd& xi,
                                     Method method);
ReplicateProfiles replicate_profiles(const ProjectionTable& t, const Eigen::VectorXd& xi,
                                     Method method);

double replicate_check(const OrthantTable& t, const Eigen::VectorXd& xi, StatFamily stat);
double replicate_check(const ProjectionTable& t, const Eigen::VectorXd& xi, StatFamily stat);
double replicate_hat(const OrthantTable& t, const Eigen::VectorXd& xi, StatFamily stat);
double replicate_hat(const ProjectionTable& t, const Eigen::VectorXd& xi, StatFamily stat);

/// Exact count of replicates >= observed (weak inequality), divided by N.
double pvalue(double observed, const ReplicateSet& reps);

/// Runs one test: builds the table for the requested family, computes the
/// observed statistic and change-point estimate, draws N standard-normal
/// multiplier rows (replicate j from substream_seed(seed, j)) and assembles
/// the report. Method::Sim dispatches to run_sim_test and requires d = 1 and
/// an orthant family. U/V need a direction set matching the sample dimension.
TestReport run_test(const Sample& s, StatFamily stat, Method method, Eigen::Index replicates,
                    std::uint64_t seed, const DirectionSet* dirs = nullptr, int workers = 1);

/// Several statistics on one data set. With share_multipliers every test
/// uses the multiplier rows derived from `seed` (coherent multi-statistic
/// reports); otherwise test i uses substream_seed(seed, i).
std::vector<TestReport> run_tests(const Sample& s,
                                  const std::vector<std::pair<StatFamily, Method>>& stats,
                                  Eigen::Index replicates, std::uint64_t seed,
                                  const DirectionSet* dirs, bool share_multipliers,
                                  int workers = 1);

/// Univariate rank-simulation test: replicate j is the same global statistic
/// computed on a fresh Uniform(0,1) sample of size n drawn from
/// substream_seed(seed, j). Valid only for d = 1 and families S/T.
TestReport run_sim_test(const Sample& s, StatFamily stat, Eigen::Index replicates,
                        std::uint64_t seed, int workers = 1);

}  // namespace cpd
