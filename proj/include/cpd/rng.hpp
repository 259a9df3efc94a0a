#pragma once

#include "cpd/model.hpp"

#include <cstdint>
#include <random>

namespace cpd {

/// SplitMix64 finalizer; bijective 64-bit mix.
std::uint64_t splitmix64(std::uint64_t z);

/// Seed-splitting rule used everywhere substreams are needed:
///   substream_seed(seed, i) = splitmix64(seed + (i + 1) * 0x9E3779B97F4A7C15)
/// Replicate j of a test uses substream_seed(test_seed, j); trial r of an
/// experiment derives its data seed from substream_seed(base ^ r, 0) and its
/// multiplier seed from substream_seed(base ^ r, 1). The rule makes every
/// replicate/trial a pure function of (seed, index), so serial and parallel
/// schedules produce bit-identical results.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

inline std::mt19937_64 make_engine(std::uint64_t seed) { return std::mt19937_64(seed); }

/// N x n standard-normal multiplier draws; row j comes from
/// substream_seed(seed, j) and is independent of how rows are scheduled.
MultiplierMatrix standard_normal_multipliers(Eigen::Index replicates, Eigen::Index n,
                                             std::uint64_t seed, int workers = 1);

/// Runs fn(i) for i in [0, count) on `workers` threads with static block
/// partitioning. workers <= 0 selects std::thread::hardware_concurrency().
/// Callers must make fn(i) independent of execution order.
void parallel_for_index(Eigen::Index count, int workers, const std::function<void(Eigen::Index)>& fn);

int resolve_workers(int workers);

}  // namespace cpd
