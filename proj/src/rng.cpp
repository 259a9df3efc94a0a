#include "cpd/rng.hpp"

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace cpd {

std::uint64_t splitmix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for_index(Eigen::Index count, int workers,
                        const std::function<void(Eigen::Index)>& fn) {
    workers = std::min<Eigen::Index>(resolve_workers(workers), count);
    if (workers <= 1) {
        for (Eigen::Index i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const Eigen::Index chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const Eigen::Index begin = w * chunk;
        const Eigen::Index end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([begin, end, &fn] {
            for (Eigen::Index i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

MultiplierMatrix standard_normal_multipliers(Eigen::Index replicates, Eigen::Index n,
                                             std::uint64_t seed, int workers) {
    if (replicates < 1)
        throw Error(ErrorCode::InvalidN, "replicate count must be >= 1");
    MultiplierMatrix out;
    out.xi.resize(replicates, n);
    parallel_for_index(replicates, workers, [&](Eigen::Index j) {
        auto engine = make_engine(substream_seed(seed, static_cast<std::uint64_t>(j)));
        std::normal_distribution<double> normal(0.0, 1.0);
        for (Eigen::Index i = 0; i < n; ++i) out.xi(j, i) = normal(engine);
    });
    return out;
}

}  // namespace cpd
