#pragma once

#include "cpd/model.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

namespace cpd::test {

inline Sample random_sample(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd data(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index c = 0; c < d; ++c) data(i, c) = normal(rng);
    return Sample{data};
}

inline Eigen::VectorXd random_multipliers(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd xi(n);
    for (Eigen::Index i = 0; i < n; ++i) xi(i) = normal(rng);
    return xi;
}

// Kendall's tau assuming no ties (continuous data): 1 - 4 D / (n (n-1))
// with D the number of discordant pairs, counted by merge sort.
inline double kendall_tau(std::vector<double> x, std::vector<double> y) {
    const std::size_t n = x.size();
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = y[idx[i]];

    std::vector<double> buf(n);
    std::function<long long(std::size_t, std::size_t)> inversions =
        [&](std::size_t lo, std::size_t hi) -> long long {
        if (hi - lo < 2) return 0;
        const std::size_t mid = (lo + hi) / 2;
        long long count = inversions(lo, mid) + inversions(mid, hi);
        std::size_t a = lo, b = mid, out = lo;
        while (a < mid && b < hi) {
            if (ys[a] <= ys[b]) {
                buf[out++] = ys[a++];
            } else {
                count += static_cast<long long>(mid - a);
                buf[out++] = ys[b++];
            }
        }
        while (a < mid) buf[out++] = ys[a++];
        while (b < hi) buf[out++] = ys[b++];
        std::copy(buf.begin() + lo, buf.begin() + out, ys.begin() + lo);
        return count;
    };
    const long long discordant = inversions(0, n);
    return 1.0 - 4.0 * static_cast<double>(discordant) /
                     (static_cast<double>(n) * static_cast<double>(n - 1));
}

inline double kendall_tau_naive(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    long long concordant = 0, discordant = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = (x[i] - x[j]) * (y[i] - y[j]);
            if (s > 0) ++concordant;
            else if (s < 0) ++discordant;
        }
    return static_cast<double>(concordant - discordant) /
           (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

// Kolmogorov-Smirnov distance between a sample and a continuous c.d.f.
inline double ks_distance(std::vector<double> data, const std::function<double(double)>& cdf) {
    std::sort(data.begin(), data.end());
    const double n = static_cast<double>(data.size());
    double dist = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double f = cdf(data[i]);
        dist = std::max(dist, std::abs(static_cast<double>(i + 1) / n - f));
        dist = std::max(dist, std::abs(static_cast<double>(i) / n - f));
    }
    return dist;
}

}  // namespace cpd::test
