#include "cpd/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace cpd {
namespace {

// Shared integer core for all four observed profiles: with
// v = n*C_k(q) - k*C_n(q) the process value at (k, q) is n^{-3/2} * v, hence
//   mean-square profile  = sum over (l,q) of v^2 / (m * n^4)
//   max-abs profile      = max over (l,q) of |v| / n^{3/2}
// Sweeps feed integer count rows k = 1..n-1, one pass per direction, so the
// s/t and u/v paths produce bit-identical values whenever the counts agree.
struct ProfileAccumulator {
    explicit ProfileAccumulator(Eigen::Index n)
        : n(n), sum_sq(Eigen::ArrayX<std::int64_t>::Zero(n - 1)),
          max_abs(Eigen::ArrayX<std::int64_t>::Zero(n - 1)) {}

    void accumulate(Eigen::Index k, const std::int64_t* counts, const std::int64_t* totals) {
        std::int64_t* sq = sum_sq.data() + (k - 1);
        std::int64_t* mx = max_abs.data() + (k - 1);
        for (Eigen::Index q = 0; q < n; ++q) {
            const std::int64_t v = n * counts[q] - k * totals[q];
            *sq += v * v;
            const std::int64_t a = v < 0 ? -v : v;
            if (a > *mx) *mx = a;
        }
    }

    Eigen::Index n;
    Eigen::ArrayX<std::int64_t> sum_sq;   // indexed by k-1, summed across directions
    Eigen::ArrayX<std::int64_t> max_abs;  // indexed by k-1, max across directions
};

StatProfile scale_mean_sq(const ProfileAccumulator& acc, Eigen::Index m) {
    const double n = static_cast<double>(acc.n);
    const double denom = static_cast<double>(m) * n * n * n * n;
    StatProfile p;
    p.n = acc.n;
    p.values = acc.sum_sq.cast<double>() / denom;
    return p;
}

StatProfile scale_max_abs(const ProfileAccumulator& acc) {
    const double n = static_cast<double>(acc.n);
    const double denom = n * std::sqrt(n);
    StatProfile p;
    p.n = acc.n;
    p.values = acc.max_abs.cast<double>() / denom;
    return p;
}

// The squared-sum accumulator grows up to m * n^5.
void check_accumulator_capacity(Eigen::Index n, Eigen::Index m) {
    const double bound = static_cast<double>(m) * std::pow(static_cast<double>(n), 5);
    if (bound >= 9.2e18)
        throw Error(ErrorCode::OutOfRange,
                    "sample too large for the exact integer profile kernels (n^5 * m must stay "
                    "below 2^63)");
}

void sweep_orthant(const OrthantTable& t, ProfileAccumulator& acc) {
    const Eigen::Index n = t.n;
    std::vector<std::int64_t> counts(n), totals(n);
    for (Eigen::Index q = 0; q < n; ++q)
        totals[q] = static_cast<std::int64_t>(t.prefix_counts(n, q));
    for (Eigen::Index k = 1; k <= n - 1; ++k) {
        for (Eigen::Index q = 0; q < n; ++q)
            counts[q] = static_cast<std::int64_t>(t.prefix_counts(k, q));
        acc.accumulate(k, counts.data(), totals.data());
    }
}

void sweep_projection(const ProjectionTable& t, ProfileAccumulator& acc) {
    const Eigen::Index n = t.n;
    std::vector<std::int64_t> counts(n), totals(n);
    for (Eigen::Index l = 0; l < t.m; ++l) {
        const auto ranks = t.ranks.col(l);
        for (Eigen::Index q = 0; q < n; ++q) totals[q] = ranks(q);
        std::fill(counts.begin(), counts.end(), std::int64_t{0});
        for (Eigen::Index k = 1; k <= n - 1; ++k) {
            const int rk = ranks(k - 1);
            for (Eigen::Index q = 0; q < n; ++q) counts[q] += ranks(q) >= rk;
            acc.accumulate(k, counts.data(), totals.data());
        }
    }
}

}  // namespace

OrthantTable build_orthant_table(const Sample& s) {
    const Eigen::Index n = s.n();
    const Eigen::Index d = s.d();
    OrthantTable t;
    t.n = n;
    t.indicators.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index q = 0; q < n; ++q) {
            bool leq = true;
            for (Eigen::Index c = 0; c < d; ++c) {
                if (s.data(i, c) > s.data(q, c)) {
                    leq = false;
                    break;
                }
            }
            t.indicators(q, i) = leq ? 1.0 : 0.0;
        }
    }
    t.prefix_counts.resize(n + 1, n);
    t.prefix_counts.row(0).setZero();
    for (Eigen::Index k = 1; k <= n; ++k)
        t.prefix_counts.row(k) = t.prefix_counts.row(k - 1) + t.indicators.col(k - 1).transpose();
    t.ecdf = t.prefix_counts.row(n).transpose() / static_cast<double>(n);
    return t;
}

ProjectionTable build_projection_table(const Sample& s, const DirectionSet& dirs) {
    if (dirs.d() != s.d())
        throw Error(ErrorCode::DimensionMismatch,
                    "direction set has dimension " + std::to_string(dirs.d()) +
                        " but sample has dimension " + std::to_string(s.d()));
    const Eigen::Index n = s.n();
    const Eigen::Index m = dirs.m();
    ProjectionTable t;
    t.n = n;
    t.m = m;
    t.projections = s.data * dirs.directions.transpose();
    t.ranks.resize(n, m);
    t.rank_mult.setZero(n, m);
    std::vector<Eigen::Index> order(n);
    for (Eigen::Index l = 0; l < m; ++l) {
        const auto p = t.projections.col(l);
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::sort(order.begin(), order.end(),
                  [&p](Eigen::Index a, Eigen::Index b) { return p(a) < p(b); });
        // Weak rank: tied values all receive the position of the last tie.
        Eigen::Index pos = 0;
        while (pos < n) {
            Eigen::Index end = pos;
            while (end + 1 < n && p(order[end + 1]) == p(order[pos])) ++end;
            for (Eigen::Index j = pos; j <= end; ++j) t.ranks(order[j], l) = static_cast<int>(end + 1);
            t.rank_mult(end, l) = static_cast<int>(end - pos + 1);
            pos = end + 1;
        }
    }
    return t;
}

Eigen::MatrixXi ProjectionTable::prefix_counts(Eigen::Index l) const {
    Eigen::MatrixXi out(n + 1, n);
    out.row(0).setZero();
    for (Eigen::Index k = 1; k <= n; ++k) {
        const int rk = ranks(k - 1, l);
        for (Eigen::Index q = 0; q < n; ++q)
            out(k, q) = out(k - 1, q) + (ranks(q, l) >= rk ? 1 : 0);
    }
    return out;
}

StatProfile profile_s(const OrthantTable& t) {
    check_accumulator_capacity(t.n, 1);
    ProfileAccumulator acc(t.n);
    sweep_orthant(t, acc);
    return scale_mean_sq(acc, 1);
}

StatProfile profile_t(const OrthantTable& t) {
    check_accumulator_capacity(t.n, 1);
    ProfileAccumulator acc(t.n);
    sweep_orthant(t, acc);
    return scale_max_abs(acc);
}

StatProfile profile_u(const ProjectionTable& t) {
    check_accumulator_capacity(t.n, t.m);
    ProfileAccumulator acc(t.n);
    sweep_projection(t, acc);
    return scale_mean_sq(acc, t.m);
}

StatProfile profile_v(const ProjectionTable& t) {
    check_accumulator_capacity(t.n, t.m);
    ProfileAccumulator acc(t.n);
    sweep_projection(t, acc);
    return scale_max_abs(acc);
}

StatProfile observed_profile(Family family, const OrthantTable* orth, const ProjectionTable* proj) {
    switch (family) {
        case Family::S: return profile_s(*orth);
        case Family::T: return profile_t(*orth);
        case Family::U: return profile_u(*proj);
        case Family::V: return profile_v(*proj);
    }
    throw Error(ErrorCode::OutOfRange, "bad family");
}

double combine(const StatProfile& p, Combiner c) {
    if (p.size() < 1)
        throw Error(ErrorCode::TooSmall, "profile is empty");
    if (c == Combiner::Max) return p.values.maxCoeff();
    return p.values.sum() / static_cast<double>(p.n);
}

Eigen::Index estimate_changepoint(const StatProfile& p) {
    if (p.size() < 1)
        throw Error(ErrorCode::TooSmall, "profile is empty");
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < p.size(); ++k)
        if (p.values(k) > p.values(best)) best = k;
    return best + 1;
}

}  // namespace cpd
