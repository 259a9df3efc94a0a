#include "cpd/multiplier.hpp"

#include "cpd/rng.hpp"

#include <cmath>

namespace cpd {
namespace {

void check_xi(Eigen::Index n, const Eigen::VectorXd& xi) {
    if (xi.size() != n)
        throw Error(ErrorCode::LengthMismatch, "multiplier row has length " +
                                                   std::to_string(xi.size()) + ", expected " +
                                                   std::to_string(n));
}

struct ProfilePair {
    Eigen::ArrayXd sum_sq;   // sum over (l, q) of inner^2, per split
    Eigen::ArrayXd max_abs;  // max over (l, q) of |inner|, per split
};

ReplicateProfiles scale_profiles(ProfilePair&& acc, Eigen::Index n, Eigen::Index m) {
    const double dn = static_cast<double>(n);
    const double denom_sq = static_cast<double>(m) * dn * dn * dn * dn;
    const double denom_abs = dn * std::sqrt(dn);
    ReplicateProfiles out;
    out.mean_sq.n = n;
    out.mean_sq.values = acc.sum_sq / denom_sq;
    out.max_abs.n = n;
    out.max_abs.values = acc.max_abs / denom_abs;
    return out;
}

// Orthant kernels. With R_k(q) the xi-weighted prefix count at q and
// Xi_k the plain prefix sum, the check process at split k satisfies
//   inner(q) = n*R_k(q) - k*R_n(q) - (n*Xi_k - k*Xi_n) * F_n(q),
// and the statistic value is inner scaled by n^{-3/2}. The hat process adds
// the prefix-/suffix-mean centering terms against the integer counts.
ProfilePair sweep_orthant_check(const OrthantTable& t, const Eigen::VectorXd& xi) {
    const Eigen::Index n = t.n;
    const double dn = static_cast<double>(n);
    ProfilePair acc{Eigen::ArrayXd::Zero(n - 1), Eigen::ArrayXd::Zero(n - 1)};
    const Eigen::VectorXd full = t.indicators * xi;
    const double xi_total = xi.sum();
    Eigen::VectorXd prefix = Eigen::VectorXd::Zero(n);
    Eigen::ArrayXd inner(n);
    double xi_prefix = 0.0;
    for (Eigen::Index k = 1; k <= n - 1; ++k) {
        prefix += xi(k - 1) * t.indicators.col(k - 1);
        xi_prefix += xi(k - 1);
        const double dk = static_cast<double>(k);
        inner = dn * prefix.array() - dk * full.array() -
                (dn * xi_prefix - dk * xi_total) * t.ecdf.array();
        acc.sum_sq(k - 1) = inner.square().sum();
        acc.max_abs(k - 1) = inner.abs().maxCoeff();
    }
    return acc;
}

ProfilePair sweep_orthant_hat(const OrthantTable& t, const Eigen::VectorXd& xi) {
    const Eigen::Index n = t.n;
    const double dn = static_cast<double>(n);
    // The hat process is invariant to shifting all multipliers by a constant;
    // shifting by xi(0) makes a constant row give exact zeros.
    const Eigen::VectorXd e = xi.array() - xi(0);
    ProfilePair acc{Eigen::ArrayXd::Zero(n - 1), Eigen::ArrayXd::Zero(n - 1)};
    const Eigen::VectorXd full = t.indicators * e;
    const double e_total = e.sum();
    const Eigen::ArrayXd totals = t.prefix_counts.row(n).transpose().array();
    Eigen::VectorXd prefix = Eigen::VectorXd::Zero(n);
    Eigen::ArrayXd inner(n);
    double e_prefix = 0.0;
    for (Eigen::Index k = 1; k <= n - 1; ++k) {
        prefix += e(k - 1) * t.indicators.col(k - 1);
        e_prefix += e(k - 1);
        const double dk = static_cast<double>(k);
        const double mean_head = e_prefix / dk;
        const double mean_tail = (e_total - e_prefix) / (dn - dk);
        const double coef_counts = -(dn - dk) * mean_head - dk * mean_tail;
        const double coef_totals = dk * mean_tail;
        inner = dn * prefix.array() - dk * full.array() +
                coef_counts * t.prefix_counts.row(k).transpose().array() + coef_totals * totals;
        acc.sum_sq(k - 1) = inner.square().sum();
        acc.max_abs(k - 1) = inner.abs().maxCoeff();
    }
    return acc;
}

// Projection kernels run in rank space: for direction l the indicator
// 1(p_l(i) <= p_l(q)) equals 1(rank_i <= rank_q), so the weighted prefix
// count as a function of the evaluation point is a step function over ranks
// maintained with suffix adds. Rank positions nobody occupies carry
// multiplicity zero and are masked out of sums and maxima.
ProfilePair sweep_projection_check(const ProjectionTable& t, const Eigen::VectorXd& xi) {
    const Eigen::Index n = t.n;
    const double dn = static_cast<double>(n);
    ProfilePair acc{Eigen::ArrayXd::Zero(n - 1), Eigen::ArrayXd::Zero(n - 1)};
    const double xi_total = xi.sum();
    const Eigen::ArrayXd rank_values = Eigen::ArrayXd::LinSpaced(n, 1.0, dn);
    Eigen::ArrayXd weighted(n), full(n), inner(n), masked(n);
    for (Eigen::Index l = 0; l < t.m; ++l) {
        const auto ranks = t.ranks.col(l);
        const Eigen::ArrayXd mult = t.rank_mult.col(l).cast<double>();
        full.setZero();
        for (Eigen::Index i = 0; i < n; ++i) full(ranks(i) - 1) += xi(i);
        for (Eigen::Index r = 1; r < n; ++r) full(r) += full(r - 1);
        weighted.setZero();
        double xi_prefix = 0.0;
        for (Eigen::Index k = 1; k <= n - 1; ++k) {
            const Eigen::Index pos = ranks(k - 1) - 1;
            weighted.segment(pos, n - pos) += xi(k - 1);
            xi_prefix += xi(k - 1);
            const double dk = static_cast<double>(k);
            inner = dn * weighted - dk * full - (xi_prefix - dk * xi_total / dn) * rank_values;
            acc.sum_sq(k - 1) += (mult * inner.square()).sum();
            masked = (mult > 0.0).select(inner.abs(), 0.0);
            acc.max_abs(k - 1) = std::max(acc.max_abs(k - 1), masked.maxCoeff());
        }
    }
    return acc;
}

ProfilePair sweep_projection_hat(const ProjectionTable& t, const Eigen::VectorXd& xi) {
    const Eigen::Index n = t.n;
    const double dn = static_cast<double>(n);
    const Eigen::VectorXd e = xi.array() - xi(0);
    ProfilePair acc{Eigen::ArrayXd::Zero(n - 1), Eigen::ArrayXd::Zero(n - 1)};
    const double e_total = e.sum();
    const Eigen::ArrayXd rank_values = Eigen::ArrayXd::LinSpaced(n, 1.0, dn);
    Eigen::ArrayXd weighted(n), counts(n), full(n), inner(n), masked(n);
    for (Eigen::Index l = 0; l < t.m; ++l) {
        const auto ranks = t.ranks.col(l);
        const Eigen::ArrayXd mult = t.rank_mult.col(l).cast<double>();
        full.setZero();
        for (Eigen::Index i = 0; i < n; ++i) full(ranks(i) - 1) += e(i);
        for (Eigen::Index r = 1; r < n; ++r) full(r) += full(r - 1);
        weighted.setZero();
        counts.setZero();
        double e_prefix = 0.0;
        for (Eigen::Index k = 1; k <= n - 1; ++k) {
            const Eigen::Index pos = ranks(k - 1) - 1;
            weighted.segment(pos, n - pos) += e(k - 1);
            counts.segment(pos, n - pos) += 1.0;
            e_prefix += e(k - 1);
            const double dk = static_cast<double>(k);
            const double mean_head = e_prefix / dk;
            const double mean_tail = (e_total - e_prefix) / (dn - dk);
            const double coef_counts = -(dn - dk) * mean_head - dk * mean_tail;
            const double coef_totals = dk * mean_tail;
            // Total projected count at an occupied rank position r is r itself.
            inner = dn * weighted - dk * full + coef_counts * counts + coef_totals * rank_values;
            acc.sum_sq(k - 1) += (mult * inner.square()).sum();
            masked = (mult > 0.0).select(inner.abs(), 0.0);
            acc.max_abs(k - 1) = std::max(acc.max_abs(k - 1), masked.maxCoeff());
        }
    }
    return acc;
}

const StatProfile& pick(const ReplicateProfiles& p, Family f) {
    return (f == Family::S || f == Family::U) ? p.mean_sq : p.max_abs;
}

}  // namespace

ReplicateProfiles replicate_profiles(const OrthantTable& t, const Eigen::VectorXd& xi,
                                     Method method) {
    check_xi(t.n, xi);
    if (method == Method::Sim)
        throw Error(ErrorCode::OutOfRange, "simulation method has no multiplier kernel");
    return scale_profiles(method == Method::Check ? sweep_orthant_check(t, xi)
                                                  : sweep_orthant_hat(t, xi),
                          t.n, 1);
}

ReplicateProfiles replicate_profiles(const ProjectionTable& t, const Eigen::VectorXd& xi,
                                     Method method) {
    check_xi(t.n, xi);
    if (method == Method::Sim)
        throw Error(ErrorCode::OutOfRange, "simulation method has no multiplier kernel");
    return scale_profiles(method == Method::Check ? sweep_projection_check(t, xi)
                                                  : sweep_projection_hat(t, xi),
                          t.n, t.m);
}

double replicate_check(const OrthantTable& t, const Eigen::VectorXd& xi, StatFamily stat) {
    return combine(pick(replicate_profiles(t, xi, Method::Check), stat.family), stat.combiner);
}

double replicate_check(const ProjectionTable& t, const Eigen::VectorXd& xi, StatFamily stat) {
    return combine(pick(replicate_profiles(t, xi, Method::Check), stat.family), stat.combiner);
}

double replicate_hat(const OrthantTable& t, const Eigen::VectorXd& xi, StatFamily stat) {
    return combine(pick(replicate_profiles(t, xi, Method::Hat), stat.family), stat.combiner);
}

double replicate_hat(const ProjectionTable& t, const Eigen::VectorXd& xi, StatFamily stat) {
    return combine(pick(replicate_profiles(t, xi, Method::Hat), stat.family), stat.combiner);
}

double pvalue(double observed, const ReplicateSet& reps) {
    if (reps.values.size() < 1)
        throw Error(ErrorCode::InvalidN, "replicate set is empty");
    const Eigen::Index count = (reps.values >= observed).count();
    return static_cast<double>(count) / static_cast<double>(reps.values.size());
}

TestReport run_test(const Sample& s, StatFamily stat, Method method, Eigen::Index replicates,
                    std::uint64_t seed, const DirectionSet* dirs, int workers) {
    if (method == Method::Sim) return run_sim_test(s, stat, replicates, seed, workers);
    if (replicates < 1)
        throw Error(ErrorCode::InvalidN, "replicate count must be >= 1");

    TestReport report;
    report.stat = stat;
    report.method = method;
    report.seed = seed;
    report.n = s.n();
    report.d = s.d();

    const MultiplierMatrix xi = standard_normal_multipliers(replicates, s.n(), seed, workers);
    ReplicateSet reps;
    reps.method = method;
    reps.seed = seed;
    reps.values.resize(replicates);

    if (uses_directions(stat.family)) {
        if (dirs == nullptr)
            throw Error(ErrorCode::DimensionMismatch,
                        "statistics u/v need a direction set; pass one or use s/t");
        const ProjectionTable table = build_projection_table(s, *dirs);
        report.m = table.m;
        report.profile = observed_profile(stat.family, nullptr, &table);
        parallel_for_index(replicates, workers, [&](Eigen::Index j) {
            const auto profiles = replicate_profiles(table, xi.xi.row(j).transpose(), method);
            reps.values(j) = combine(pick(profiles, stat.family), stat.combiner);
        });
    } else {
        const OrthantTable table = build_orthant_table(s);
        report.m = 0;
        report.profile = observed_profile(stat.family, &table, nullptr);
        parallel_for_index(replicates, workers, [&](Eigen::Index j) {
            const auto profiles = replicate_profiles(table, xi.xi.row(j).transpose(), method);
            reps.values(j) = combine(pick(profiles, stat.family), stat.combiner);
        });
    }

    report.observed = combine(report.profile, stat.combiner);
    report.k_hat = estimate_changepoint(report.profile);
    report.p_value = pvalue(report.observed, reps);
    report.replicates = std::move(reps.values);
    return report;
}

std::vector<TestReport> run_tests(const Sample& s,
                                  const std::vector<std::pair<StatFamily, Method>>& stats,
                                  Eigen::Index replicates, std::uint64_t seed,
                                  const DirectionSet* dirs, bool share_multipliers,
                                  int workers) {
    std::vector<TestReport> out;
    out.reserve(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) {
        const std::uint64_t test_seed =
            share_multipliers ? seed : substream_seed(seed, static_cast<std::uint64_t>(i));
        out.push_back(run_test(s, stats[i].first, stats[i].second, replicates, test_seed, dirs,
                               workers));
    }
    return out;
}

TestReport run_sim_test(const Sample& s, StatFamily stat, Eigen::Index replicates,
                        std::uint64_t seed, int workers) {
    if (s.d() != 1)
        throw Error(ErrorCode::SimRequiresUnivariate,
                    "simulation method needs univariate data (d = 1), got d = " +
                        std::to_string(s.d()));
    if (uses_directions(stat.family))
        throw Error(ErrorCode::SimRequiresUnivariate,
                    "simulation method covers the s/t statistics only (u/v reduce to them "
                    "when d = 1)");
    if (replicates < 1)
        throw Error(ErrorCode::InvalidN, "replicate count must be >= 1");

    TestReport report;
    report.stat = stat;
    report.method = Method::Sim;
    report.seed = seed;
    report.n = s.n();
    report.d = 1;
    report.m = 0;

    const OrthantTable table = build_orthant_table(s);
    report.profile = observed_profile(stat.family, &table, nullptr);
    report.observed = combine(report.profile, stat.combiner);
    report.k_hat = estimate_changepoint(report.profile);

    const Eigen::Index n = s.n();
    ReplicateSet reps;
    reps.method = Method::Sim;
    reps.seed = seed;
    reps.values.resize(replicates);
    parallel_for_index(replicates, workers, [&](Eigen::Index j) {
        auto engine = make_engine(substream_seed(seed, static_cast<std::uint64_t>(j)));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        Eigen::MatrixXd u(n, 1);
        for (Eigen::Index i = 0; i < n; ++i) u(i, 0) = unif(engine);
        const OrthantTable sim_table = build_orthant_table(Sample{u});
        const StatProfile profile = observed_profile(stat.family, &sim_table, nullptr);
        reps.values(j) = combine(profile, stat.combiner);
    });
    report.p_value = pvalue(report.observed, reps);
    report.replicates = std::move(reps.values);
    return report;
}

}  // namespace cpd
