#pragma once

#include "cpd/model.hpp"

namespace cpd {

/// Indicator structure of a sample under the componentwise order.
/// indicators(q, i) = 1 when X_i <= X_q in every coordinate, so column i is
/// contiguous and holds observation i's comparisons against all evaluation
/// points. prefix_counts(k, q) = C_k(q) = #{i <= k : X_i <= X_q}; entries are
/// exact small integers stored as doubles so the bootstrap kernels can use
/// them in vector arithmetic without conversions.
struct OrthantTable {
    Eigen::Index n = 0;
    Eigen::MatrixXd indicators;     // n x n, (q, i)
    Eigen::MatrixXd prefix_counts;  // (n+1) x n, row k = C_k(.)
    Eigen::VectorXd ecdf;           // F_n(X_q) = C_n(q)/n

    Eigen::VectorXd total_counts() const { return prefix_counts.row(n).transpose(); }
};

/// Projections of the sample onto each direction, reduced to ranks.
/// ranks(i, l) = #{j : p_l(j) <= p_l(i)} for p_l(i) = a_l . X_i, which is all
/// the half-space statistics need: 1(p_l(i) <= p_l(q)) iff
/// ranks(i,l) <= ranks(q,l), and F_{a_l,n}(p_l(q)) = ranks(q,l)/n. Ties share
/// the weak rank, so tied projections compare as equal deterministically.
/// rank_mult(r-1, l) counts the evaluation points sitting at rank r.
struct ProjectionTable {
    Eigen::Index n = 0;
    Eigen::Index m = 0;
    Eigen::MatrixXd projections;  // n x m
    Eigen::MatrixXi ranks;        // n x m, values in {1,...,n}
    Eigen::MatrixXi rank_mult;    // n x m

    /// C^l_k(q) for direction l as an (n+1) x n matrix (row k). Built on
    /// demand; meant for audits and tests, the kernels never materialize it.
    Eigen::MatrixXi prefix_counts(Eigen::Index l) const;
};

OrthantTable build_orthant_table(const Sample& s);

/// Throws Error{DimensionMismatch} when dirs and the sample disagree on d.
ProjectionTable build_projection_table(const Sample& s, const DirectionSet& dirs);

/// Per-split profiles of the observed statistics (Cramer-von-Mises type for
/// S/U, Kolmogorov-Smirnov type for T/V). All four run on exact integer
/// counts; the single floating step is the final scaling, so profiles are
/// invariant under any strictly increasing componentwise transform and
/// profile_u/profile_v collapse bit-exactly onto profile_s/profile_t when
/// the direction set is {(1)}.
StatProfile profile_s(const OrthantTable& t);
StatProfile profile_t(const OrthantTable& t);
StatProfile profile_u(const ProjectionTable& t);
StatProfile profile_v(const ProjectionTable& t);

/// Dispatch on family; orthant families ignore `proj` and vice versa.
StatProfile observed_profile(Family family, const OrthantTable* orth, const ProjectionTable* proj);

/// Max combiner takes the largest entry; Mean sums and divides by n (not by
/// the number of entries).
double combine(const StatProfile& p, Combiner c);

/// Smallest k in {1,...,n-1} maximizing the profile.
Eigen::Index estimate_changepoint(const StatProfile& p);

}  // namespace cpd
