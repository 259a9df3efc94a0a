#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cpd {

/// Statistic families over the candidate-split processes: S/T are indexed by
/// lower-left orthants (multivariate ecdf differences), U/V by half-spaces
/// (one-dimensional projections onto a set of directions).
enum class Family { S, T, U, V };

/// How the n-1 per-split statistics are folded into one global statistic:
/// Max takes the largest, Mean sums and divides by n.
enum class Combiner { Max, Mean };

/// Resampling scheme used to approximate the null distribution.
///  Hat   - multiplier process with prefix/suffix-centered weights
///  Check - multiplier process centered at the full-sample mean
///  Sim   - rank simulation from fresh Uniform(0,1) samples (univariate only)
enum class Method { Hat, Check, Sim };

struct StatFamily {
    Family family = Family::S;
    Combiner combiner = Combiner::Max;
};

inline bool uses_directions(Family f) { return f == Family::U || f == Family::V; }

std::string to_token(Family f);
std::string to_token(Combiner c);
std::string to_token(Method m);
std::string to_token(const StatFamily& s);  // e.g. "s_max"

Family family_from_token(const std::string& tok);
Combiner combiner_from_token(const std::string& tok);
Method method_from_token(const std::string& tok);
StatFamily stat_from_token(const std::string& tok);

enum class ErrorCode {
    NonFinite,
    TooSmall,
    Empty,
    DimensionMismatch,
    LengthMismatch,
    SimRequiresUnivariate,
    InvalidN,
    InvalidM,
    OutOfRange,
    IoError,
    ParseError,
};

/// Library-wide error type. `row`/`col` are 1-based and set for errors that
/// point at a matrix entry or a text location; -1 otherwise.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what, long row = -1, long col = -1)
        : std::runtime_error(what), code(code), row(row), col(col) {}

    ErrorCode code;
    long row;
    long col;
};

/// A validated data set: rows are observations in time order, columns are
/// coordinates. Treat as immutable once constructed; every test statistic is
/// order-sensitive, so rows are never sorted or reordered.
struct Sample {
    Eigen::MatrixXd data;

    Eigen::Index n() const { return data.rows(); }
    Eigen::Index d() const { return data.cols(); }
};

/// Checks finiteness and minimal dimensions (n >= 2, d >= 1).
/// Throws Error{NonFinite,row,col} on the first NaN/infinity in row-major
/// order, Error{TooSmall} for n < 2, Error{Empty} for d = 0.
Sample validate_sample(const Eigen::MatrixXd& raw);

/// Per-split statistic values: values[k-1] holds the statistic for a
/// candidate change point after observation k, k in {1,...,n-1}.
struct StatProfile {
    Eigen::ArrayXd values;
    Eigen::Index n = 0;

    Eigen::Index size() const { return values.size(); }
};

/// m unit vectors indexing half-spaces; every vector has a strictly positive
/// first coordinate so each half-space direction is counted once.
struct DirectionSet {
    Eigen::MatrixXd directions;  // m x d, rows are unit vectors

    Eigen::Index m() const { return directions.rows(); }
    Eigen::Index d() const { return directions.cols(); }
};

/// Throws unless every row has unit norm (tolerance 1e-12) and a strictly
/// positive first coordinate; for d = 1 the only valid set is {(1)}.
DirectionSet validate_directions(const Eigen::MatrixXd& raw);

/// N x n matrix of i.i.d. mean-0/variance-1 multiplier draws; row j drives
/// bootstrap replicate j.
struct MultiplierMatrix {
    Eigen::MatrixXd xi;

    Eigen::Index replicates() const { return xi.rows(); }
    Eigen::Index n() const { return xi.cols(); }
};

/// Everything a single test run produces. p_value is an exact count over the
/// replicates divided by N; k_hat is the first maximizer of the profile.
struct TestReport {
    StatFamily stat;
    double observed = 0.0;
    StatProfile profile;
    double p_value = 1.0;
    Eigen::ArrayXd replicates;
    Eigen::Index k_hat = 1;
    Method method = Method::Check;
    std::uint64_t seed = 0;
    Eigen::Index m = 0;  // direction count; 0 for orthant families
    Eigen::Index n = 0;
    Eigen::Index d = 0;
};

}  // namespace cpd
