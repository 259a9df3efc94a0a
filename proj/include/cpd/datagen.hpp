#pragma once

#include "cpd/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace cpd {

struct NormalMargin {
    double mean = 0.0;
    double sd = 1.0;
};

struct ExponentialMargin {
    double rate = 1.0;
};

using MarginSpec = std::variant<NormalMargin, ExponentialMargin>;

double margin_quantile(const MarginSpec& margin, double u);
double margin_cdf(const MarginSpec& margin, double x);
std::string margin_to_string(const MarginSpec& margin);

/// Parses "normal(mu,sd)" / "n(mu,sd)" / "exponential(rate)" / "exp(rate)".
MarginSpec parse_margin(const std::string& text);

struct CopulaSpec {
    enum class Kind { Independence, Clayton, GumbelHougaard };

    Kind kind = Kind::Independence;
    double theta = 0.0;  // unused for independence
    double tau = 0.0;

    static CopulaSpec independence();
    /// tau = 0 yields the independence copula for either family.
    static CopulaSpec from_tau(Kind kind, double tau);
};

/// Standard Kendall's-tau parameterizations: Clayton theta = 2 tau/(1 - tau)
/// for tau in (0,1); Gumbel-Hougaard theta = 1/(1 - tau) for tau in [0,1).
/// Throws Error{OutOfRange} outside those ranges.
double tau_to_theta(CopulaSpec::Kind kind, double tau);

/// count x d matrix of copula draws with Uniform(0,1) margins, using the
/// Marshall-Olkin frailty construction (Gamma frailty for Clayton, positive
/// stable via Kanter's representation for Gumbel-Hougaard). Outputs are
/// clamped inside (0,1) so downstream quantile transforms stay finite.
Eigen::MatrixXd sample_copula(const CopulaSpec& spec, Eigen::Index d, Eigen::Index count,
                              std::mt19937_64& rng);

struct BlockSpec {
    CopulaSpec copula;
    std::vector<MarginSpec> margins;  // one per coordinate

    Eigen::Index d() const { return static_cast<Eigen::Index>(margins.size()); }
};

/// A single-change-point scenario: rows 1..floor(n*t) follow `pre`, the rest
/// follow `post`. t = 0 or t = 1 (or post == pre) gives a no-change sample.
struct ScenarioSpec {
    Eigen::Index n = 0;
    double t = 0.0;
    BlockSpec pre;
    BlockSpec post;
    std::uint64_t seed = 0;

    Eigen::Index d() const { return pre.d(); }
    Eigen::Index change_index() const;  // floor(n*t)
};

/// Draws the scenario: copula uniforms per block, margins applied through
/// their quantile functions. Deterministic in spec.seed.
Sample generate(const ScenarioSpec& spec);

/// Line-oriented "key = value" file with '#' comments. Lookups mark keys as
/// consumed so a parser can reject unknown keys by name afterwards.
class KeyValues {
  public:
    static KeyValues parse(std::istream& in);

    std::optional<std::string> get(const std::string& key);
    std::string require(const std::string& key);
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    /// Throws Error{ParseError} naming the first key nobody consumed.
    void finish() const;

  private:
    std::map<std::string, std::string> values_;
    std::map<std::string, long> lines_;
    std::set<std::string> consumed_;
};

/// Scenario keys: n, t, seed, pre.copula, pre.tau, pre.margin1..pre.marginD,
/// and the corresponding post.* keys (each defaulting to its pre.* value).
ScenarioSpec parse_scenario(KeyValues& kv);

}  // namespace cpd
