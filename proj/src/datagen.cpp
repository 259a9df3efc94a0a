#include "cpd/datagen.hpp"

#include "cpd/normal.hpp"
#include "cpd/rng.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <sstream>

namespace cpd {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_number(const std::string& text, const std::string& context) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "expected a number for " + context + ", got '" + text + "'");
    }
}

long long parse_integer(const std::string& text, const std::string& context) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError,
                    "expected an integer for " + context + ", got '" + text + "'");
    }
}

// Kanter's representation of the positive alpha-stable law with Laplace
// transform exp(-t^alpha), 0 < alpha < 1. Evaluated in log space so extreme
// angles or alpha near 1 underflow to 0/inf instead of producing NaN.
double positive_stable(double alpha, std::mt19937_64& rng) {
    const double pi = std::acos(-1.0);
    std::uniform_real_distribution<double> unif(0.0, pi);
    std::exponential_distribution<double> expo(1.0);
    const double u = unif(rng);
    const double w = expo(rng);
    const double log_a = std::log(std::sin((1.0 - alpha) * u)) +
                         alpha / (1.0 - alpha) * std::log(std::sin(alpha * u)) -
                         1.0 / (1.0 - alpha) * std::log(std::sin(u));
    return std::exp((log_a - std::log(w)) * (1.0 - alpha) / alpha);
}

double clamp_unit(double u) {
    return std::min(1.0 - 1e-16, std::max(1e-300, u));
}

}  // namespace

double margin_quantile(const MarginSpec& margin, double u) {
    if (std::holds_alternative<NormalMargin>(margin)) {
        const auto& nm = std::get<NormalMargin>(margin);
        return nm.mean + nm.sd * normal_quantile(u);
    }
    const auto& em = std::get<ExponentialMargin>(margin);
    return -std::log1p(-u) / em.rate;
}

double margin_cdf(const MarginSpec& margin, double x) {
    if (std::holds_alternative<NormalMargin>(margin)) {
        const auto& nm = std::get<NormalMargin>(margin);
        return normal_cdf((x - nm.mean) / nm.sd);
    }
    const auto& em = std::get<ExponentialMargin>(margin);
    return x <= 0.0 ? 0.0 : -std::expm1(-em.rate * x);
}

std::string margin_to_string(const MarginSpec& margin) {
    std::ostringstream os;
    if (std::holds_alternative<NormalMargin>(margin)) {
        const auto& nm = std::get<NormalMargin>(margin);
        os << "normal(" << nm.mean << "," << nm.sd << ")";
    } else {
        os << "exponential(" << std::get<ExponentialMargin>(margin).rate << ")";
    }
    return os.str();
}

MarginSpec parse_margin(const std::string& text) {
    const std::string t = trim(text);
    const auto open = t.find('(');
    if (open == std::string::npos || t.back() != ')')
        throw Error(ErrorCode::ParseError,
                    "bad margin '" + text + "' (expected normal(mu,sd) or exponential(rate))");
    std::string name = trim(t.substr(0, open));
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    const std::string args = t.substr(open + 1, t.size() - open - 2);
    if (name == "normal" || name == "n") {
        const auto comma = args.find(',');
        if (comma == std::string::npos)
            throw Error(ErrorCode::ParseError, "normal margin needs two parameters: " + text);
        NormalMargin nm;
        nm.mean = parse_number(trim(args.substr(0, comma)), "normal mean");
        nm.sd = parse_number(trim(args.substr(comma + 1)), "normal sd");
        if (!(nm.sd > 0.0))
            throw Error(ErrorCode::OutOfRange, "normal sd must be positive in " + text);
        return nm;
    }
    if (name == "exponential" || name == "exp" || name == "e") {
        ExponentialMargin em;
        em.rate = parse_number(trim(args), "exponential rate");
        if (!(em.rate > 0.0))
            throw Error(ErrorCode::OutOfRange, "exponential rate must be positive in " + text);
        return em;
    }
    throw Error(ErrorCode::ParseError, "unknown margin family '" + name + "'");
}

CopulaSpec CopulaSpec::independence() { return CopulaSpec{Kind::Independence, 0.0, 0.0}; }

CopulaSpec CopulaSpec::from_tau(Kind kind, double tau) {
    if (tau == 0.0) return independence();
    CopulaSpec spec;
    spec.kind = kind;
    spec.tau = tau;
    spec.theta = tau_to_theta(kind, tau);
    return spec;
}

double tau_to_theta(CopulaSpec::Kind kind, double tau) {
    switch (kind) {
        case CopulaSpec::Kind::Independence:
            if (tau != 0.0)
                throw Error(ErrorCode::OutOfRange, "independence copula requires tau = 0");
            return 0.0;
        case CopulaSpec::Kind::Clayton:
            if (!(tau > 0.0 && tau < 1.0))
                throw Error(ErrorCode::OutOfRange, "Clayton needs tau in (0,1)");
            return 2.0 * tau / (1.0 - tau);
        case CopulaSpec::Kind::GumbelHougaard:
            if (!(tau >= 0.0 && tau < 1.0))
                throw Error(ErrorCode::OutOfRange, "Gumbel-Hougaard needs tau in [0,1)");
            return 1.0 / (1.0 - tau);
    }
    throw Error(ErrorCode::OutOfRange, "bad copula kind");
}

Eigen::MatrixXd sample_copula(const CopulaSpec& spec, Eigen::Index d, Eigen::Index count,
                              std::mt19937_64& rng) {
    Eigen::MatrixXd u(count, d);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);

    if (spec.kind == CopulaSpec::Kind::Independence ||
        (spec.kind == CopulaSpec::Kind::GumbelHougaard && spec.theta == 1.0)) {
        for (Eigen::Index r = 0; r < count; ++r)
            for (Eigen::Index c = 0; c < d; ++c) u(r, c) = clamp_unit(unif(rng));
        return u;
    }

    if (spec.kind == CopulaSpec::Kind::Clayton) {
        if (!(spec.theta > 0.0))
            throw Error(ErrorCode::OutOfRange, "Clayton theta must be positive");
        std::gamma_distribution<double> gamma(1.0 / spec.theta, 1.0);
        for (Eigen::Index r = 0; r < count; ++r) {
            const double v = gamma(rng);
            for (Eigen::Index c = 0; c < d; ++c)
                u(r, c) = clamp_unit(std::pow(1.0 + expo(rng) / v, -1.0 / spec.theta));
        }
        return u;
    }

    if (!(spec.theta >= 1.0))
        throw Error(ErrorCode::OutOfRange, "Gumbel-Hougaard theta must be >= 1");
    const double alpha = 1.0 / spec.theta;
    for (Eigen::Index r = 0; r < count; ++r) {
        const double v = positive_stable(alpha, rng);
        for (Eigen::Index c = 0; c < d; ++c)
            u(r, c) = clamp_unit(std::exp(-std::pow(expo(rng) / v, alpha)));
    }
    return u;
}

Eigen::Index ScenarioSpec::change_index() const {
    return static_cast<Eigen::Index>(std::floor(static_cast<double>(n) * t));
}

Sample generate(const ScenarioSpec& spec) {
    if (spec.n < 2)
        throw Error(ErrorCode::TooSmall, "scenario needs n >= 2");
    if (!(spec.t >= 0.0 && spec.t <= 1.0))
        throw Error(ErrorCode::OutOfRange, "change fraction t must lie in [0,1]");
    if (spec.pre.d() != spec.post.d() || spec.pre.d() < 1)
        throw Error(ErrorCode::DimensionMismatch, "pre and post blocks must share a dimension >= 1");

    const Eigen::Index d = spec.d();
    const Eigen::Index k_star = spec.change_index();
    auto rng = make_engine(spec.seed);
    Eigen::MatrixXd data(spec.n, d);

    const auto fill = [&](const BlockSpec& block, Eigen::Index row0, Eigen::Index rows) {
        if (rows == 0) return;
        const Eigen::MatrixXd u = sample_copula(block.copula, d, rows, rng);
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index c = 0; c < d; ++c)
                data(row0 + r, c) = margin_quantile(block.margins[c], u(r, c));
    };
    fill(spec.pre, 0, k_star);
    fill(spec.post, k_star, spec.n - k_star);
    return validate_sample(data);
}

KeyValues KeyValues::parse(std::istream& in) {
    KeyValues kv;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const std::string trimmed = trim(line);
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::ParseError,
                        "line " + std::to_string(line_no) + ": expected 'key = value'", line_no);
        const std::string key = trim(trimmed.substr(0, eq));
        const std::string value = trim(trimmed.substr(eq + 1));
        if (key.empty() || value.empty())
            throw Error(ErrorCode::ParseError,
                        "line " + std::to_string(line_no) + ": empty key or value", line_no);
        if (kv.values_.count(key))
            throw Error(ErrorCode::ParseError, "duplicate key '" + key + "'", line_no);
        kv.values_[key] = value;
        kv.lines_[key] = line_no;
    }
    return kv;
}

std::optional<std::string> KeyValues::get(const std::string& key) {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    consumed_.insert(key);
    return it->second;
}

std::string KeyValues::require(const std::string& key) {
    auto v = get(key);
    if (!v) throw Error(ErrorCode::ParseError, "missing required key '" + key + "'");
    return *v;
}

void KeyValues::finish() const {
    for (const auto& [key, value] : values_) {
        if (!consumed_.count(key))
            throw Error(ErrorCode::ParseError, "unknown key '" + key + "'",
                        lines_.count(key) ? lines_.at(key) : -1);
    }
}

namespace {

CopulaSpec::Kind copula_kind_from(const std::string& text) {
    std::string t = trim(text);
    std::transform(t.begin(), t.end(), t.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (t == "independence" || t == "indep") return CopulaSpec::Kind::Independence;
    if (t == "clayton" || t == "cl") return CopulaSpec::Kind::Clayton;
    if (t == "gumbel" || t == "gumbel-hougaard" || t == "gh")
        return CopulaSpec::Kind::GumbelHougaard;
    throw Error(ErrorCode::ParseError, "unknown copula '" + text + "'");
}

BlockSpec parse_block(KeyValues& kv, const std::string& prefix, const BlockSpec* fallback) {
    BlockSpec block;
    const auto copula_text = kv.get(prefix + ".copula");
    const auto tau_text = kv.get(prefix + ".tau");
    // Unset fields inherit from the pre block; tau = 0 means independence.
    const CopulaSpec::Kind kind = copula_text
                                      ? copula_kind_from(*copula_text)
                                      : (fallback ? fallback->copula.kind : CopulaSpec::Kind::Independence);
    const double tau = tau_text ? parse_number(*tau_text, prefix + ".tau")
                                : (fallback ? fallback->copula.tau : 0.0);
    block.copula = CopulaSpec::from_tau(kind, tau);

    for (Eigen::Index c = 1;; ++c) {
        const std::string key = prefix + ".margin" + std::to_string(c);
        const auto text = kv.get(key);
        if (text) {
            block.margins.push_back(parse_margin(*text));
        } else if (fallback && c <= fallback->d()) {
            block.margins.push_back(fallback->margins[c - 1]);
        } else {
            break;
        }
    }
    if (block.margins.empty())
        throw Error(ErrorCode::ParseError, "missing required key '" + prefix + ".margin1'");
    return block;
}

}  // namespace

ScenarioSpec parse_scenario(KeyValues& kv) {
    ScenarioSpec spec;
    spec.n = static_cast<Eigen::Index>(parse_integer(kv.require("n"), "'n'"));
    if (spec.n < 2) throw Error(ErrorCode::TooSmall, "scenario needs n >= 2");
    spec.t = kv.has("t") ? parse_number(*kv.get("t"), "'t'") : 0.0;
    if (!(spec.t >= 0.0 && spec.t <= 1.0))
        throw Error(ErrorCode::OutOfRange, "key 't' must lie in [0,1]");
    const std::string seed_text = kv.require("seed");
    try {
        std::size_t used = 0;
        spec.seed = std::stoull(seed_text, &used);
        if (used != seed_text.size()) throw std::invalid_argument(seed_text);
    } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "expected an unsigned integer for 'seed', got '" +
                                               seed_text + "'");
    }
    spec.pre = parse_block(kv, "pre", nullptr);
    spec.post = parse_block(kv, "post", &spec.pre);
    if (spec.pre.d() != spec.post.d())
        throw Error(ErrorCode::ParseError, "pre and post blocks disagree on dimension");
    return spec;
}

}  // namespace cpd
