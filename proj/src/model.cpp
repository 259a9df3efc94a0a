#include "cpd/model.hpp"

#include <cmath>

namespace cpd {

std::string to_token(Family f) {
    switch (f) {
        case Family::S: return "s";
        case Family::T: return "t";
        case Family::U: return "u";
        case Family::V: return "v";
    }
    return "?";
}

std::string to_token(Combiner c) { return c == Combiner::Max ? "max" : "mean"; }

std::string to_token(Method m) {
    switch (m) {
        case Method::Hat: return "hat";
        case Method::Check: return "check";
        case Method::Sim: return "sim";
    }
    return "?";
}

std::string to_token(const StatFamily& s) {
    return to_token(s.family) + "_" + to_token(s.combiner);
}

Family family_from_token(const std::string& tok) {
    if (tok == "s") return Family::S;
    if (tok == "t") return Family::T;
    if (tok == "u") return Family::U;
    if (tok == "v") return Family::V;
    throw Error(ErrorCode::ParseError, "unknown statistic family '" + tok + "' (expected s, t, u or v)");
}

Combiner combiner_from_token(const std::string& tok) {
    if (tok == "max") return Combiner::Max;
    if (tok == "mean") return Combiner::Mean;
    throw Error(ErrorCode::ParseError, "unknown combiner '" + tok + "' (expected max or mean)");
}

Method method_from_token(const std::string& tok) {
    if (tok == "hat") return Method::Hat;
    if (tok == "check") return Method::Check;
    if (tok == "sim") return Method::Sim;
    throw Error(ErrorCode::ParseError, "unknown method '" + tok + "' (expected hat, check or sim)");
}

StatFamily stat_from_token(const std::string& tok) {
    auto sep = tok.find('_');
    if (sep == std::string::npos)
        throw Error(ErrorCode::ParseError, "bad statistic token '" + tok + "' (expected e.g. s_max)");
    return StatFamily{family_from_token(tok.substr(0, sep)), combiner_from_token(tok.substr(sep + 1))};
}

Sample validate_sample(const Eigen::MatrixXd& raw) {
    if (raw.cols() == 0)
        throw Error(ErrorCode::Empty, "sample has no columns");
    if (raw.rows() < 2)
        throw Error(ErrorCode::TooSmall, "sample needs at least 2 observations, got " +
                                             std::to_string(raw.rows()));
    for (Eigen::Index i = 0; i < raw.rows(); ++i)
        for (Eigen::Index j = 0; j < raw.cols(); ++j)
            if (!std::isfinite(raw(i, j)))
                throw Error(ErrorCode::NonFinite,
                            "non-finite value at row " + std::to_string(i + 1) + ", column " +
                                std::to_string(j + 1),
                            i + 1, j + 1);
    return Sample{raw};
}

DirectionSet validate_directions(const Eigen::MatrixXd& raw) {
    if (raw.rows() < 1)
        throw Error(ErrorCode::InvalidM, "direction set must contain at least one vector");
    if (raw.cols() < 1)
        throw Error(ErrorCode::Empty, "direction set has no coordinates");
    for (Eigen::Index l = 0; l < raw.rows(); ++l) {
        const double norm = raw.row(l).norm();
        if (std::abs(norm - 1.0) > 1e-12)
            throw Error(ErrorCode::OutOfRange,
                        "direction " + std::to_string(l + 1) + " is not unit length", l + 1);
        if (!(raw(l, 0) > 0.0))
            throw Error(ErrorCode::OutOfRange,
                        "direction " + std::to_string(l + 1) +
                            " must have a strictly positive first coordinate",
                        l + 1);
    }
    if (raw.cols() == 1 && (raw.rows() != 1 || raw(0, 0) != 1.0))
        throw Error(ErrorCode::OutOfRange, "for d = 1 the only direction set is {(1)}");
    return DirectionSet{raw};
}

}  // namespace cpd
