#include "cpd/oracle.hpp"

#include <cmath>
#include <vector>

namespace cpd::oracle {
namespace {

bool orthant_leq(const Sample& s, Eigen::Index i, Eigen::Index q) {
    for (Eigen::Index c = 0; c < s.d(); ++c)
        if (s.data(i, c) > s.data(q, c)) return false;
    return true;
}

double project(const Sample& s, const DirectionSet& dirs, Eigen::Index l, Eigen::Index i) {
    double acc = 0.0;
    for (Eigen::Index c = 0; c < s.d(); ++c) acc += dirs.directions(l, c) * s.data(i, c);
    return acc;
}

double combine_values(const std::vector<double>& per_k, Combiner c, Eigen::Index n) {
    if (c == Combiner::Max) {
        double best = per_k.front();
        for (double v : per_k) best = std::max(best, v);
        return best;
    }
    double sum = 0.0;
    for (double v : per_k) sum += v;
    return sum / static_cast<double>(n);
}

}  // namespace

StatProfile profile(const Sample& s, Family family, const DirectionSet* dirs) {
    const Eigen::Index n = s.n();
    const double dn = static_cast<double>(n);
    StatProfile out;
    out.n = n;
    out.values.setZero(n - 1);

    if (family == Family::S || family == Family::T) {
        for (Eigen::Index k = 1; k <= n - 1; ++k) {
            const double lambda = static_cast<double>(k) / dn;
            double sum_sq = 0.0, max_abs = 0.0;
            for (Eigen::Index q = 0; q < n; ++q) {
                double head = 0.0, tail = 0.0;
                for (Eigen::Index i = 0; i < k; ++i) head += orthant_leq(s, i, q) ? 1.0 : 0.0;
                for (Eigen::Index i = k; i < n; ++i) tail += orthant_leq(s, i, q) ? 1.0 : 0.0;
                const double D = std::sqrt(dn) * lambda * (1.0 - lambda) *
                                 (head / static_cast<double>(k) - tail / static_cast<double>(n - k));
                sum_sq += D * D;
                max_abs = std::max(max_abs, std::abs(D));
            }
            out.values(k - 1) = family == Family::S ? sum_sq / dn : max_abs;
        }
        return out;
    }

    if (dirs == nullptr)
        throw Error(ErrorCode::DimensionMismatch, "half-space families need a direction set");
    const Eigen::Index m = dirs->m();
    for (Eigen::Index k = 1; k <= n - 1; ++k) {
        const double dk = static_cast<double>(k);
        double sum_sq = 0.0, max_abs = 0.0;
        for (Eigen::Index l = 0; l < m; ++l) {
            for (Eigen::Index q = 0; q < n; ++q) {
                const double b = project(s, *dirs, l, q);
                double head = 0.0, tail = 0.0;
                for (Eigen::Index i = 0; i < k; ++i) head += project(s, *dirs, l, i) <= b ? 1.0 : 0.0;
                for (Eigen::Index i = k; i < n; ++i) tail += project(s, *dirs, l, i) <= b ? 1.0 : 0.0;
                const double diff = head / dk - tail / static_cast<double>(n - k);
                sum_sq += diff * diff;
                max_abs = std::max(max_abs, std::abs(diff));
            }
        }
        if (family == Family::U) {
            out.values(k - 1) = dk * dk * static_cast<double>(n - k) * static_cast<double>(n - k) /
                                (dn * dn * dn * dn * static_cast<double>(m)) * sum_sq;
        } else {
            out.values(k - 1) =
                dk * static_cast<double>(n - k) / (dn * std::sqrt(dn)) * max_abs;
        }
    }
    return out;
}

double check_process_value(const Sample& s, const Eigen::VectorXd& xi, Eigen::Index k,
                           Eigen::Index q) {
    const Eigen::Index n = s.n();
    const double dn = static_cast<double>(n);
    double ecdf = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) ecdf += orthant_leq(s, j, q - 1) ? 1.0 : 0.0;
    ecdf /= dn;
    double z_k = 0.0, z_n = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double g = (orthant_leq(s, i, q - 1) ? 1.0 : 0.0) - ecdf;
        if (i < k) z_k += xi(i) * g;
        z_n += xi(i) * g;
    }
    const double lambda = static_cast<double>(k) / dn;
    return (z_k - lambda * z_n) / std::sqrt(dn);
}

double replicate(const Sample& s, const Eigen::VectorXd& xi, StatFamily stat, Method method,
                 const DirectionSet* dirs) {
    if (method == Method::Sim)
        throw Error(ErrorCode::OutOfRange, "no multiplier form for the simulation method");
    const Eigen::Index n = s.n();
    if (xi.size() != n)
        throw Error(ErrorCode::LengthMismatch, "multiplier row length does not match sample size");
    const double dn = static_cast<double>(n);
    std::vector<double> per_k(n - 1);

    const bool orthant = stat.family == Family::S || stat.family == Family::T;
    if (!orthant && dirs == nullptr)
        throw Error(ErrorCode::DimensionMismatch, "half-space families need a direction set");
    const Eigen::Index m = orthant ? 1 : dirs->m();

    for (Eigen::Index k = 1; k <= n - 1; ++k) {
        const double dk = static_cast<double>(k);
        double xm_head = 0.0, xm_tail = 0.0;
        if (method == Method::Hat) {
            for (Eigen::Index i = 0; i < k; ++i) xm_head += xi(i);
            for (Eigen::Index i = k; i < n; ++i) xm_tail += xi(i);
            xm_head /= dk;
            xm_tail /= static_cast<double>(n - k);
        }
        double sum_sq = 0.0, max_abs = 0.0;
        for (Eigen::Index l = 0; l < m; ++l) {
            for (Eigen::Index q = 0; q < n; ++q) {
                double inner;
                if (orthant) {
                    double ecdf = 0.0;
                    for (Eigen::Index j = 0; j < n; ++j) ecdf += orthant_leq(s, j, q) ? 1.0 : 0.0;
                    ecdf /= dn;
                    double head = 0.0, tail = 0.0;
                    for (Eigen::Index i = 0; i < n; ++i) {
                        const double ind = orthant_leq(s, i, q) ? 1.0 : 0.0;
                        if (method == Method::Check) {
                            if (i < k) head += xi(i) * (ind - ecdf);
                            else tail += xi(i) * (ind - ecdf);
                        } else {
                            if (i < k) head += (xi(i) - xm_head) * ind;
                            else tail += (xi(i) - xm_tail) * ind;
                        }
                    }
                    inner = static_cast<double>(n - k) * head - dk * tail;
                } else {
                    const double b = project(s, *dirs, l, q);
                    double ecdf = 0.0;
                    for (Eigen::Index j = 0; j < n; ++j)
                        ecdf += project(s, *dirs, l, j) <= b ? 1.0 : 0.0;
                    ecdf /= dn;
                    double head = 0.0, tail = 0.0;
                    for (Eigen::Index i = 0; i < n; ++i) {
                        const double ind = project(s, *dirs, l, i) <= b ? 1.0 : 0.0;
                        if (method == Method::Check) {
                            if (i < k) head += xi(i) * (ind - ecdf);
                            else tail += xi(i) * (ind - ecdf);
                        } else {
                            if (i < k) head += (xi(i) - xm_head) * ind;
                            else tail += (xi(i) - xm_tail) * ind;
                        }
                    }
                    inner = static_cast<double>(n - k) * head - dk * tail;
                }
                sum_sq += inner * inner;
                max_abs = std::max(max_abs, std::abs(inner));
            }
        }
        if (stat.family == Family::S || stat.family == Family::U)
            per_k[k - 1] = sum_sq / (static_cast<double>(m) * dn * dn * dn * dn);
        else
            per_k[k - 1] = max_abs / (dn * std::sqrt(dn));
    }
    return combine_values(per_k, stat.combiner, n);
}

}  // namespace cpd::oracle
