#include "cpd/sphere.hpp"

#include "cpd/normal.hpp"

#include <cmath>

namespace cpd {
namespace {

double halton(std::uint64_t index, std::uint64_t base) {
    double value = 0.0;
    double inv = 1.0 / static_cast<double>(base);
    double factor = inv;
    while (index > 0) {
        value += static_cast<double>(index % base) * factor;
        index /= base;
        factor *= inv;
    }
    return value;
}

Eigen::MatrixXd halton_hemisphere(Eigen::Index d, Eigen::Index m) {
    // Base 3 on the first coordinate: base-3 Halton values never hit 1/2, so
    // the projected first coordinate never vanishes and folding is safe.
    static const std::uint64_t primes[] = {3, 2, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37,
                                           41, 43, 47, 53, 59, 61, 67, 71, 73, 79};
    if (d > static_cast<Eigen::Index>(sizeof(primes) / sizeof(primes[0])))
        throw Error(ErrorCode::OutOfRange, "dimension too large for the direction generator");
    Eigen::MatrixXd out(m, d);
    for (Eigen::Index l = 0; l < m; ++l) {
        Eigen::VectorXd z(d);
        for (Eigen::Index j = 0; j < d; ++j)
            z(j) = normal_quantile(halton(static_cast<std::uint64_t>(l) + 1, primes[j]));
        z /= z.norm();
        if (z(0) < 0.0) z = -z;
        out.row(l) = z;
    }
    return out;
}

}  // namespace

DirectionSet discretize(Eigen::Index d, Eigen::Index m) {
    if (m < 1)
        throw Error(ErrorCode::InvalidM, "direction count must be >= 1");
    if (d < 1)
        throw Error(ErrorCode::Empty, "dimension must be >= 1");

    if (d == 1) {
        Eigen::MatrixXd one(1, 1);
        one(0, 0) = 1.0;
        return DirectionSet{one};
    }

    Eigen::MatrixXd dirs(m, d);
    if (d == 2) {
        // Midpoints exclude phi = +-pi/2 where the first coordinate would be 0.
        const double pi = std::acos(-1.0);
        for (Eigen::Index l = 0; l < m; ++l) {
            const double phi = -pi / 2.0 + pi * (static_cast<double>(l) + 0.5) / static_cast<double>(m);
            dirs(l, 0) = std::cos(phi);
            dirs(l, 1) = std::sin(phi);
        }
    } else if (d == 3) {
        const double pi = std::acos(-1.0);
        const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
        for (Eigen::Index l = 0; l < m; ++l) {
            // Heights uniform in (0,1) give equal-area bands on the hemisphere.
            const double h = (static_cast<double>(l) + 0.5) / static_cast<double>(m);
            const double rho = std::sqrt(1.0 - h * h);
            const double psi = 2.0 * pi * static_cast<double>(l + 1) / golden;
            dirs(l, 0) = h;
            dirs(l, 1) = rho * std::cos(psi);
            dirs(l, 2) = rho * std::sin(psi);
        }
    } else {
        dirs = halton_hemisphere(d, m);
    }
    for (Eigen::Index l = 0; l < m; ++l) dirs.row(l) /= dirs.row(l).norm();
    return DirectionSet{dirs};
}

}  // namespace cpd
