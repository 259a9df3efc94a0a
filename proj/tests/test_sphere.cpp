#include "cpd/sphere.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace cpd;

TEST_CASE("d=1 collapses to the single direction (1)", "[sphere]") {
    for (Eigen::Index m : {1, 8, 32}) {
        const DirectionSet dirs = discretize(1, m);
        REQUIRE(dirs.m() == 1);
        REQUIRE(dirs.directions(0, 0) == 1.0);
    }
}

TEST_CASE("d=2 midpoint grid matches the closed form", "[sphere]") {
    const DirectionSet dirs = discretize(2, 2);
    REQUIRE(dirs.m() == 2);
    const double r = std::sqrt(2.0) / 2.0;
    REQUIRE(dirs.directions(0, 0) == Catch::Approx(r).margin(1e-15));
    REQUIRE(dirs.directions(0, 1) == Catch::Approx(-r).margin(1e-15));
    REQUIRE(dirs.directions(1, 0) == Catch::Approx(r).margin(1e-15));
    REQUIRE(dirs.directions(1, 1) == Catch::Approx(r).margin(1e-15));
}

TEST_CASE("d=2 grid is symmetric under sign flip of the second coordinate", "[sphere]") {
    const DirectionSet dirs = discretize(2, 8);
    for (Eigen::Index l = 0; l < 8; ++l) {
        REQUIRE(dirs.directions(l, 0) == Catch::Approx(dirs.directions(7 - l, 0)).margin(1e-14));
        REQUIRE(dirs.directions(l, 1) == Catch::Approx(-dirs.directions(7 - l, 1)).margin(1e-14));
    }
}

TEST_CASE("every direction is unit length with positive first coordinate", "[sphere]") {
    for (const auto [d, m] : {std::pair<Eigen::Index, Eigen::Index>{2, 8},
                              {3, 32},
                              {3, 7},
                              {4, 16},
                              {5, 11}}) {
        const DirectionSet dirs = discretize(d, m);
        REQUIRE(dirs.m() == m);
        REQUIRE(dirs.d() == d);
        for (Eigen::Index l = 0; l < m; ++l) {
            REQUIRE(std::abs(dirs.directions.row(l).norm() - 1.0) <= 1e-12);
            REQUIRE(dirs.directions(l, 0) > 0.0);
        }
        REQUIRE_NOTHROW(validate_directions(dirs.directions));
    }
}

TEST_CASE("d=3 spiral spreads points at least 0.8 of the equal-area angle", "[sphere]") {
    const Eigen::Index m = 32;
    const DirectionSet dirs = discretize(3, m);
    double min_angle = 10.0;
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = a + 1; b < m; ++b) {
            const double dot =
                std::clamp(dirs.directions.row(a).dot(dirs.directions.row(b)), -1.0, 1.0);
            min_angle = std::min(min_angle, std::acos(dot));
        }
    const double ideal = std::sqrt(2.0 * std::acos(-1.0) / static_cast<double>(m));
    REQUIRE(min_angle >= 0.8 * ideal);
}

TEST_CASE("discretize is deterministic", "[sphere]") {
    for (Eigen::Index d : {2, 3, 4}) {
        const DirectionSet a = discretize(d, 16);
        const DirectionSet b = discretize(d, 16);
        REQUIRE(a.directions == b.directions);
    }
}

TEST_CASE("invalid m is rejected", "[sphere]") {
    try {
        discretize(2, 0);
        FAIL("expected an error");
    } catch (const Error& e) {
        REQUIRE(e.code == ErrorCode::InvalidM);
    }
}
