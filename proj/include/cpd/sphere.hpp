#pragma once

#include "cpd/model.hpp"

namespace cpd {

/// Deterministic quasi-uniform discretization of the half-sphere
/// {a in R^d : |a| = 1, a_1 > 0} into m points.
///   d = 1  -> the single direction (1), regardless of m
///   d = 2  -> midpoint angular grid, phi_l = -pi/2 + pi*(l - 1/2)/m
///   d = 3  -> Fibonacci spiral with equal-area heights along the first axis
///   d >= 4 -> Halton low-discrepancy points mapped through the normal
///             quantile and radially projected, folded onto a_1 > 0
/// Throws Error{InvalidM} for m < 1.
DirectionSet discretize(Eigen::Index d, Eigen::Index m);

}  // namespace cpd
